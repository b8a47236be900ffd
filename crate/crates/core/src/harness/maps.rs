//! CSV dumps of landscape queries, optionally drawn as SVG.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context};

use crate::harness::plot::{render_svg, Chart};
use crate::harness::write_file;
use crate::landscape::{objective_space, pareto_front_oracle, Landscape};
use crate::problems::{BiProblem, Problem};

/// Largest number of distance vectors written in one table.
pub const MAX_DISTANCE_ROWS: u128 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    /// `f` values reachable with exactly `k` ones.
    Ones,
    /// Range of `f` for every vector of per-block distances to the optimum.
    Distance,
    /// Range of `f` with two block values fixed.
    Values,
    /// Attainable objective vectors of a bi-objective problem.
    Objectives,
}

impl FromStr for Axis {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ones" => Ok(Axis::Ones),
            "distance" => Ok(Axis::Distance),
            "values" => Ok(Axis::Values),
            "objectives" => Ok(Axis::Objectives),
            _ => bail!("unknown axis `{s}` (expected ones, distance, values or objectives)"),
        }
    }
}

#[allow(clippy::large_enum_variant)]
pub enum LandscapeTarget {
    Single(Problem),
    Bi(BiProblem),
}

impl LandscapeTarget {
    fn single(&self, axis: Axis) -> anyhow::Result<&Problem> {
        match self {
            LandscapeTarget::Single(p) => Ok(p),
            LandscapeTarget::Bi(_) => bail!("axis {axis:?} needs a single-objective problem"),
        }
    }
}

/// Builds the table for `axis`.
pub fn landscape_csv(target: &LandscapeTarget, axis: Axis) -> anyhow::Result<String> {
    let mut out = String::new();
    match axis {
        Axis::Ones => {
            let land = Landscape::new(target.single(axis)?)?;
            out.push_str("k,f\n");
            for k in 0..=land.problem().n() {
                for f in land.attainable_by_ones_count(k)? {
                    let _ = writeln!(out, "{k},{f}");
                }
            }
        }
        Axis::Distance => {
            let land = Landscape::new(target.single(axis)?)?;
            let (m, len) = (land.problem().m(), land.problem().block_len());
            let rows = (len as u128 + 1).checked_pow(m as u32).unwrap_or(u128::MAX);
            if rows > MAX_DISTANCE_ROWS {
                bail!("{rows} distance vectors exceed the limit of {MAX_DISTANCE_ROWS}");
            }
            out.push_str("axis");
            for i in 1..=m {
                let _ = write!(out, ",d{i}");
            }
            out.push_str(",f_min,f_max\n");
            let mut d = vec![0usize; m];
            loop {
                let (lo, hi) = land.attainable_by_distance(&d)?;
                out.push_str("distance");
                for x in &d {
                    let _ = write!(out, ",{x}");
                }
                let _ = writeln!(out, ",{lo},{hi}");
                // Odometer with the last block varying fastest.
                let Some(i) = (0..m).rev().find(|&i| d[i] < len) else { break };
                d[i] += 1;
                d[i + 1..].fill(0);
            }
        }
        Axis::Values => {
            let land = Landscape::new(target.single(axis)?)?;
            let m = land.problem().m();
            out.push_str("axis,block_a,v_a,block_b,v_b,f_min,f_max\n");
            let pairs: Vec<(usize, usize)> = if m == 1 {
                vec![(0, 0)]
            } else {
                (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).collect()
            };
            for (a, b) in pairs {
                let va = land.ones_profile(a).all_values();
                let vb = land.ones_profile(b).all_values();
                for &x in &va {
                    for &y in &vb {
                        if a == b && x != y {
                            continue;
                        }
                        let fixed = BTreeMap::from([(a, x), (b, y)]);
                        let (lo, hi) = land.attainable_by_block_values(&fixed)?;
                        let _ = writeln!(out, "values,{},{x},{},{y},{lo},{hi}", a + 1, b + 1);
                    }
                }
            }
        }
        Axis::Objectives => {
            let LandscapeTarget::Bi(bi) = target else {
                bail!("axis objectives needs a bi-objective problem");
            };
            let front = pareto_front_oracle(bi)?;
            out.push_str("y1,y2,pareto\n");
            for y in objective_space(bi)? {
                let on_front = front.iter().any(|p| p.y == y);
                let _ = writeln!(out, "{},{},{}", y.y1, y.y2, on_front as u8);
            }
        }
    }
    Ok(out)
}

fn chart_of(csv: &str, axis: Axis, m: usize) -> anyhow::Result<(Chart, &'static str, &'static str)> {
    let t = crate::harness::Table::parse(csv)?;
    Ok(match axis {
        Axis::Ones => {
            let pts = t.numbers("k")?.into_iter().zip(t.numbers("f")?).collect();
            (Chart::Series { lines: false, series: vec![("f".into(), pts)] }, "ones", "f")
        }
        Axis::Distance => {
            let mut total = vec![0.0; t.rows.len()];
            for i in 1..=m {
                for (s, d) in total.iter_mut().zip(t.numbers(&format!("d{i}"))?) {
                    *s += d;
                }
            }
            let lo = total.iter().copied().zip(t.numbers("f_min")?).collect();
            let hi = total.into_iter().zip(t.numbers("f_max")?).collect();
            let series = vec![("f_min".into(), lo), ("f_max".into(), hi)];
            (Chart::Series { lines: false, series }, "total distance", "f")
        }
        Axis::Values => {
            // The pair (first block, last block).
            let last = m.to_string();
            let cells = t
                .rows
                .iter()
                .filter(|r| r[1] == "1" && r[3] == last)
                .map(|r| -> anyhow::Result<(f64, f64, f64)> { Ok((r[2].parse()?, r[4].parse()?, r[6].parse()?)) })
                .collect::<anyhow::Result<Vec<_>>>()?;
            (Chart::Heatmap(cells), "v_1", "v_m")
        }
        Axis::Objectives => {
            let (mut all, mut front) = (Vec::new(), Vec::new());
            for ((a, b), p) in t.numbers("y1")?.into_iter().zip(t.numbers("y2")?).zip(t.numbers("pareto")?) {
                if p == 1.0 { front.push((a, b)) } else { all.push((a, b)) }
            }
            let series = vec![("dominated".into(), all), ("pareto".into(), front)];
            (Chart::Series { lines: false, series }, "y1", "y2")
        }
    })
}

/// Writes the `axis` table to `out` and, if asked, an SVG drawing of it.
pub fn cmd_landscape(target: &LandscapeTarget, axis: Axis, out: &Path, svg: Option<&Path>) -> anyhow::Result<()> {
    let csv = landscape_csv(target, axis)?;
    write_file(out, &csv)?;
    if let Some(svg_path) = svg {
        let (m, name) = match target {
            LandscapeTarget::Single(p) => (p.m(), p.name().to_string()),
            LandscapeTarget::Bi(b) => (b.first().m(), b.name().to_string()),
        };
        let (chart, xl, yl) = chart_of(&csv, axis, m)?;
        let title = format!("{name}: {}", format!("{axis:?}").to_lowercase());
        let svg = render_svg(&chart, xl, yl, &title, false).context("cannot draw landscape")?;
        write_file(svg_path, &svg)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{make_biobjective, make_suite_instance, BiSuiteId, SuiteId};

    fn single(id: SuiteId, n: usize, m: usize) -> LandscapeTarget {
        LandscapeTarget::Single(Problem::new(make_suite_instance(id, n, m).unwrap()).unwrap())
    }

    #[test]
    fn ones_table_of_onemax_is_diagonal() {
        let csv = landscape_csv(&single(SuiteId::F1, 6, 2), Axis::Ones).unwrap();
        let t = crate::harness::Table::parse(&csv).unwrap();
        assert_eq!(t.numbers("k").unwrap(), t.numbers("f").unwrap());
        assert_eq!(t.rows.len(), 7);
    }

    #[test]
    fn distance_table_starts_at_optimum() {
        let csv = landscape_csv(&single(SuiteId::F6, 40, 4), Axis::Distance).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("axis,d1,d2,d3,d4,f_min,f_max"));
        assert_eq!(lines.next(), Some("distance,0,0,0,0,45,45"));
        assert_eq!(csv.lines().count(), 1 + 11usize.pow(4));
    }

    #[test]
    fn distance_table_is_refused_when_huge() {
        assert!(landscape_csv(&single(SuiteId::F1, 60, 6), Axis::Distance).is_err());
    }

    #[test]
    fn values_and_objectives() {
        let csv = landscape_csv(&single(SuiteId::F7, 40, 4), Axis::Values).unwrap();
        assert!(csv.lines().any(|l| l == "values,1,3,4,13,3,3"));
        let bi = BiProblem::new(make_biobjective(BiSuiteId::BF1, 8, 1).unwrap()).unwrap();
        let csv = landscape_csv(&LandscapeTarget::Bi(bi), Axis::Objectives).unwrap();
        // OneMinMax: every vector (k, 8 - k) is attainable and optimal.
        assert_eq!(csv.lines().count(), 10);
        assert!(csv.lines().skip(1).all(|l| l.ends_with(",1")));
        assert!(landscape_csv(&single(SuiteId::F1, 8, 1), Axis::Objectives).is_err());
    }

    #[test]
    fn svg_is_written() {
        let dir = tempfile::tempdir().unwrap();
        let (csv, svg) = (dir.path().join("m.csv"), dir.path().join("m.svg"));
        cmd_landscape(&single(SuiteId::F7, 40, 4), Axis::Values, &csv, Some(&svg)).unwrap();
        assert!(std::fs::read_to_string(svg).unwrap().contains("<rect"));
    }
}
