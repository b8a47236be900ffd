use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::harness::aggregate::mean;
use crate::harness::{with_threads, write_file};
use crate::problems::{make_suite_instance, Problem, SuiteId};
use crate::random::RandomSource;
use crate::soea::{self, SoConfig, Variant};

/// Rows: label, suite instance, number of blocks.
pub const TABLE2_ROWS: [(&str, SuiteId, usize); 6] = [
    ("OneMax", SuiteId::F1, 1),
    ("LeadingOnes", SuiteId::F2, 1),
    ("Jump", SuiteId::F3, 1),
    ("Epistasis", SuiteId::F4, 1),
    ("DBP (F5)", SuiteId::F5, 4),
    ("GCP (F10)", SuiteId::F10, 4),
];

/// Columns, in table order.
pub const TABLE2_ALGORITHMS: [Variant; 5] =
    [Variant::OllGa, Variant::Ea, Variant::TwoRate, Variant::VarEa, Variant::Fga];

#[derive(Clone, Debug)]
pub struct Table2Options {
    pub n: usize,
    pub runs: usize,
    pub seed: u64,
    pub budget: u64,
    pub lambda: usize,
    pub threads: Option<usize>,
}

impl Default for Table2Options {
    fn default() -> Self {
        Table2Options { n: 40, runs: 50, seed: 0, budget: 10_000_000, lambda: 10, threads: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table2Cell {
    pub problem: String,
    pub algorithm: Variant,
    pub mean_fes: f64,
    pub successes: usize,
    pub runs: usize,
    /// 1 = fewest mean FEs; ties keep column order.
    pub rank: usize,
}

/// Mean FEs-to-optimum of every algorithm on every row. Failed runs count
/// at the budget.
pub fn table2(opts: &Table2Options) -> crate::Result<Vec<Table2Cell>> {
    let root = RandomSource::new(opts.seed);
    let mut cells = Vec::new();
    for (r, (label, id, m)) in TABLE2_ROWS.iter().enumerate() {
        let problem = Problem::new(make_suite_instance(*id, opts.n, *m)?)?;
        let target = problem.known_optimum();
        let row_rng = root.derive(r as u64);
        let mut row = Vec::new();
        for (a, &variant) in TABLE2_ALGORITHMS.iter().enumerate() {
            let cfg = SoConfig { lambda: opts.lambda, ..SoConfig::new(variant) };
            let algo_rng = row_rng.derive(a as u64);
            let results: Vec<crate::Result<soea::RunResult>> = (0..opts.runs as u64)
                .into_par_iter()
                .map(|i| soea::run(&cfg, &problem, opts.budget, target, &mut algo_rng.derive(i)))
                .collect();
            let results = results.into_iter().collect::<crate::Result<Vec<_>>>()?;
            let fes: Vec<f64> = results.iter().map(|r| r.fes(opts.budget) as f64).collect();
            row.push(Table2Cell {
                problem: label.to_string(),
                algorithm: variant,
                mean_fes: mean(&fes),
                successes: results.iter().filter(|r| r.hit_target).count(),
                runs: opts.runs,
                rank: 0,
            });
        }
        let mut order: Vec<usize> = (0..row.len()).collect();
        order.sort_by(|&a, &b| row[a].mean_fes.total_cmp(&row[b].mean_fes).then(a.cmp(&b)));
        for (rank, &i) in order.iter().enumerate() {
            row[i].rank = rank + 1;
        }
        cells.extend(row);
    }
    Ok(cells)
}

fn algorithm_title(v: Variant) -> &'static str {
    match v {
        Variant::OllGa => "(1+(l,l)) GA",
        Variant::Ea => "(1+l) EA",
        Variant::TwoRate => "(1+l) two-rate EA",
        Variant::VarEa => "(1+l) var EA",
        Variant::Fga => "fGA",
        Variant::MuGa => "(mu+1) GA",
    }
}

/// Wide table: one row per problem, cells `mean (rank)`.
pub fn wide_csv(cells: &[Table2Cell]) -> String {
    let mut out = String::from("problem");
    for v in TABLE2_ALGORITHMS {
        let _ = write!(out, ",{}", algorithm_title(v));
    }
    out.push('\n');
    for chunk in cells.chunks(TABLE2_ALGORITHMS.len()) {
        out.push_str(&chunk[0].problem);
        for c in chunk {
            let _ = write!(out, ",{} ({})", c.mean_fes.round(), c.rank);
        }
        out.push('\n');
    }
    out
}

pub fn long_csv(cells: &[Table2Cell]) -> String {
    let mut out = String::from("problem,algorithm,mean_fes,rank,successes,runs\n");
    for c in cells {
        let _ = writeln!(out, "{},{},{},{},{},{}", c.problem, c.algorithm, c.mean_fes, c.rank, c.successes, c.runs);
    }
    out
}

/// Writes `table2.csv` (wide) and `table2_long.csv` into `out`.
pub fn cmd_table2(opts: &Table2Options, out: &Path) -> anyhow::Result<Vec<Table2Cell>> {
    let cells = with_threads(opts.threads, || table2(opts))??;
    write_file(&out.join("table2.csv"), &wide_csv(&cells))?;
    write_file(&out.join("table2_long.csv"), &long_csv(&cells))?;
    Ok(cells)
}
