//! Minimal deterministic SVG charts.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context};

use crate::harness::{write_file, Table};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotKind {
    Lines,
    Heatmap,
    Scatter,
}

impl FromStr for PlotKind {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lines" => Ok(PlotKind::Lines),
            "heatmap" => Ok(PlotKind::Heatmap),
            "scatter" => Ok(PlotKind::Scatter),
            _ => bail!("unknown plot kind `{s}` (expected lines, heatmap or scatter)"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PlotOptions {
    pub kind: PlotKind,
    pub log_x: bool,
    pub x: Option<String>,
    pub y: Option<String>,
    pub z: Option<String>,
    pub title: Option<String>,
}

impl PlotOptions {
    pub fn new(kind: PlotKind) -> Self {
        PlotOptions { kind, log_x: false, x: None, y: None, z: None, title: None }
    }
}

/// Data ready to draw.
pub enum Chart {
    /// Named `(x, y)` series drawn as polylines or markers.
    Series { lines: bool, series: Vec<(String, Vec<(f64, f64)>)> },
    /// `(x, y, z)` cells on the grid of distinct `x` and `y` values.
    Heatmap(Vec<(f64, f64, f64)>),
}

fn fmt_num(v: f64) -> String {
    if v == v.round() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{:.3}", v).trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    log_x: bool,
}

impl Frame {
    fn new(xs: impl Iterator<Item = f64> + Clone, ys: impl Iterator<Item = f64> + Clone, log_x: bool) -> Frame {
        let tx = |x: f64| if log_x { x.log10() } else { x };
        let (mut x0, mut x1) = xs.clone().map(tx).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
        let (mut y0, mut y1) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| (a.min(y), b.max(y)));
        if x0 == x1 {
            x0 -= 0.5;
            x1 += 0.5;
        }
        if y0 == y1 {
            y0 -= 0.5;
            y1 += 0.5;
        }
        Frame { x0, x1, y0, y1, log_x }
    }

    fn px(&self, x: f64) -> f64 {
        let x = if self.log_x { x.log10() } else { x };
        LEFT + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - TOP - BOTTOM)
    }

    fn axes(&self, out: &mut String, x_label: &str, y_label: &str) {
        let (l, r, t, b) = (LEFT, WIDTH - RIGHT, TOP, HEIGHT - BOTTOM);
        let _ = writeln!(out, r#"<rect x="{l}" y="{t}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#, r - l, b - t);
        let x_ticks: Vec<f64> = if self.log_x {
            (self.x0.ceil() as i32..=self.x1.floor() as i32).map(|e| 10f64.powi(e)).collect()
        } else {
            (0..=4).map(|i| self.x0 + (self.x1 - self.x0) * i as f64 / 4.0).collect()
        };
        for x in x_ticks {
            let px = self.px(x);
            let _ = writeln!(out, r#"<line x1="{px:.2}" y1="{b}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#, b + 5.0);
            let _ = writeln!(out, r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle" font-size="11">{}</text>"#, b + 18.0, fmt_num(x));
        }
        for i in 0..=4 {
            let y = self.y0 + (self.y1 - self.y0) * i as f64 / 4.0;
            let py = self.py(y);
            let _ = writeln!(out, r#"<line x1="{:.2}" y1="{py:.2}" x2="{l}" y2="{py:.2}" stroke="black"/>"#, l - 5.0);
            let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-size="11">{}</text>"#, l - 8.0, py + 4.0, fmt_num(y));
        }
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="12">{}</text>"#, (l + r) / 2.0, HEIGHT - 12.0, escape(x_label));
        let _ = writeln!(
            out,
            r#"<text x="16" y="{:.2}" text-anchor="middle" font-size="12" transform="rotate(-90 16 {:.2})">{}</text>"#,
            (t + b) / 2.0,
            (t + b) / 2.0,
            escape(y_label)
        );
    }
}

/// Renders `chart`; identical input gives identical bytes.
pub fn render_svg(chart: &Chart, x_label: &str, y_label: &str, title: &str, log_x: bool) -> anyhow::Result<String> {
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    );
    if !title.is_empty() {
        let _ = writeln!(out, r#"<text x="{:.2}" y="18" text-anchor="middle" font-size="14">{}</text>"#, (LEFT + WIDTH - RIGHT) / 2.0, escape(title));
    }
    match chart {
        Chart::Series { lines, series } => {
            let pts = series.iter().flat_map(|(_, s)| s.iter());
            if pts.clone().next().is_none() {
                bail!("nothing to plot");
            }
            if log_x && pts.clone().any(|p| p.0 <= 0.0) {
                bail!("log-scaled x axis needs positive x values");
            }
            let frame = Frame::new(pts.clone().map(|p| p.0), pts.map(|p| p.1), log_x);
            frame.axes(&mut out, x_label, y_label);
            for (k, (name, s)) in series.iter().enumerate() {
                let colour = PALETTE[k % PALETTE.len()];
                if *lines {
                    let path: Vec<String> = s.iter().map(|&(x, y)| format!("{:.2},{:.2}", frame.px(x), frame.py(y))).collect();
                    let _ = writeln!(out, r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#, path.join(" "));
                } else {
                    for &(x, y) in s {
                        let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{colour}"/>"#, frame.px(x), frame.py(y));
                    }
                }
                let ly = TOP + 14.0 + 18.0 * k as f64;
                let lx = WIDTH - RIGHT + 12.0;
                let _ = writeln!(out, r#"<rect x="{lx:.2}" y="{:.2}" width="12" height="3" fill="{colour}"/>"#, ly - 4.0);
                let _ = writeln!(out, r#"<text x="{:.2}" y="{ly:.2}" font-size="11">{}</text>"#, lx + 18.0, escape(name));
            }
        }
        Chart::Heatmap(cells) => {
            if cells.is_empty() {
                bail!("nothing to plot");
            }
            let mut xs: Vec<f64> = cells.iter().map(|c| c.0).collect();
            let mut ys: Vec<f64> = cells.iter().map(|c| c.1).collect();
            for v in [&mut xs, &mut ys] {
                v.sort_by(f64::total_cmp);
                v.dedup();
            }
            let (z0, z1) = cells.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), c| (a.min(c.2), b.max(c.2)));
            let cw = (WIDTH - LEFT - RIGHT) / xs.len() as f64;
            let ch = (HEIGHT - TOP - BOTTOM) / ys.len() as f64;
            // Index axes: one column per distinct x, one row per distinct y.
            let frame = Frame { x0: -0.5, x1: xs.len() as f64 - 0.5, y0: -0.5, y1: ys.len() as f64 - 0.5, log_x: false };
            for &(x, y, z) in cells {
                let i = xs.partition_point(|&v| v < x);
                let j = ys.partition_point(|&v| v < y);
                let t = if z1 > z0 { (z - z0) / (z1 - z0) } else { 0.5 };
                let _ = writeln!(
                    out,
                    r#"<rect x="{:.2}" y="{:.2}" width="{cw:.2}" height="{ch:.2}" fill="{}"><title>{}, {}: {}</title></rect>"#,
                    frame.px(i as f64 - 0.5),
                    frame.py(j as f64 + 0.5),
                    ramp(t),
                    fmt_num(x),
                    fmt_num(y),
                    fmt_num(z)
                );
            }
            let (l, r, t, b) = (LEFT, WIDTH - RIGHT, TOP, HEIGHT - BOTTOM);
            let _ = writeln!(out, r#"<rect x="{l}" y="{t}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#, r - l, b - t);
            for (i, x) in xs.iter().enumerate().step_by(xs.len().div_ceil(10)) {
                let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="11">{}</text>"#, frame.px(i as f64), b + 16.0, fmt_num(*x));
            }
            for (j, y) in ys.iter().enumerate().step_by(ys.len().div_ceil(10)) {
                let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-size="11">{}</text>"#, l - 6.0, frame.py(j as f64) + 4.0, fmt_num(*y));
            }
            let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="12">{}</text>"#, (l + r) / 2.0, HEIGHT - 12.0, escape(x_label));
            let _ = writeln!(out, r#"<text x="16" y="{:.2}" text-anchor="middle" font-size="12" transform="rotate(-90 16 {:.2})">{}</text>"#, (t + b) / 2.0, (t + b) / 2.0, escape(y_label));
            let lx = WIDTH - RIGHT + 12.0;
            let _ = writeln!(out, r#"<rect x="{lx:.2}" y="{t}" width="14" height="14" fill="{}"/>"#, ramp(1.0));
            let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" font-size="11">{}</text>"#, lx + 20.0, t + 11.0, fmt_num(z1));
            let _ = writeln!(out, r#"<rect x="{lx:.2}" y="{:.2}" width="14" height="14" fill="{}"/>"#, t + 20.0, ramp(0.0));
            let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" font-size="11">{}</text>"#, lx + 20.0, t + 31.0, fmt_num(z0));
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Light yellow (0) to dark blue (1).
fn ramp(t: f64) -> String {
    let lo = [255.0, 247.0, 188.0];
    let hi = [8.0, 48.0, 107.0];
    let c: Vec<u8> = (0..3).map(|i| (lo[i] + (hi[i] - lo[i]) * t.clamp(0.0, 1.0)).round() as u8).collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

fn pick(table: &Table, wanted: &Option<String>, defaults: &[&str], what: &str) -> anyhow::Result<String> {
    if let Some(w) = wanted {
        if table.column(w).is_none() {
            bail!("column `{w}` not found (have {})", table.header.join(", "));
        }
        return Ok(w.clone());
    }
    defaults
        .iter()
        .find(|d| table.column(d).is_some())
        .map(|d| d.to_string())
        .with_context(|| format!("no {what} column among {} (have {})", defaults.join(", "), table.header.join(", ")))
}

fn label_of(path: &Path) -> String {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    // `out/ea/summary.csv` is labelled by its directory.
    if matches!(stem.as_str(), "summary" | "runs") {
        if let Some(dir) = path.parent().and_then(Path::file_name) {
            return dir.to_string_lossy().into_owned();
        }
    }
    stem
}

/// Reads CSV inputs and writes an SVG chart to `output`.
pub fn cmd_plot(inputs: &[PathBuf], opts: &PlotOptions, output: &Path) -> anyhow::Result<()> {
    if inputs.is_empty() {
        bail!("no input files");
    }
    let tables = inputs.iter().map(|p| Table::read(p)).collect::<anyhow::Result<Vec<_>>>()?;
    let (chart, x_name, y_name) = match opts.kind {
        PlotKind::Lines | PlotKind::Scatter => {
            let lines = opts.kind == PlotKind::Lines;
            let (dx, dy): (Vec<&str>, Vec<&str>) = if lines {
                (vec!["evals"], vec!["mean_hv", "hv", "mean_best_f", "best_f"])
            } else {
                (vec!["y1", "k", "evals"], vec!["y2", "f", "best_f"])
            };
            let mut series = Vec::new();
            let (mut xn, mut yn) = (String::new(), String::new());
            for (path, t) in inputs.iter().zip(&tables) {
                xn = pick(t, &opts.x, &dx, "x").with_context(|| path.display().to_string())?;
                yn = pick(t, &opts.y, &dy, "y").with_context(|| path.display().to_string())?;
                let pts: Vec<(f64, f64)> = t.numbers(&xn)?.into_iter().zip(t.numbers(&yn)?).collect();
                series.push((label_of(path), pts));
            }
            (Chart::Series { lines, series }, xn, yn)
        }
        PlotKind::Heatmap => {
            let t = &tables[0];
            let xn = pick(t, &opts.x, &["v_a", "x"], "x")?;
            let yn = pick(t, &opts.y, &["v_b", "y"], "y")?;
            let zn = pick(t, &opts.z, &["f_max", "z"], "z")?;
            let (xs, ys, zs) = (t.numbers(&xn)?, t.numbers(&yn)?, t.numbers(&zn)?);
            let mut cells: Vec<(f64, f64, f64)> = Vec::new();
            for ((x, y), z) in xs.into_iter().zip(ys).zip(zs) {
                match cells.iter_mut().find(|c| c.0 == x && c.1 == y) {
                    Some(c) => c.2 = c.2.max(z),
                    None => cells.push((x, y, z)),
                }
            }
            (Chart::Heatmap(cells), xn, yn)
        }
    };
    let svg = render_svg(&chart, &x_name, &y_name, opts.title.as_deref().unwrap_or(""), opts.log_x)?;
    write_file(output, &svg)
}
