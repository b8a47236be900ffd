//! Experiment orchestration behind the `blockbench` binary.
//!
//! Every artifact is a deterministic function of the config and its master
//! seed: run `i` uses the source derived from the master seed with index `i`,
//! results are gathered in run order, and floats are written in Rust's
//! shortest round-trip form.

mod aggregate;
mod config;
mod maps;
mod plot;
mod run;
mod table2;

use std::path::Path;

use anyhow::Context;

pub use aggregate::{aggregate_runs, CheckpointStats, Summary};
pub use config::{
    load_config, parse_config, ConfigError, ExperimentConfig, LoadedConfig, OneOrMany, ProblemRef,
    DEFAULT_BUDGET, DEFAULT_CHECKPOINT_BASE, DEFAULT_RUNS,
};
pub use maps::{cmd_landscape, landscape_csv, Axis, LandscapeTarget, MAX_DISTANCE_ROWS};
pub use plot::{cmd_plot, render_svg, PlotKind, PlotOptions};
pub use run::{cmd_bi, cmd_run, AlgorithmReport};
pub use table2::{cmd_table2, table2, Table2Cell, Table2Options, TABLE2_ALGORITHMS, TABLE2_ROWS};

/// Evaluation indices `round(base^k)`, deduplicated, up to and including
/// `budget`.
pub fn checkpoints(budget: u64, base: f64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut x = 1.0f64;
    while x.round() as u64 <= budget {
        let c = x.round() as u64;
        if out.last() != Some(&c) {
            out.push(c);
        }
        x *= base;
    }
    if out.last() != Some(&budget) {
        out.push(budget);
    }
    out
}

/// Runs `f` on a pool of `threads` workers (all cores when `None`).
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> anyhow::Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t.max(1));
    }
    let pool = builder.build().context("cannot build worker pool")?;
    Ok(pool.install(f))
}

/// Worker count from `BLOCKBENCH_THREADS`, if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var("BLOCKBENCH_THREADS").ok()?.trim().parse().ok().filter(|&t| t > 0)
}

/// Suite catalog, one line per instance.
pub fn catalog() -> String {
    use crate::problems::{BiSuiteId, SuiteId};
    let mut out = String::new();
    for id in SuiteId::ALL {
        out.push_str(&format!("{id:<4} {}\n", id.describe()));
    }
    for id in BiSuiteId::ALL {
        out.push_str(&format!("{id:<4} {}\n", id.describe()));
    }
    out
}

pub(crate) fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).with_context(|| format!("cannot create {}", parent.display()))?;
    }
    std::fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

/// Parsed comma-separated table with a header row.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn read(path: &Path) -> anyhow::Result<Table> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Table::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn parse(text: &str) -> anyhow::Result<Table> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<String> = lines
            .next()
            .context("empty table")?
            .split(',')
            .map(|s| s.trim().to_string())
            .collect();
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let row: Vec<String> = line.split(',').map(|s| s.trim().to_string()).collect();
            anyhow::ensure!(
                row.len() == header.len(),
                "row {} has {} fields, header has {}",
                i + 2,
                row.len(),
                header.len()
            );
            rows.push(row);
        }
        Ok(Table { header, rows })
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn numbers(&self, name: &str) -> anyhow::Result<Vec<f64>> {
        let c = self.column(name).with_context(|| format!("missing column `{name}`"))?;
        self.rows
            .iter()
            .map(|r| {
                r[c].parse::<f64>()
                    .with_context(|| format!("column `{name}`: `{}` is not a number", r[c]))
            })
            .collect()
    }
}
