use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context};
use serde::Serialize;

use crate::harness::Table;

/// Cross-run statistics at one evaluation index. Runs that stopped earlier
/// contribute their final state.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckpointStats {
    pub evals: u64,
    pub mean_best_f: f64,
    pub median_best_f: f64,
    pub std_best_f: f64,
    pub mean_v: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub success_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_hv: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub median_hv: Option<f64>,
}

/// Aggregate of a directory of run logs.
///
/// FEs-to-target count an unsuccessful run at the full budget.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub runs: usize,
    pub budget: u64,
    pub mean_evaluations: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub success_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_fes: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub median_fes: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub std_fes: Option<f64>,
    pub mean_final_best_f: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_final_hv: Option<f64>,
    pub checkpoints: Vec<CheckpointStats>,
}

pub(crate) fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub(crate) fn median(xs: &[f64]) -> f64 {
    let mut s = xs.to_vec();
    s.sort_by(f64::total_cmp);
    let k = s.len();
    if k % 2 == 1 {
        s[k / 2]
    } else {
        (s[k / 2 - 1] + s[k / 2]) / 2.0
    }
}

/// Sample standard deviation (0 for a single value).
pub(crate) fn std_dev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let mu = mean(xs);
    (xs.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

struct Row {
    evals: u64,
    best_f: f64,
    v: Vec<f64>,
    hv: Option<f64>,
}

fn read_run(path: &Path) -> anyhow::Result<Vec<Row>> {
    let t = Table::read(path)?;
    let evals = t.numbers("evals")?;
    let best = t.numbers("best_f")?;
    let v_cols: Vec<usize> = (1..)
        .map_while(|i| t.column(&format!("v{i}")))
        .collect();
    let hv = t.column("hv").map(|_| t.numbers("hv")).transpose()?;
    let mut rows = Vec::with_capacity(t.rows.len());
    for (i, raw) in t.rows.iter().enumerate() {
        let v = v_cols
            .iter()
            .map(|&c| raw[c].parse::<f64>().with_context(|| format!("{}: bad block value", path.display())))
            .collect::<anyhow::Result<Vec<f64>>>()?;
        rows.push(Row { evals: evals[i] as u64, best_f: best[i], v, hv: hv.as_ref().map(|h| h[i]) });
    }
    if rows.is_empty() {
        bail!("{} has no rows", path.display());
    }
    Ok(rows)
}

/// Reads `runs.csv` and every `run_XXX.csv` it lists in `dir`.
pub fn aggregate_runs(dir: &Path) -> anyhow::Result<Summary> {
    let index_path = dir.join("runs.csv");
    if !index_path.exists() {
        bail!("{} contains no run logs (runs.csv missing)", dir.display());
    }
    let index = Table::read(&index_path)?;
    if index.rows.is_empty() {
        bail!("{} lists no runs", index_path.display());
    }
    let ids = index.numbers("run")?;
    let budgets = index.numbers("budget")?;
    let used = index.numbers("evaluations_used")?;
    let budget = budgets.iter().copied().fold(0.0, f64::max) as u64;
    let hit_at: Option<Vec<Option<f64>>> = index.column("hit_at").map(|c| {
        index.rows.iter().map(|r| r[c].parse::<f64>().ok()).collect()
    });
    let final_hv = index.column("final_hv").map(|_| index.numbers("final_hv")).transpose()?;

    let runs: Vec<Vec<Row>> = ids
        .iter()
        .map(|&id| read_run(&dir.join(format!("run_{:03}.csv", id as u64))))
        .collect::<anyhow::Result<_>>()?;
    let grid: BTreeSet<u64> = runs.iter().flatten().map(|r| r.evals).collect();
    let m = runs[0][0].v.len();

    let mut cursor = vec![0usize; runs.len()];
    let mut checkpoints = Vec::with_capacity(grid.len());
    for &e in &grid {
        let mut fs = Vec::with_capacity(runs.len());
        let mut hvs = Vec::new();
        let mut v_sum = vec![0.0; m];
        for (r, rows) in runs.iter().enumerate() {
            while cursor[r] + 1 < rows.len() && rows[cursor[r] + 1].evals <= e {
                cursor[r] += 1;
            }
            let row = &rows[cursor[r]];
            fs.push(row.best_f);
            if let Some(hv) = row.hv {
                hvs.push(hv);
            }
            for (s, v) in v_sum.iter_mut().zip(&row.v) {
                *s += v;
            }
        }
        let success_rate = hit_at.as_ref().map(|hits| {
            hits.iter().filter(|h| h.is_some_and(|h| h as u64 <= e)).count() as f64 / runs.len() as f64
        });
        checkpoints.push(CheckpointStats {
            evals: e,
            mean_best_f: mean(&fs),
            median_best_f: median(&fs),
            std_best_f: std_dev(&fs),
            mean_v: v_sum.iter().map(|s| s / runs.len() as f64).collect(),
            success_rate,
            mean_hv: (!hvs.is_empty()).then(|| mean(&hvs)),
            median_hv: (!hvs.is_empty()).then(|| median(&hvs)),
        });
    }

    let fes: Option<Vec<f64>> = hit_at
        .as_ref()
        .map(|hits| hits.iter().map(|h| h.unwrap_or(budget as f64)).collect());
    let finals: Vec<f64> = runs.iter().map(|rows| rows[rows.len() - 1].best_f).collect();
    Ok(Summary {
        runs: runs.len(),
        budget,
        mean_evaluations: mean(&used),
        success_count: hit_at.as_ref().map(|h| h.iter().filter(|h| h.is_some()).count()),
        mean_fes: fes.as_deref().map(mean),
        median_fes: fes.as_deref().map(median),
        std_fes: fes.as_deref().map(std_dev),
        mean_final_best_f: mean(&finals),
        mean_final_hv: final_hv.as_deref().map(mean),
        checkpoints,
    })
}

impl Summary {
    /// Checkpoint table for plotting.
    pub fn to_csv(&self) -> String {
        let m = self.checkpoints.first().map_or(0, |c| c.mean_v.len());
        let with_success = self.checkpoints.first().is_some_and(|c| c.success_rate.is_some());
        let with_hv = self.checkpoints.first().is_some_and(|c| c.mean_hv.is_some());
        let mut out = String::from("evals,mean_best_f,median_best_f,std_best_f");
        for i in 1..=m {
            let _ = write!(out, ",mean_v{i}");
        }
        if with_success {
            out.push_str(",success_rate");
        }
        if with_hv {
            out.push_str(",mean_hv,median_hv");
        }
        out.push('\n');
        for c in &self.checkpoints {
            let _ = write!(out, "{},{},{},{}", c.evals, c.mean_best_f, c.median_best_f, c.std_best_f);
            for v in &c.mean_v {
                let _ = write!(out, ",{v}");
            }
            if let Some(s) = c.success_rate {
                let _ = write!(out, ",{s}");
            }
            if let (Some(a), Some(b)) = (c.mean_hv, c.median_hv) {
                let _ = write!(out, ",{a},{b}");
            }
            out.push('\n');
        }
        out
    }
}
