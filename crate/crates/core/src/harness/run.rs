use std::fmt::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail};
use rayon::prelude::*;
use serde_json::json;

use crate::harness::aggregate::{aggregate_runs, Summary};
use crate::harness::config::{LoadedConfig, DEFAULT_BUDGET};
use crate::harness::{checkpoints, with_threads, write_file};
use crate::moea::{run_mo, MoVariant, ObjectivePair, ParetoArchive};
use crate::problems::BiProblem;
use crate::random::RandomSource;
use crate::soea::{self, RunResult, SoConfig};

const FE_CONVENTION: &str = "FEs-to-target count unsuccessful runs at the full budget";

/// Output of one algorithm within an experiment.
#[derive(Clone, Debug)]
pub struct AlgorithmReport {
    pub algorithm: String,
    pub dir: PathBuf,
    pub summary: Summary,
}

fn header(m: usize, bi: bool) -> String {
    let mut h = String::from("run,evals,best_f");
    for i in 1..=m {
        let _ = write!(h, ",v{i}");
    }
    if bi {
        h.push_str(",y1,y2,hv");
    }
    h.push('\n');
    h
}

fn join(values: &[u64]) -> String {
    values.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

/// Logged evaluation indices: checkpoints reached, plus the final one.
fn log_points(grid: &[u64], used: u64) -> Vec<u64> {
    let mut pts: Vec<u64> = grid.iter().copied().filter(|&c| c <= used).collect();
    if pts.last() != Some(&used) {
        pts.push(used);
    }
    pts
}

pub(crate) fn single_run_csv(run: usize, result: &RunResult, m: usize, grid: &[u64]) -> String {
    let mut out = header(m, false);
    let trace = &result.trajectory;
    let mut k = 0;
    for e in log_points(grid, result.evaluations_used) {
        while k + 1 < trace.len() && trace[k + 1].evals <= e {
            k += 1;
        }
        let p = &trace[k];
        let _ = writeln!(out, "{run},{e},{},{}", p.best_f, join(&p.block_values));
    }
    out
}

fn bi_run_csv(run: usize, archive: &ParetoArchive, problem: &BiProblem, grid: &[u64]) -> anyhow::Result<String> {
    let mut out = header(problem.first().m(), true);
    let trace = archive.trace();
    let mut k = 0;
    for e in log_points(grid, archive.evaluations()) {
        while k + 1 < trace.len() && trace[k + 1].evals <= e {
            k += 1;
        }
        let ev = &trace[k];
        let v = problem.first().evaluate(&ev.x)?.block_values;
        let _ = writeln!(out, "{run},{e},{},{},{},{},{}", ev.y.y1 + ev.y.y2, join(&v), ev.y.y1, ev.y.y2, ev.hv);
    }
    Ok(out)
}

fn archive_csv(archive: &ParetoArchive) -> String {
    let mut entries = archive.entries().to_vec();
    entries.sort_by(|a, b| a.1.y1.total_cmp(&b.1.y1).then(a.1.y2.total_cmp(&b.1.y2)));
    let mut out = String::from("x,y1,y2\n");
    for (x, y) in entries {
        let _ = writeln!(out, "{x},{},{}", y.y1, y.y2);
    }
    out
}

/// Runs `job(i, rng_i)` for every run in parallel, converting panics to errors.
fn parallel_runs<T: Send>(
    runs: usize,
    seed: u64,
    threads: Option<usize>,
    job: impl Fn(&mut RandomSource) -> crate::Result<T> + Sync,
) -> anyhow::Result<Vec<(u64, anyhow::Result<T>)>> {
    let root = RandomSource::new(seed);
    with_threads(threads, || {
        (0..runs as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = root.derive(i);
                let s = rng.seed();
                let outcome = catch_unwind(AssertUnwindSafe(|| job(&mut rng)))
                    .map_err(|_| anyhow!("run {i} panicked"))
                    .and_then(|r| r.map_err(anyhow::Error::from));
                (s, outcome)
            })
            .collect()
    })
}

fn finish_dir(
    dir: &Path,
    failures: Vec<String>,
    meta: serde_json::Value,
    algorithm: String,
) -> anyhow::Result<AlgorithmReport> {
    if !failures.is_empty() {
        bail!("{}: {}", dir.display(), failures.join("; "));
    }
    let summary = aggregate_runs(dir)?;
    let mut doc = meta;
    doc["summary"] = serde_json::to_value(&summary)?;
    write_file(&dir.join("summary.json"), &(serde_json::to_string_pretty(&doc)? + "\n"))?;
    write_file(&dir.join("summary.csv"), &summary.to_csv())?;
    Ok(AlgorithmReport { algorithm, dir: dir.to_path_buf(), summary })
}

fn algorithm_label(cfg: &SoConfig) -> String {
    if cfg.variant == soea::Variant::MuGa && cfg.diversity {
        "mu_ga_diversity".to_string()
    } else {
        cfg.variant.to_string()
    }
}

/// Single-objective experiment: one subdirectory per algorithm with per-run
/// logs, `runs.csv`, `summary.json` and `summary.csv`.
pub fn cmd_run(loaded: &LoadedConfig, threads: Option<usize>) -> anyhow::Result<Vec<AlgorithmReport>> {
    let cfg = &loaded.config;
    let out = cfg.output_dir();
    write_file(&out.join("config.json"), &loaded.text)?;
    let problem = cfg.problem()?;
    let target = cfg.target.or_else(|| problem.known_optimum());
    let budget = cfg.budget.unwrap_or(DEFAULT_BUDGET);
    let grid = checkpoints(budget, cfg.checkpoint_base());
    let mut reports = Vec::new();
    for so in cfg.so_configs()? {
        let label = algorithm_label(&so);
        let dir = out.join(&label);
        let results = parallel_runs(cfg.runs, cfg.seed, threads, |rng| {
            soea::run(&so, &problem, budget, target, rng)
        })?;
        let mut index = String::from("run,seed,budget,evaluations_used,hit_at,best_f\n");
        let mut failures = Vec::new();
        for (i, (seed, outcome)) in results.into_iter().enumerate() {
            match outcome {
                Ok(r) => {
                    write_file(&dir.join(format!("run_{i:03}.csv")), &single_run_csv(i, &r, problem.m(), &grid))?;
                    let hit = r.hit_at.map(|h| h.to_string()).unwrap_or_default();
                    let _ = writeln!(index, "{i},{seed},{budget},{},{hit},{}", r.evaluations_used, r.best_f);
                }
                Err(e) => failures.push(e.to_string()),
            }
        }
        write_file(&dir.join("runs.csv"), &index)?;
        let meta = json!({
            "problem": cfg.problem_label(),
            "n": problem.n(),
            "m": problem.m(),
            "algorithm": label,
            "parameters": so,
            "runs": cfg.runs,
            "budget": budget,
            "target": target,
            "seed": cfg.seed,
            "fe_convention": FE_CONVENTION,
        });
        reports.push(finish_dir(&dir, failures, meta, label)?);
    }
    Ok(reports)
}

/// Bi-objective experiment: as [`cmd_run`], plus `archive_XXX.csv` with each
/// run's final archive. Log rows carry the most recent archive insertion
/// (`best_f = y1 + y2`) and the archive hypervolume.
pub fn cmd_bi(loaded: &LoadedConfig, threads: Option<usize>) -> anyhow::Result<Vec<AlgorithmReport>> {
    let cfg = &loaded.config;
    let out = cfg.output_dir();
    write_file(&out.join("config.json"), &loaded.text)?;
    let problem = cfg.bi_problem()?;
    let n = problem.n();
    let budget = cfg.budget.unwrap_or((n as u64).pow(3));
    let pop = cfg.pop_size.unwrap_or(n);
    let grid = checkpoints(budget, cfg.checkpoint_base());
    let mut reports = Vec::new();
    for variant in cfg.mo_variants()? {
        let label = variant.to_string();
        let dir = out.join(&label);
        let results = parallel_runs(cfg.runs, cfg.seed, threads, |rng| {
            run_mo(variant, &problem, Some(pop), Some(budget), rng)
        })?;
        let mut index = String::from("run,seed,budget,evaluations_used,final_hv,archive_size\n");
        let mut failures = Vec::new();
        for (i, (seed, outcome)) in results.into_iter().enumerate() {
            match outcome {
                Ok(a) => {
                    write_file(&dir.join(format!("run_{i:03}.csv")), &bi_run_csv(i, &a, &problem, &grid)?)?;
                    write_file(&dir.join(format!("archive_{i:03}.csv")), &archive_csv(&a))?;
                    let hv = a.hypervolume(ObjectivePair::ORIGIN);
                    let _ = writeln!(index, "{i},{seed},{budget},{},{hv},{}", a.evaluations(), a.len());
                }
                Err(e) => failures.push(e.to_string()),
            }
        }
        write_file(&dir.join("runs.csv"), &index)?;
        let meta = json!({
            "problem": cfg.problem_label(),
            "n": n,
            "m": problem.first().m(),
            "algorithm": label,
            "population": if matches!(variant, MoVariant::Semo | MoVariant::Gsemo) { None } else { Some(pop) },
            "runs": cfg.runs,
            "budget": budget,
            "seed": cfg.seed,
            "hv_reference": [0.0, 0.0],
        });
        reports.push(finish_dir(&dir, failures, meta, label)?);
    }
    Ok(reports)
}
