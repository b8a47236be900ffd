use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};

use blockbench::harness::{
    aggregate_runs, catalog, cmd_bi, cmd_landscape, cmd_plot, cmd_run, cmd_table2, load_config, threads_from_env,
    AlgorithmReport, Axis, LandscapeTarget, PlotKind, PlotOptions, Table2Options,
};
use blockbench::problems::{make_biobjective, make_suite_instance, BiObjectiveInstance, BiSuiteId, InstanceSpec, SuiteId};
use blockbench::{BiProblem, BitString, Problem};

#[derive(Parser)]
#[command(name = "blockbench", version, about = "Block-structured benchmark problems and evolutionary algorithms")]
struct Cli {
    /// Worker threads (defaults to BLOCKBENCH_THREADS, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run single-objective experiments from a JSON config.
    Run {
        #[arg(short, long)]
        config: PathBuf,
    },
    /// Run bi-objective experiments from a JSON config.
    Bi {
        #[arg(short, long)]
        config: PathBuf,
    },
    /// Mean evaluations to the optimum for five EAs on six problems.
    Table2 {
        #[arg(long, default_value_t = 40)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        runs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 10)]
        lambda: usize,
        #[arg(long, default_value = "out/table2")]
        out: PathBuf,
    },
    /// Enumerate attainable fitness values along an axis.
    Landscape {
        /// Suite id (F1..F10, BF1..BF5).
        #[arg(long, conflicts_with = "spec")]
        problem: Option<String>,
        /// Instance JSON file instead of a suite id.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// ones, distance, values or objectives.
        #[arg(long)]
        axis: Axis,
        #[arg(long, default_value_t = 40)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        m: usize,
        /// CSV path (default `<problem>_<axis>.csv`).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Draw CSV files as an SVG chart.
    Plot {
        /// lines, heatmap or scatter.
        #[arg(long)]
        kind: PlotKind,
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        log_x: bool,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
        #[arg(long)]
        z: Option<String>,
        #[arg(long)]
        title: Option<String>,
    },
    /// Recompute summary.csv from the per-run logs in a directory.
    Aggregate { dir: PathBuf },
    /// Print the suite catalog.
    List,
    /// Evaluate one bit string and show the block values.
    Eval {
        #[arg(long, conflicts_with = "spec")]
        problem: Option<String>,
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = 40)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        m: usize,
        bits: String,
    },
}

fn load_target(problem: Option<&str>, spec: Option<&Path>, n: usize, m: usize) -> anyhow::Result<LandscapeTarget> {
    if let Some(path) = spec {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        if let Ok(inst) = serde_json::from_str::<BiObjectiveInstance>(&text) {
            return Ok(LandscapeTarget::Bi(BiProblem::new(inst)?));
        }
        let spec = InstanceSpec::from_json(&text).with_context(|| format!("invalid instance in {}", path.display()))?;
        return Ok(LandscapeTarget::Single(Problem::new(spec)?));
    }
    let Some(id) = problem else { bail!("give --problem or --spec") };
    if id.trim().to_ascii_uppercase().starts_with("BF") {
        let bi = make_biobjective(id.parse::<BiSuiteId>()?, n, m)?;
        Ok(LandscapeTarget::Bi(BiProblem::new(bi)?))
    } else {
        Ok(LandscapeTarget::Single(Problem::new(make_suite_instance(id.parse::<SuiteId>()?, n, m)?)?))
    }
}

fn report(reports: &[AlgorithmReport]) {
    for r in reports {
        let s = &r.summary;
        match (s.success_count, s.mean_fes, s.mean_final_hv) {
            (Some(hits), Some(fes), _) => println!(
                "{:<16} {}/{} hits, mean FEs {fes}, mean best f {} -> {}",
                r.algorithm,
                hits,
                s.runs,
                s.mean_final_best_f,
                r.dir.display()
            ),
            (_, _, Some(hv)) => println!("{:<16} {} runs, mean final HV {hv} -> {}", r.algorithm, s.runs, r.dir.display()),
            _ => println!("{:<16} {} runs, mean best f {} -> {}", r.algorithm, s.runs, s.mean_final_best_f, r.dir.display()),
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let threads = cli.threads.or_else(threads_from_env);
    match cli.command {
        Command::Run { config } => report(&cmd_run(&load_config(&config)?, threads)?),
        Command::Bi { config } => report(&cmd_bi(&load_config(&config)?, threads)?),
        Command::Table2 { n, runs, seed, budget, lambda, out } => {
            let opts = Table2Options { n, runs, seed, budget, lambda, threads };
            let cells = cmd_table2(&opts, &out)?;
            for c in cells {
                println!(
                    "{:<12} {:<9} mean FEs {:>12.1}  {}/{}  rank {}",
                    c.problem,
                    c.algorithm.as_str(),
                    c.mean_fes,
                    c.successes,
                    c.runs,
                    c.rank
                );
            }
            println!("wrote {}", out.display());
        }
        Command::Landscape { problem, spec, axis, n, m, out, svg } => {
            let target = load_target(problem.as_deref(), spec.as_deref(), n, m)?;
            let out = out.unwrap_or_else(|| {
                let stem = problem
                    .clone()
                    .or_else(|| spec.as_ref().and_then(|p| p.file_stem()).map(|s| s.to_string_lossy().into_owned()))
                    .unwrap_or_else(|| "landscape".into());
                PathBuf::from(format!("{stem}_{}.csv", format!("{axis:?}").to_lowercase()))
            });
            blockbench::harness::with_threads(threads, || cmd_landscape(&target, axis, &out, svg.as_deref()))??;
            println!("wrote {}", out.display());
        }
        Command::Plot { kind, inputs, output, log_x, x, y, z, title } => {
            let opts = PlotOptions { kind, log_x, x, y, z, title };
            cmd_plot(&inputs, &opts, &output)?;
            println!("wrote {}", output.display());
        }
        Command::Aggregate { dir } => {
            let summary = aggregate_runs(&dir)?;
            let path = dir.join("summary.csv");
            std::fs::write(&path, summary.to_csv()).with_context(|| format!("cannot write {}", path.display()))?;
            println!("wrote {}", path.display());
        }
        Command::List => print!("{}", catalog()),
        Command::Eval { problem, spec, n, m, bits } => {
            let target = load_target(problem.as_deref(), spec.as_deref(), n, m)?;
            let x: BitString = bits.parse()?;
            match target {
                LandscapeTarget::Single(p) => {
                    let e = p.evaluate(&x)?;
                    println!("f = {}", e.f);
                    println!("block values = {:?}", e.block_values);
                    println!("gates = {:?}", e.gates);
                }
                LandscapeTarget::Bi(b) => {
                    let (e1, e2) = b.evaluate(&x)?;
                    println!("y = ({}, {})", e1.f, e2.f);
                    println!("block values = {:?} / {:?}", e1.block_values, e2.block_values);
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
