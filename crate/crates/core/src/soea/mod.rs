//! Single-objective evolutionary algorithms.
//!
//! Every runner evaluates a uniformly random initial solution, then iterates
//! until the target is reached or the evaluation budget is spent. When an
//! offspring reaches the target the rest of its batch is still evaluated,
//! but the hitting time is the index of that first evaluation.

mod ea;
mod mu_ga;
mod oll;
mod tracker;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::{param, Error, Result};
use crate::problems::Problem;
use crate::random::RandomSource;

pub use ea::{Ea, Fga, TwoRate, VarEa};
pub use mu_ga::MuGa;
pub use oll::OllGa;
pub use tracker::Tracker;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// (1+λ) EA with a fixed mutation rate.
    Ea,
    /// Fast GA: (1+1) with power-law mutation strength.
    Fga,
    /// Two-rate (1+λ) EA.
    TwoRate,
    /// (1+λ) EA with normally distributed mutation strength.
    VarEa,
    /// Self-adjusting (1+(λ,λ)) GA.
    OllGa,
    /// (μ+1) GA, optionally with diversity preservation.
    MuGa,
}

impl Variant {
    pub const ALL: [Variant; 6] =
        [Variant::Ea, Variant::Fga, Variant::TwoRate, Variant::VarEa, Variant::OllGa, Variant::MuGa];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Ea => "ea",
            Variant::Fga => "fga",
            Variant::TwoRate => "two_rate",
            Variant::VarEa => "var_ea",
            Variant::OllGa => "oll_ga",
            Variant::MuGa => "mu_ga",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str() == key)
            .ok_or_else(|| {
                let names: Vec<_> = Variant::ALL.iter().map(|v| v.as_str()).collect();
                Error::Parameter(format!("unknown algorithm `{s}` (expected one of {})", names.join(", ")))
            })
    }
}

/// Algorithm parameters. Unused fields are ignored by variants that do not
/// read them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SoConfig {
    pub variant: Variant,
    pub lambda: usize,
    /// Mutation rate; `None` means `1/n`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    pub beta: f64,
    pub f_var: f64,
    pub f_oll: f64,
    pub mu: usize,
    pub p_c: f64,
    pub diversity: bool,
}

impl Default for SoConfig {
    fn default() -> Self {
        SoConfig {
            variant: Variant::Ea,
            lambda: 10,
            p: None,
            beta: 1.5,
            f_var: 0.98,
            f_oll: 1.5,
            mu: 8,
            p_c: 0.5,
            diversity: false,
        }
    }
}

impl SoConfig {
    pub fn new(variant: Variant) -> Self {
        SoConfig { variant, ..SoConfig::default() }
    }

    /// Mutation rate for an `n`-bit problem.
    pub fn rate(&self, n: usize) -> f64 {
        self.p.unwrap_or(1.0 / n as f64)
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if n == 0 {
            return param("problem has no bits");
        }
        if self.lambda == 0 {
            return param("lambda must be at least 1");
        }
        let p = self.rate(n);
        if !(p > 0.0 && p <= 1.0) {
            return param(format!("mutation rate must lie in (0, 1], got {p}"));
        }
        match self.variant {
            Variant::Fga if n < 2 => param("fGA needs n >= 2"),
            Variant::Fga if !(self.beta > 0.0 && self.beta.is_finite()) => {
                param(format!("beta must be positive, got {}", self.beta))
            }
            Variant::TwoRate if self.lambda < 2 || !self.lambda.is_multiple_of(2) => {
                param(format!("two-rate EA needs an even lambda >= 2, got {}", self.lambda))
            }
            Variant::VarEa if !(self.f_var > 0.0 && self.f_var <= 1.0) => {
                param(format!("f_var must lie in (0, 1], got {}", self.f_var))
            }
            Variant::OllGa if !(self.f_oll > 1.0 && self.f_oll.is_finite()) => {
                param(format!("f_oll must exceed 1, got {}", self.f_oll))
            }
            Variant::MuGa if self.mu < 2 => param(format!("mu must be at least 2, got {}", self.mu)),
            Variant::MuGa if !(0.0..=1.0).contains(&self.p_c) => {
                param(format!("p_c must lie in [0, 1], got {}", self.p_c))
            }
            _ => Ok(()),
        }
    }
}

/// Best-so-far state after an improvement.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TracePoint {
    pub evals: u64,
    pub best_f: f64,
    pub block_values: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunResult {
    pub evaluations_used: u64,
    pub best_f: f64,
    pub best_x: BitString,
    pub best_values: Vec<u64>,
    pub hit_target: bool,
    /// Index of the first evaluation reaching the target.
    pub hit_at: Option<u64>,
    /// One point per strict improvement, starting with the first evaluation.
    pub trajectory: Vec<TracePoint>,
}

impl RunResult {
    /// Evaluations to reach the target, or `budget` when it was missed.
    pub fn fes(&self, budget: u64) -> u64 {
        self.hit_at.unwrap_or(budget)
    }
}

/// A single-objective algorithm advanced one generation at a time.
pub trait Algorithm {
    /// Runs one generation. Returns early if the tracker refuses an evaluation.
    fn step(&mut self, tracker: &mut Tracker<'_>, rng: &mut RandomSource) -> Result<()>;
}

fn drive<A: Algorithm>(mut alg: A, mut tracker: Tracker<'_>, rng: &mut RandomSource) -> Result<RunResult> {
    while !tracker.done() {
        alg.step(&mut tracker, rng)?;
    }
    Ok(tracker.finish())
}

fn start<'a>(
    cfg: &SoConfig,
    variant: Variant,
    problem: &'a Problem,
    budget: u64,
    target: Option<f64>,
) -> Result<Tracker<'a>> {
    SoConfig { variant, ..cfg.clone() }.validate(problem.n())?;
    if budget == 0 {
        return param("budget must be at least 1");
    }
    Ok(Tracker::new(problem, budget, target))
}

macro_rules! runner {
    ($(#[$doc:meta])* $name:ident, $variant:expr, $alg:ty) => {
        $(#[$doc])*
        pub fn $name(
            cfg: &SoConfig,
            problem: &Problem,
            budget: u64,
            target: Option<f64>,
            rng: &mut RandomSource,
        ) -> Result<RunResult> {
            let mut tracker = start(cfg, $variant, problem, budget, target)?;
            match <$alg>::init(cfg, &mut tracker, rng)? {
                Some(alg) => drive(alg, tracker, rng),
                None => Ok(tracker.finish()),
            }
        }
    };
}

runner!(
    /// (1+λ) EA: `ℓ ~ Bin>0(n, p)` flips per offspring, parent chosen
    /// uniformly among the best of parent and offspring.
    run_ea, Variant::Ea, Ea
);
runner!(
    /// (1+1) fast GA with `ℓ` drawn from a power law on `1..=n/2`.
    run_fga, Variant::Fga, Fga
);
runner!(
    /// Two-rate (1+λ) EA.
    run_two_rate, Variant::TwoRate, TwoRate
);
runner!(
    /// (1+λ) var EA.
    run_var_ea, Variant::VarEa, VarEa
);
runner!(
    /// Self-adjusting (1+(λ,λ)) GA.
    run_oll_ga, Variant::OllGa, OllGa
);
runner!(
    /// (μ+1) GA with uniform crossover and standard bit mutation.
    run_mu_ga, Variant::MuGa, MuGa
);

/// Runs `cfg.variant`. With `target = None` the run spends the whole budget.
pub fn run(
    cfg: &SoConfig,
    problem: &Problem,
    budget: u64,
    target: Option<f64>,
    rng: &mut RandomSource,
) -> Result<RunResult> {
    let runner = match cfg.variant {
        Variant::Ea => run_ea,
        Variant::Fga => run_fga,
        Variant::TwoRate => run_two_rate,
        Variant::VarEa => run_var_ea,
        Variant::OllGa => run_oll_ga,
        Variant::MuGa => run_mu_ga,
    };
    runner(cfg, problem, budget, target, rng)
}

/// Index of a uniformly chosen maximum of `fs`.
pub(crate) fn argmax_uar(fs: &[f64], rng: &mut RandomSource) -> usize {
    let best = fs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ties: Vec<usize> = (0..fs.len()).filter(|&i| fs[i] == best).collect();
    ties[rng.index(ties.len())]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{make_suite_instance, SuiteId};

    fn onemax(n: usize) -> Problem {
        Problem::new(make_suite_instance(SuiteId::F1, n, 1).unwrap()).unwrap()
    }

    #[test]
    fn variant_names() {
        for v in Variant::ALL {
            assert_eq!(v.as_str().parse::<Variant>().unwrap(), v);
            let json = serde_json::to_string(&v).unwrap();
            assert_eq!(json, format!("\"{}\"", v.as_str()));
        }
        assert_eq!("Two-Rate".parse::<Variant>().unwrap(), Variant::TwoRate);
        assert!("sa".parse::<Variant>().is_err());
    }

    #[test]
    fn config_validation() {
        let p = onemax(10);
        let mut rng = RandomSource::new(1);
        let odd = SoConfig { lambda: 3, ..SoConfig::new(Variant::TwoRate) };
        assert!(run(&odd, &p, 100, None, &mut rng).is_err());
        let bad_mu = SoConfig { mu: 1, ..SoConfig::new(Variant::MuGa) };
        assert!(run(&bad_mu, &p, 100, None, &mut rng).is_err());
        let bad_p = SoConfig { p: Some(0.0), ..SoConfig::default() };
        assert!(run(&bad_p, &p, 100, None, &mut rng).is_err());
        assert!(run(&SoConfig::new(Variant::Fga), &onemax(1), 100, None, &mut rng).is_err());
        assert!(run(&SoConfig::default(), &p, 0, None, &mut rng).is_err());
        let json = r#"{"variant": "var_ea", "lambda": 4}"#;
        let cfg: SoConfig = serde_json::from_str(json).unwrap();
        assert_eq!((cfg.variant, cfg.lambda, cfg.f_var), (Variant::VarEa, 4, 0.98));
        assert!(serde_json::from_str::<SoConfig>(r#"{"lamda": 4}"#).is_err());
    }

    #[test]
    fn budget_one_returns_initial_sample() {
        let p = onemax(20);
        for v in Variant::ALL {
            let r = run(&SoConfig::new(v), &p, 1, Some(20.0), &mut RandomSource::new(3)).unwrap();
            assert_eq!(r.evaluations_used, 1, "{v}");
            assert_eq!(r.trajectory.len(), 1);
            assert_eq!(r.best_f, r.best_x.ones_count() as f64);
        }
    }

    #[test]
    fn every_variant_solves_small_onemax() {
        let p = onemax(12);
        for v in Variant::ALL {
            for seed in 0..5 {
                let r = run(&SoConfig::new(v), &p, 100_000, Some(12.0), &mut RandomSource::new(seed)).unwrap();
                assert!(r.hit_target, "{v} seed {seed}");
                assert_eq!(r.best_f, 12.0);
                let hit = r.hit_at.unwrap();
                assert!(hit <= r.evaluations_used);
                assert_eq!(r.trajectory.last().unwrap().evals, hit);
            }
        }
    }

    #[test]
    fn runs_are_reproducible() {
        let p = Problem::new(make_suite_instance(SuiteId::F10, 16, 4).unwrap()).unwrap();
        for v in Variant::ALL {
            let a = run(&SoConfig::new(v), &p, 3000, None, &mut RandomSource::new(9)).unwrap();
            let b = run(&SoConfig::new(v), &p, 3000, None, &mut RandomSource::new(9)).unwrap();
            assert_eq!(a, b, "{v}");
            assert_eq!(a.evaluations_used, 3000);
            assert!(!a.hit_target);
        }
    }
}
