use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::moea::MoVariant;
use crate::problems::{
    make_biobjective, make_suite_instance, BiObjectiveInstance, BiProblem, BiSuiteId, InstanceSpec, Problem,
    SuiteId,
};
use crate::soea::{SoConfig, Variant};

pub const DEFAULT_RUNS: usize = 50;
/// Single-objective budget when the config sets none.
pub const DEFAULT_BUDGET: u64 = 1_000_000;
pub const DEFAULT_CHECKPOINT_BASE: f64 = 1.15;

/// A suite id or an inline instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
#[allow(clippy::large_enum_variant)]
pub enum ProblemRef {
    Id(String),
    Single(InstanceSpec),
    Bi(BiObjectiveInstance),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(String),
    Many(Vec<String>),
}

impl OneOrMany {
    pub fn names(&self) -> Vec<String> {
        match self {
            OneOrMany::One(s) => vec![s.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

/// One experiment: a problem, one or more algorithms, and run settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: ProblemRef,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default)]
    pub algo: Option<OneOrMany>,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default)]
    pub budget: Option<u64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Overrides the instance's known optimum as the stopping target.
    #[serde(default)]
    pub target: Option<f64>,
    #[serde(default)]
    pub checkpoint_base: Option<f64>,
    #[serde(default)]
    pub lambda: Option<usize>,
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub f_var: Option<f64>,
    #[serde(default)]
    pub f_oll: Option<f64>,
    #[serde(default)]
    pub mu: Option<usize>,
    #[serde(default)]
    pub p_c: Option<f64>,
    #[serde(default)]
    pub diversity: Option<bool>,
    /// Population size for the multi-objective algorithms (default `n`).
    #[serde(default)]
    pub pop_size: Option<usize>,
}

fn default_runs() -> usize {
    DEFAULT_RUNS
}

/// A config problem with its location in the source text.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: String,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "{}:{line}: {}", self.path, self.message),
            None => write!(f, "{}: {}", self.path, self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

/// A parsed config together with its exact source text.
#[derive(Clone, Debug)]
pub struct LoadedConfig {
    pub config: ExperimentConfig,
    pub text: String,
    pub path: PathBuf,
}

/// 1-based line of the first occurrence of `"key"` in `text`.
fn line_of(text: &str, key: &str) -> Option<usize> {
    let needle = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&needle)).map(|i| i + 1)
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn is_biobjective(&self) -> bool {
        match &self.problem {
            ProblemRef::Id(id) => id.parse::<BiSuiteId>().is_ok(),
            ProblemRef::Single(_) => false,
            ProblemRef::Bi(_) => true,
        }
    }

    /// Checks everything that can be checked without running. Errors carry
    /// the name of the offending key.
    pub fn validate(&self) -> Result<(), (&'static str, String)> {
        if self.runs == 0 {
            return Err(("runs", "runs must be at least 1".into()));
        }
        if self.budget == Some(0) {
            return Err(("budget", "budget must be at least 1".into()));
        }
        if let Some(base) = self.checkpoint_base {
            if !(base > 1.0 && base.is_finite()) {
                return Err(("checkpoint_base", format!("checkpoint_base must exceed 1, got {base}")));
            }
        }
        if self.is_biobjective() {
            self.bi_problem().map_err(|e| ("problem", e.to_string()))?;
            self.mo_variants().map_err(|e| ("algo", e.to_string()))?;
            if self.pop_size.is_some_and(|p| p < 2) {
                return Err(("pop_size", "pop_size must be at least 2".into()));
            }
        } else {
            let problem = self.problem().map_err(|e| ("problem", e.to_string()))?;
            if self.algo.is_none() {
                return Err(("problem", "missing field `algo`".into()));
            }
            for cfg in self.so_configs().map_err(|e| ("algo", e.to_string()))? {
                cfg.validate(problem.n()).map_err(|e| ("algo", e.to_string()))?;
            }
        }
        Ok(())
    }

    fn dims(&self) -> crate::Result<(usize, usize)> {
        match (self.n, self.m) {
            (Some(n), Some(m)) => Ok((n, m)),
            (Some(n), None) => Ok((n, 1)),
            _ => Err(Error::Parameter("a suite problem needs `n` (and usually `m`)".into())),
        }
    }

    fn check_dims(&self, n: usize, m: usize) -> crate::Result<()> {
        if self.n.is_some_and(|v| v != n) || self.m.is_some_and(|v| v != m) {
            return Err(Error::Parameter(format!("config n/m disagree with the inline instance ({n}, {m})")));
        }
        Ok(())
    }

    pub fn problem(&self) -> crate::Result<Problem> {
        let spec = match &self.problem {
            ProblemRef::Id(id) => {
                let (n, m) = self.dims()?;
                make_suite_instance(id.parse::<SuiteId>()?, n, m)?
            }
            ProblemRef::Single(spec) => {
                self.check_dims(spec.n, spec.m)?;
                spec.clone()
            }
            ProblemRef::Bi(_) => return Err(Error::Parameter("problem is bi-objective".into())),
        };
        Problem::new(spec)
    }

    pub fn bi_problem(&self) -> crate::Result<BiProblem> {
        let inst = match &self.problem {
            ProblemRef::Id(id) => {
                let (n, m) = self.dims()?;
                make_biobjective(id.parse::<BiSuiteId>()?, n, m)?
            }
            ProblemRef::Bi(inst) => {
                self.check_dims(inst.first.n, inst.first.m)?;
                inst.clone()
            }
            ProblemRef::Single(_) => return Err(Error::Parameter("problem is single-objective".into())),
        };
        BiProblem::new(inst)
    }

    pub fn problem_label(&self) -> String {
        match &self.problem {
            ProblemRef::Id(id) => id.to_ascii_uppercase(),
            ProblemRef::Single(s) => s.name.clone().unwrap_or_else(|| "custom".into()),
            ProblemRef::Bi(b) => b.name.clone().unwrap_or_else(|| "custom".into()),
        }
    }

    /// One algorithm configuration per entry of `algo`.
    pub fn so_configs(&self) -> crate::Result<Vec<SoConfig>> {
        let names = self.algo.as_ref().map(OneOrMany::names).unwrap_or_default();
        names
            .iter()
            .map(|name| {
                let d = SoConfig::new(name.parse::<Variant>()?);
                Ok(SoConfig {
                    lambda: self.lambda.unwrap_or(d.lambda),
                    p: self.p.or(d.p),
                    beta: self.beta.unwrap_or(d.beta),
                    f_var: self.f_var.unwrap_or(d.f_var),
                    f_oll: self.f_oll.unwrap_or(d.f_oll),
                    mu: self.mu.unwrap_or(d.mu),
                    p_c: self.p_c.unwrap_or(d.p_c),
                    diversity: self.diversity.unwrap_or(d.diversity),
                    ..d
                })
            })
            .collect()
    }

    /// Multi-objective algorithms; all five when `algo` is absent.
    pub fn mo_variants(&self) -> crate::Result<Vec<MoVariant>> {
        match &self.algo {
            None => Ok(MoVariant::ALL.to_vec()),
            Some(a) => a.names().iter().map(|s| s.parse()).collect(),
        }
    }

    pub fn checkpoint_base(&self) -> f64 {
        self.checkpoint_base.unwrap_or(DEFAULT_CHECKPOINT_BASE)
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output.clone().unwrap_or_else(|| PathBuf::from("out"))
    }
}

/// Parses and validates `text`; `path` is only used in messages.
pub fn parse_config(text: &str, path: &str) -> Result<ExperimentConfig, ConfigError> {
    let config = ExperimentConfig::from_json(text).map_err(|e| ConfigError {
        path: path.to_string(),
        line: Some(e.line()).filter(|&l| l > 0),
        message: e.to_string(),
    })?;
    config.validate().map_err(|(key, message)| ConfigError {
        path: path.to_string(),
        line: line_of(text, key),
        message,
    })?;
    Ok(config)
}

/// Reads, parses and validates a config file.
pub fn load_config(path: &Path) -> anyhow::Result<LoadedConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
    let config = parse_config(&text, &path.display().to_string())?;
    Ok(LoadedConfig { config, text, path: path.to_path_buf() })
}
