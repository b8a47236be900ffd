use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A single reason an [`InstanceSpec`](crate::problems::InstanceSpec) is rejected.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    ZeroDimension,
    NotDivisible { n: usize, m: usize },
    Length { field: &'static str, expected: usize, actual: usize },
    MatrixRow { row: usize, expected: usize, actual: usize },
    NonFinite { field: &'static str, index: usize },
    Block { block: usize, reason: String },
    Cycle { blocks: Vec<usize> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroDimension => write!(f, "n and m must be positive"),
            Violation::NotDivisible { n, m } => {
                write!(f, "n = {n} is not divisible by m = {m}")
            }
            Violation::Length { field, expected, actual } => {
                write!(f, "{field} has {actual} entries, expected {expected}")
            }
            Violation::MatrixRow { row, expected, actual } => {
                write!(f, "E row {row} has {actual} entries, expected {expected}")
            }
            Violation::NonFinite { field, index } => {
                write!(f, "{field}[{index}] is not a finite number")
            }
            Violation::Block { block, reason } => write!(f, "block {block}: {reason}"),
            Violation::Cycle { blocks } => {
                write!(f, "gate graph is not acyclic (blocks on a cycle: {blocks:?})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("length mismatch: expected {expected} bits, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("invalid instance: {}", join(.0))]
    InvalidSpec(Vec<Violation>),
    #[error("dependency graph contains a cycle")]
    Cycle,
    #[error("enumeration refused: {0}")]
    TooLarge(String),
    #[error("unknown problem id `{id}` (valid ids: {valid})")]
    UnknownProblem { id: String, valid: String },
    #[error("value {value} is not attainable by block {block}")]
    Unattainable { block: usize, value: u64 },
}

fn join(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
