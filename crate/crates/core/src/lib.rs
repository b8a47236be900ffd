//! Block-structured pseudo-Boolean benchmarks.
//!
//! A problem instance partitions a bit string into `m` equal-length blocks,
//! scores every block with a [`blocks::BlockFunction`], and combines the block
//! values either additively with pairwise products (dependency-based problems)
//! or through threshold gates along a directed acyclic graph (gate-constrained
//! problems). Every evaluation exposes the per-block values so algorithm
//! behaviour can be followed below the level of the scalar objective.
//!
//! The crate also ships the single- and bi-objective evolutionary algorithms
//! used to study these problems, exact enumeration oracles for their
//! landscapes, and an experiment harness driving the `blockbench` binary.

pub mod bits;
pub mod blocks;
pub mod error;
pub mod harness;
pub mod landscape;
pub mod moea;
pub mod problems;
pub mod random;
pub mod soea;

pub use bits::BitString;
pub use blocks::BlockFunction;
pub use error::{Error, Result};
pub use moea::{ObjectivePair, ParetoArchive};
pub use problems::{BiObjectiveInstance, BiProblem, Evaluation, InstanceSpec, Problem};
pub use random::RandomSource;
pub use soea::{RunResult, SoConfig, Variant};
