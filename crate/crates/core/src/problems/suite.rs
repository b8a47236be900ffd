//! The reference instances F1–F10 (single objective) and BF1–BF5 (bi-objective).

use std::fmt;
use std::str::FromStr;

use crate::blocks::BlockFunction;
use crate::error::{Error, Result};
use crate::problems::graph::{backward_path, forward_path};
use crate::problems::{validate_spec, InstanceSpec, ProblemKind};

const JUMP2: BlockFunction = BlockFunction::Jump { k: 2 };
const JUMP3: BlockFunction = BlockFunction::Jump { k: 3 };
const MIXED_LO: [BlockFunction; 4] =
    [BlockFunction::OneMax, BlockFunction::LeadingOnes, JUMP3, BlockFunction::EPISTASIS];
const MIXED_JUMP: [BlockFunction; 4] = [BlockFunction::OneMax, JUMP2, JUMP3, BlockFunction::EPISTASIS];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SuiteId {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
    F7,
    F8,
    F9,
    F10,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BiSuiteId {
    BF1,
    BF2,
    BF3,
    BF4,
    BF5,
}

impl SuiteId {
    pub const ALL: [SuiteId; 10] = [
        SuiteId::F1,
        SuiteId::F2,
        SuiteId::F3,
        SuiteId::F4,
        SuiteId::F5,
        SuiteId::F6,
        SuiteId::F7,
        SuiteId::F8,
        SuiteId::F9,
        SuiteId::F10,
    ];

    pub fn kind(self) -> ProblemKind {
        if self >= SuiteId::F7 {
            ProblemKind::Gcp
        } else {
            ProblemKind::Dbp
        }
    }

    /// Block families in order; instances with more blocks cycle the list.
    pub fn families(self) -> &'static [BlockFunction] {
        match self {
            SuiteId::F1 => &[BlockFunction::OneMax],
            SuiteId::F2 => &[BlockFunction::LeadingOnes],
            SuiteId::F3 | SuiteId::F7 => &[JUMP3],
            SuiteId::F4 | SuiteId::F8 => &[BlockFunction::EPISTASIS],
            SuiteId::F5 | SuiteId::F10 => &MIXED_LO,
            SuiteId::F6 | SuiteId::F9 => &MIXED_JUMP,
        }
    }

    /// Listed gate threshold as an offset over the block length.
    fn threshold_offset(self) -> Option<f64> {
        match self {
            SuiteId::F7 | SuiteId::F10 => Some(3.0),
            SuiteId::F8 => Some(0.0),
            SuiteId::F9 => Some(5.0),
            _ => None,
        }
    }

    pub fn describe(self) -> String {
        let blocks: Vec<String> = self.families().iter().map(ToString::to_string).collect();
        let kind = match self.kind() {
            ProblemKind::Dbp => "DBP, E = 0".to_string(),
            ProblemKind::Gcp => format!(
                "GCP, forward path, B = n/m + {}",
                self.threshold_offset().unwrap_or_default()
            ),
        };
        format!("{kind}; blocks {}", blocks.join(", "))
    }
}

impl BiSuiteId {
    pub const ALL: [BiSuiteId; 5] = [BiSuiteId::BF1, BiSuiteId::BF2, BiSuiteId::BF3, BiSuiteId::BF4, BiSuiteId::BF5];

    pub fn describe(self) -> &'static str {
        match self {
            BiSuiteId::BF1 => "DBP OneMax, W = 1 vs W = -1 (OneMinMax)",
            BiSuiteId::BF2 => "GCP OneMax, forward path W = 1 vs backward path W = -1",
            BiSuiteId::BF3 => "GCP LeadingOnes, forward path W = 1 vs backward path W = -1",
            BiSuiteId::BF4 => "GCP OneMax, W = (1,-1,1,1) vs (-1,1,1,-1)",
            BiSuiteId::BF5 => "GCP LeadingOnes, W = (1,-1,1,1) vs (-1,1,1,-1)",
        }
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl fmt::Display for BiSuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

fn valid_ids() -> String {
    let single = SuiteId::ALL.iter().map(ToString::to_string);
    let bi = BiSuiteId::ALL.iter().map(ToString::to_string);
    single.chain(bi).collect::<Vec<_>>().join(", ")
}

impl FromStr for SuiteId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteId::ALL
            .into_iter()
            .find(|id| id.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownProblem { id: s.to_string(), valid: valid_ids() })
    }
}

impl FromStr for BiSuiteId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BiSuiteId::ALL
            .into_iter()
            .find(|id| id.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownProblem { id: s.to_string(), valid: valid_ids() })
    }
}

fn checked(spec: InstanceSpec) -> Result<InstanceSpec> {
    validate_spec(&spec).map_err(Error::InvalidSpec)?;
    Ok(spec)
}

fn block_len(n: usize, m: usize) -> Result<usize> {
    if n == 0 || m == 0 || !n.is_multiple_of(m) {
        return Err(Error::InvalidSpec(vec![if n == 0 || m == 0 {
            crate::error::Violation::ZeroDimension
        } else {
            crate::error::Violation::NotDivisible { n, m }
        }]));
    }
    Ok(n / m)
}

/// Builds suite instance `id` with `n` bits split into `m` blocks.
///
/// GCP thresholds above a block's maximum are kept as listed; the gate test
/// uses `min(b, block max)`.
pub fn make_suite_instance(id: SuiteId, n: usize, m: usize) -> Result<InstanceSpec> {
    let len = block_len(n, m)?;
    let families = id.families();
    let blocks: Vec<BlockFunction> = (0..m).map(|i| families[i % families.len()]).collect();
    let (dependency, thresholds) = match id.threshold_offset() {
        Some(offset) => (forward_path(m), vec![len as f64 + offset; m]),
        None => (vec![vec![0.0; m]; m], Vec::new()),
    };
    checked(InstanceSpec {
        name: Some(id.to_string()),
        kind: id.kind(),
        n,
        m,
        blocks,
        weights: vec![1.0; m],
        constants: vec![0.0; m],
        dependency,
        thresholds,
        gate_dir: None,
    })
}

/// Objective built from a ±1 weight vector: `a_i = n_i (1 - w_i) / 2`,
/// `b_i = n_i (1 + w_i) / 2`, so each block is pushed to its maximum
/// (`w = 1`) or to zero (`w = -1`).
fn signed_gcp(
    name: String,
    family: BlockFunction,
    n: usize,
    m: usize,
    weights: Vec<f64>,
    dependency: Vec<Vec<f64>>,
) -> InstanceSpec {
    let len = (n / m) as f64;
    let spec = InstanceSpec {
        name: Some(name),
        kind: ProblemKind::Gcp,
        n,
        m,
        blocks: vec![family; m],
        constants: weights.iter().map(|w| len * (1.0 - w) / 2.0).collect(),
        thresholds: weights.iter().map(|w| len * (1.0 + w) / 2.0).collect(),
        weights,
        dependency,
        gate_dir: None,
    };
    InstanceSpec { gate_dir: Some(spec.gate_dirs()), ..spec }
}

fn cyclic(pattern: [f64; 4], m: usize) -> Vec<f64> {
    (0..m).map(|i| pattern[i % 4]).collect()
}

pub fn make_biobjective(id: BiSuiteId, n: usize, m: usize) -> Result<crate::problems::BiObjectiveInstance> {
    let len = block_len(n, m)? as f64;
    let tag = |k: usize| format!("{id}.f{k}");
    let (first, second) = match id {
        BiSuiteId::BF1 => {
            let first = make_suite_instance(SuiteId::F1, n, m)?;
            let second = InstanceSpec {
                name: Some(tag(2)),
                weights: vec![-1.0; m],
                constants: vec![len; m],
                ..first.clone()
            };
            (InstanceSpec { name: Some(tag(1)), ..first }, second)
        }
        BiSuiteId::BF2 | BiSuiteId::BF3 | BiSuiteId::BF4 | BiSuiteId::BF5 => {
            let family = match id {
                BiSuiteId::BF2 | BiSuiteId::BF4 => BlockFunction::OneMax,
                _ => BlockFunction::LeadingOnes,
            };
            let (w1, w2) = match id {
                BiSuiteId::BF2 | BiSuiteId::BF3 => (vec![1.0; m], vec![-1.0; m]),
                _ => (cyclic([1.0, -1.0, 1.0, 1.0], m), cyclic([-1.0, 1.0, 1.0, -1.0], m)),
            };
            (
                signed_gcp(tag(1), family, n, m, w1, forward_path(m)),
                signed_gcp(tag(2), family, n, m, w2, backward_path(m)),
            )
        }
    };
    Ok(crate::problems::BiObjectiveInstance {
        name: Some(id.to_string()),
        first: checked(first)?,
        second: checked(second)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitString;
    use crate::problems::{BiProblem, GateDir, Problem};

    #[test]
    fn parse_ids() {
        assert_eq!("f10".parse::<SuiteId>().unwrap(), SuiteId::F10);
        assert_eq!("BF3".parse::<BiSuiteId>().unwrap(), BiSuiteId::BF3);
        let err = "F11".parse::<SuiteId>().unwrap_err().to_string();
        assert!(err.contains("F1, F2"), "{err}");
    }

    #[test]
    fn table_rows() {
        let f2 = make_suite_instance(SuiteId::F2, 40, 4).unwrap();
        assert_eq!(f2.blocks, vec![BlockFunction::LeadingOnes; 4]);
        assert!(f2.dependency.iter().flatten().all(|&e| e == 0.0));

        let f8 = make_suite_instance(SuiteId::F8, 40, 4).unwrap();
        assert_eq!(f8.thresholds, vec![10.0; 4]);
        assert_eq!(f8.dependency[0][1], 1.0);
        assert_eq!(f8.dependency[1][0], 0.0);

        let f9 = Problem::new(make_suite_instance(SuiteId::F9, 40, 4).unwrap()).unwrap();
        assert_eq!(f9.spec().thresholds, vec![15.0; 4]);
        assert_eq!(f9.effective_thresholds(), &[10.0, 12.0, 13.0, 10.0]);

        let f5 = make_suite_instance(SuiteId::F5, 48, 6).unwrap();
        assert_eq!(f5.blocks[4], BlockFunction::OneMax);
        assert_eq!(f5.blocks[5], BlockFunction::LeadingOnes);
        let f10 = make_suite_instance(SuiteId::F10, 20, 2).unwrap();
        assert_eq!(f10.blocks, vec![BlockFunction::OneMax, BlockFunction::LeadingOnes]);
        assert!(make_suite_instance(SuiteId::F1, 10, 4).is_err());
    }

    #[test]
    fn bf1_is_one_min_max() {
        let p = BiProblem::new(make_biobjective(BiSuiteId::BF1, 16, 4).unwrap()).unwrap();
        for i in (0..1u64 << 16).step_by(97) {
            let x = BitString::from_index(i, 16);
            let (a, b) = p.evaluate(&x).unwrap();
            assert_eq!(a.f, x.ones_count() as f64);
            assert_eq!(b.f, 16.0 - x.ones_count() as f64);
        }
        let (a, b) = p.evaluate(&BitString::ones(16)).unwrap();
        assert_eq!((a.f, b.f), (16.0, 0.0));
        let (a, b) = p.evaluate(&BitString::zeros(16)).unwrap();
        assert_eq!((a.f, b.f), (0.0, 16.0));
    }

    #[test]
    fn bf2_unit_blocks_is_lotz() {
        let p = BiProblem::new(make_biobjective(BiSuiteId::BF2, 8, 8).unwrap()).unwrap();
        for i in 0..256 {
            let x = BitString::from_index(i, 8);
            let lo = x.iter().take_while(|&b| b).count() as f64;
            let tz = x.as_slice().iter().rev().take_while(|&&b| !b).count() as f64;
            let (a, b) = p.evaluate(&x).unwrap();
            assert_eq!((a.f, b.f), (lo, tz), "{x}");
        }
        let (a, b) = p.evaluate(&"11100100".parse().unwrap()).unwrap();
        assert_eq!((a.f, b.f), (3.0, 2.0));
    }

    #[test]
    fn bf4_weights_and_gates() {
        let bi = make_biobjective(BiSuiteId::BF4, 40, 4).unwrap();
        assert_eq!(bi.first.weights, vec![1.0, -1.0, 1.0, 1.0]);
        assert_eq!(bi.second.weights, vec![-1.0, 1.0, 1.0, -1.0]);
        assert_eq!(bi.first.constants, vec![0.0, 10.0, 0.0, 0.0]);
        assert_eq!(bi.first.thresholds, vec![10.0, 0.0, 10.0, 10.0]);
        assert_eq!(bi.first.gate_dir.as_ref().unwrap()[1], GateDir::Le);
        let bf5 = make_biobjective(BiSuiteId::BF5, 80, 8).unwrap();
        assert_eq!(bf5.first.weights[4..], [1.0, -1.0, 1.0, 1.0]);
    }
}
