//! Problem instances composed from block functions.
//!
//! Two aggregations are supported. A dependency-based problem (DBP) scores
//! `f = Σ (a_i + w_i v_i) + Σ_{i>j} e_ij v_i v_j`. A gate-constrained problem
//! (GCP) scores `f = Σ (a_i + w_i v_i) c_i`, where the gate `c_i` is open only
//! when every ancestor block of `i` in the gate graph passes its threshold
//! test.

pub mod graph;
mod suite;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::blocks::BlockFunction;
use crate::error::{Error, Result, Violation};

pub use suite::{make_biobjective, make_suite_instance, BiSuiteId, SuiteId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Dbp,
    Gcp,
}

/// Direction of an ancestor's threshold test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateDir {
    /// Passes when `v_j >= b_j`.
    Ge,
    /// Passes when `v_j <= b_j`.
    Le,
}

/// Serializable description of a problem instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub kind: ProblemKind,
    pub n: usize,
    pub m: usize,
    pub blocks: Vec<BlockFunction>,
    #[serde(rename = "W")]
    pub weights: Vec<f64>,
    #[serde(rename = "A")]
    pub constants: Vec<f64>,
    /// Dense rows. DBP reads the strict lower triangle; GCP reads non-zero
    /// entries as edges.
    #[serde(rename = "E")]
    pub dependency: Vec<Vec<f64>>,
    /// Gate thresholds (GCP only; may be empty for DBP).
    #[serde(rename = "B", default)]
    pub thresholds: Vec<f64>,
    /// Per-block gate direction; derived from the weight signs when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gate_dir: Option<Vec<GateDir>>,
}

impl InstanceSpec {
    pub fn block_len(&self) -> usize {
        self.n / self.m.max(1)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance specs always serialize")
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Gate directions in effect: explicit ones, or `w_j >= 0 → Ge`, else `Le`.
    pub fn gate_dirs(&self) -> Vec<GateDir> {
        match &self.gate_dir {
            Some(dirs) => dirs.clone(),
            None => self
                .weights
                .iter()
                .map(|&w| if w >= 0.0 { GateDir::Ge } else { GateDir::Le })
                .collect(),
        }
    }
}

/// Every reason `spec` cannot be evaluated (empty when it is valid).
pub fn validate_spec(spec: &InstanceSpec) -> std::result::Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    let m = spec.m;
    if spec.n == 0 || m == 0 {
        out.push(Violation::ZeroDimension);
        return Err(out);
    }
    if !spec.n.is_multiple_of(m) {
        out.push(Violation::NotDivisible { n: spec.n, m });
    }
    let mut check_len = |field: &'static str, actual: usize| {
        if actual != m {
            out.push(Violation::Length { field, expected: m, actual });
        }
    };
    check_len("blocks", spec.blocks.len());
    check_len("W", spec.weights.len());
    check_len("A", spec.constants.len());
    check_len("E", spec.dependency.len());
    if spec.kind == ProblemKind::Gcp {
        check_len("B", spec.thresholds.len());
    }
    if let Some(dirs) = &spec.gate_dir {
        check_len("gate_dir", dirs.len());
    }
    for (row, entries) in spec.dependency.iter().enumerate() {
        if entries.len() != m {
            out.push(Violation::MatrixRow { row, expected: m, actual: entries.len() });
        }
    }
    for (field, values) in [("W", &spec.weights), ("A", &spec.constants), ("B", &spec.thresholds)] {
        for (index, v) in values.iter().enumerate() {
            if !v.is_finite() {
                out.push(Violation::NonFinite { field, index });
            }
        }
    }
    for (index, v) in spec.dependency.iter().flatten().enumerate() {
        if !v.is_finite() {
            out.push(Violation::NonFinite { field: "E", index });
        }
    }
    if spec.n.is_multiple_of(m) {
        for (block, bf) in spec.blocks.iter().enumerate() {
            if let Err(e) = bf.validate(spec.block_len()) {
                out.push(Violation::Block { block, reason: e.to_string() });
            }
        }
    }
    let square = spec.dependency.len() == m && spec.dependency.iter().all(|r| r.len() == m);
    if spec.kind == ProblemKind::Gcp && square {
        if let Err(blocks) = graph::topological_order(&spec.dependency) {
            out.push(Violation::Cycle { blocks });
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Objective value plus the per-block detail behind it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Evaluation {
    pub f: f64,
    pub block_values: Vec<u64>,
    /// Gate state `c_i` per block (all `true` for DBP).
    pub gates: Vec<bool>,
}

/// A validated instance, ready for fast evaluation.
#[derive(Clone, Debug)]
pub struct Problem {
    spec: InstanceSpec,
    block_len: usize,
    maxima: Vec<u64>,
    thresholds: Vec<f64>,
    gate_dirs: Vec<GateDir>,
    ancestors: Vec<Vec<usize>>,
    products: Vec<(usize, usize, f64)>,
}

impl Problem {
    pub fn new(spec: InstanceSpec) -> Result<Self> {
        validate_spec(&spec).map_err(Error::InvalidSpec)?;
        let block_len = spec.block_len();
        let maxima: Vec<u64> = spec.blocks.iter().map(|b| b.max_value(block_len)).collect();
        let gate_dirs = spec.gate_dirs();
        let (thresholds, ancestors, products) = match spec.kind {
            ProblemKind::Gcp => {
                let thresholds = spec
                    .thresholds
                    .iter()
                    .zip(&maxima)
                    .zip(&gate_dirs)
                    .map(|((&b, &max), dir)| match dir {
                        GateDir::Ge => b.min(max as f64),
                        GateDir::Le => b.max(0.0),
                    })
                    .collect();
                let ancestors = (0..spec.m)
                    .map(|i| graph::ancestors(&spec.dependency, i).map(|s| s.into_iter().collect()))
                    .collect::<Result<Vec<Vec<usize>>>>()?;
                (thresholds, ancestors, Vec::new())
            }
            ProblemKind::Dbp => {
                let products = (0..spec.m)
                    .flat_map(|i| (0..i).map(move |j| (i, j)))
                    .filter_map(|(i, j)| {
                        let e = spec.dependency[i][j];
                        (e != 0.0).then_some((i, j, e))
                    })
                    .collect();
                (Vec::new(), vec![Vec::new(); spec.m], products)
            }
        };
        Ok(Problem { spec, block_len, maxima, thresholds, gate_dirs, ancestors, products })
    }

    pub fn spec(&self) -> &InstanceSpec {
        &self.spec
    }

    pub fn name(&self) -> &str {
        self.spec.name.as_deref().unwrap_or("custom")
    }

    pub fn kind(&self) -> ProblemKind {
        self.spec.kind
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn m(&self) -> usize {
        self.spec.m
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn blocks(&self) -> &[BlockFunction] {
        &self.spec.blocks
    }

    pub fn block_maxima(&self) -> &[u64] {
        &self.maxima
    }

    /// Thresholds after clamping (`min(b, max)` for `Ge`, `max(b, 0)` for `Le`).
    pub fn effective_thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn gate_directions(&self) -> &[GateDir] {
        &self.gate_dirs
    }

    pub fn ancestors(&self, block: usize) -> &[usize] {
        &self.ancestors[block]
    }

    /// Writes `v_i(x^i)` for every block into `out`.
    pub fn block_values_into(&self, x: &[bool], out: &mut Vec<u64>) {
        out.clear();
        out.extend(
            x.chunks_exact(self.block_len)
                .zip(&self.spec.blocks)
                .map(|(chunk, bf)| bf.value(chunk)),
        );
    }

    fn passes(&self, j: usize, v: u64) -> bool {
        let v = v as f64;
        match self.gate_dirs[j] {
            GateDir::Ge => v >= self.thresholds[j],
            GateDir::Le => v <= self.thresholds[j],
        }
    }

    fn gate_open(&self, i: usize, v: &[u64]) -> bool {
        self.ancestors[i].iter().all(|&j| self.passes(j, v[j]))
    }

    /// Gate state of every block for block values `v`.
    pub fn gates(&self, v: &[u64]) -> Vec<bool> {
        match self.spec.kind {
            ProblemKind::Dbp => vec![true; self.m()],
            ProblemKind::Gcp => (0..self.m()).map(|i| self.gate_open(i, v)).collect(),
        }
    }

    /// Objective value as a function of the block values alone.
    pub fn aggregate(&self, v: &[u64]) -> f64 {
        let w = &self.spec.weights;
        let a = &self.spec.constants;
        match self.spec.kind {
            ProblemKind::Dbp => {
                let linear: f64 = (0..v.len()).map(|i| a[i] + w[i] * v[i] as f64).sum();
                let pairs: f64 = self
                    .products
                    .iter()
                    .map(|&(i, j, e)| e * v[i] as f64 * v[j] as f64)
                    .sum();
                linear + pairs
            }
            ProblemKind::Gcp => (0..v.len())
                .filter(|&i| self.gate_open(i, v))
                .map(|i| a[i] + w[i] * v[i] as f64)
                .sum(),
        }
    }

    /// Objective value, reusing `scratch` for the block values.
    pub fn fitness_with(&self, x: &[bool], scratch: &mut Vec<u64>) -> f64 {
        self.block_values_into(x, scratch);
        self.aggregate(scratch)
    }

    pub fn evaluate(&self, x: &BitString) -> Result<Evaluation> {
        x.check_len(self.n())?;
        let mut v = Vec::with_capacity(self.m());
        self.block_values_into(x.as_slice(), &mut v);
        Ok(Evaluation { f: self.aggregate(&v), gates: self.gates(&v), block_values: v })
    }

    /// The string made of every block's optimum.
    pub fn blockwise_optimum(&self) -> BitString {
        self.spec
            .blocks
            .iter()
            .flat_map(|bf| bf.optimum(self.block_len).as_slice().to_vec())
            .collect()
    }

    /// Closed form when the instance is monotone in every block value,
    /// exhaustive search for `n <= 24`, otherwise `None`.
    pub fn known_optimum(&self) -> Option<f64> {
        let w = &self.spec.weights;
        let monotone = match self.spec.kind {
            ProblemKind::Dbp => {
                w.iter().all(|&w| w >= 0.0) && self.products.iter().all(|&(_, _, e)| e >= 0.0)
            }
            ProblemKind::Gcp => {
                w.iter().all(|&w| w >= 0.0)
                    && self.spec.constants.iter().all(|&a| a >= 0.0)
                    && self.gate_dirs.iter().all(|&d| d == GateDir::Ge)
            }
        };
        if monotone {
            Some(self.aggregate(&self.maxima))
        } else if self.n() <= crate::landscape::MAX_EXHAUSTIVE_BITS {
            crate::landscape::exhaustive_optimum(self).ok().map(|(f, _)| f)
        } else {
            None
        }
    }
}

/// Evaluates `spec` on `x` (validating the spec first).
pub fn evaluate(spec: &InstanceSpec, x: &BitString) -> Result<Evaluation> {
    Problem::new(spec.clone())?.evaluate(x)
}

/// Transitive gate predecessors of `block` in adjacency matrix `e` (0-based).
pub fn ancestors(e: &[Vec<f64>], block: usize) -> Result<BTreeSet<usize>> {
    graph::ancestors(e, block)
}

/// Two objectives defined on the same search space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BiObjectiveInstance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub first: InstanceSpec,
    pub second: InstanceSpec,
}

/// Validated pair of objectives.
#[derive(Clone, Debug)]
pub struct BiProblem {
    name: String,
    first: Problem,
    second: Problem,
}

impl BiProblem {
    pub fn new(inst: BiObjectiveInstance) -> Result<Self> {
        if inst.first.n != inst.second.n {
            return Err(Error::Parameter(format!(
                "objectives disagree on n ({} vs {})",
                inst.first.n, inst.second.n
            )));
        }
        Ok(BiProblem {
            name: inst.name.unwrap_or_else(|| "custom".into()),
            first: Problem::new(inst.first)?,
            second: Problem::new(inst.second)?,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.first.n()
    }

    pub fn first(&self) -> &Problem {
        &self.first
    }

    pub fn second(&self) -> &Problem {
        &self.second
    }

    pub fn evaluate(&self, x: &BitString) -> Result<(Evaluation, Evaluation)> {
        Ok((self.first.evaluate(x)?, self.second.evaluate(x)?))
    }

    /// Both objective values, reusing `scratch`.
    pub fn objectives_with(&self, x: &[bool], scratch: &mut Vec<u64>) -> (f64, f64) {
        (self.first.fitness_with(x, scratch), self.second.fitness_with(x, scratch))
    }
}

pub fn evaluate_bi(inst: &BiObjectiveInstance, x: &BitString) -> Result<(Evaluation, Evaluation)> {
    BiProblem::new(inst.clone())?.evaluate(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bits(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn leading_ones_gcp(n: usize) -> InstanceSpec {
        InstanceSpec {
            name: None,
            kind: ProblemKind::Gcp,
            n,
            m: n,
            blocks: vec![BlockFunction::OneMax; n],
            weights: vec![1.0; n],
            constants: vec![0.0; n],
            dependency: graph::forward_path(n),
            thresholds: vec![1.0; n],
            gate_dir: None,
        }
    }

    #[test]
    fn validation_reports_every_problem() {
        let mut spec = make_suite_instance(SuiteId::F1, 10, 2).unwrap();
        assert!(validate_spec(&spec).is_ok());
        spec.m = 4;
        let errs = validate_spec(&spec).unwrap_err();
        assert!(errs.contains(&Violation::NotDivisible { n: 10, m: 4 }));
        assert!(errs.iter().any(|v| matches!(v, Violation::Length { field: "W", .. })));

        let mut gcp = leading_ones_gcp(3);
        gcp.dependency[1][0] = 1.0;
        let errs = validate_spec(&gcp).unwrap_err();
        assert_eq!(errs, vec![Violation::Cycle { blocks: vec![0, 1, 2] }]);
        assert!(matches!(Problem::new(gcp), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn suite_f1_all_ones() {
        let p = Problem::new(make_suite_instance(SuiteId::F1, 40, 4).unwrap()).unwrap();
        let e = p.evaluate(&BitString::ones(40)).unwrap();
        assert_eq!(e.f, 40.0);
        assert_eq!(e.block_values, vec![10; 4]);
        assert_eq!(e.gates, vec![true; 4]);
        assert!(p.evaluate(&BitString::ones(39)).is_err());
    }

    #[test]
    fn gcp_with_unit_blocks_is_leading_ones() {
        let p = Problem::new(leading_ones_gcp(8)).unwrap();
        assert_eq!(p.evaluate(&bits("11010111")).unwrap().f, 2.0);
    }

    #[test]
    fn closed_first_gate_silences_downstream() {
        let p = Problem::new(make_suite_instance(SuiteId::F7, 40, 4).unwrap()).unwrap();
        // Block 1 has 2 ones: Jump_3 value 5 < threshold 13.
        let mut x = BitString::ones(40);
        for i in 2..10 {
            x.set(i, false);
        }
        let e = p.evaluate(&x).unwrap();
        assert_eq!(e.block_values, vec![5, 13, 13, 13]);
        assert_eq!(e.gates, vec![true, false, false, false]);
        assert_eq!(e.f, 5.0);
    }

    #[test]
    fn known_optima() {
        let opt = |id, n, m| Problem::new(make_suite_instance(id, n, m).unwrap()).unwrap().known_optimum();
        assert_eq!(opt(SuiteId::F1, 40, 4), Some(40.0));
        assert_eq!(opt(SuiteId::F3, 40, 4), Some(52.0));
        assert_eq!(opt(SuiteId::F10, 40, 4), Some(43.0));
        assert_eq!(opt(SuiteId::F9, 40, 4), Some(10.0 + 12.0 + 13.0 + 10.0));
    }

    #[test]
    fn non_monotone_small_instances_fall_back_to_search() {
        let bi = make_biobjective(BiSuiteId::BF2, 12, 4).unwrap();
        let second = Problem::new(bi.second).unwrap();
        assert_eq!(second.known_optimum(), Some(12.0));
        let big = Problem::new(make_biobjective(BiSuiteId::BF2, 40, 4).unwrap().second).unwrap();
        assert_eq!(big.known_optimum(), None);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let mut spec = make_suite_instance(SuiteId::F9, 40, 4).unwrap();
        spec.weights[2] = 0.1 + 0.2;
        spec.dependency[3][1] = -1.0 / 3.0;
        let text = spec.to_json();
        let back = InstanceSpec::from_json(&text).unwrap();
        assert_eq!(back, spec);
        assert_eq!(back.to_json(), text);
        for (a, b) in back.weights.iter().zip(&spec.weights) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn dbp_products_use_lower_triangle() {
        let mut spec = make_suite_instance(SuiteId::F1, 6, 3).unwrap();
        spec.dependency[2][0] = 2.0;
        spec.dependency[0][2] = 100.0; // upper triangle ignored
        let p = Problem::new(spec).unwrap();
        let e = p.evaluate(&bits("11 01 11")).unwrap();
        assert_eq!(e.f, 5.0 + 2.0 * 2.0 * 2.0);
    }

    fn arb_dbp() -> impl Strategy<Value = (InstanceSpec, Vec<bool>)> {
        (1usize..5, 2usize..6).prop_flat_map(|(m, len)| {
            let families = prop_oneof![
                Just(BlockFunction::OneMax),
                Just(BlockFunction::LeadingOnes),
                Just(BlockFunction::Jump { k: 1 }),
                Just(BlockFunction::Epistasis { nu: 2 }),
            ];
            (
                proptest::collection::vec(families, m),
                proptest::collection::vec(-3.0f64..3.0, m),
                proptest::collection::vec(-3.0f64..3.0, m),
                proptest::collection::vec(any::<bool>(), m * len),
            )
                .prop_map(move |(blocks, w, a, x)| {
                    let spec = InstanceSpec {
                        name: None,
                        kind: ProblemKind::Dbp,
                        n: m * len,
                        m,
                        blocks,
                        weights: w,
                        constants: a,
                        dependency: vec![vec![0.0; m]; m],
                        thresholds: vec![],
                        gate_dir: None,
                    };
                    (spec, x)
                })
        })
    }

    proptest! {
        #[test]
        fn dbp_without_dependencies_is_linear((spec, x) in arb_dbp()) {
            let p = Problem::new(spec.clone()).unwrap();
            let len = p.block_len();
            let expected: f64 = x
                .chunks(len)
                .enumerate()
                .map(|(i, c)| spec.constants[i] + spec.weights[i] * crate::blocks::eval_block(&spec.blocks[i], &BitString::from(c.to_vec())).unwrap() as f64)
                .sum();
            prop_assert_eq!(p.evaluate(&BitString::from(x)).unwrap().f, expected);
        }

        #[test]
        fn gates_ignore_non_ancestor_blocks(x in proptest::collection::vec(any::<bool>(), 40), pos in 0usize..40) {
            let p = Problem::new(make_suite_instance(SuiteId::F10, 40, 4).unwrap()).unwrap();
            let mut y = BitString::from(x.clone());
            y.flip(pos);
            let before = p.evaluate(&BitString::from(x)).unwrap().gates;
            let after = p.evaluate(&y).unwrap().gates;
            let block = pos / p.block_len();
            for j in 0..4 {
                if !p.ancestors(j).contains(&block) {
                    prop_assert_eq!(before[j], after[j]);
                }
            }
        }
    }
}
