//! Exact oracles over the search space and over block-value combinations.
//!
//! The objective depends on `x` only through the block values, so the
//! attainable range of `f` under a constraint on each block is found by
//! enumerating the product of per-block attainable value sets.

mod profile;

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rayon::prelude::*;

use crate::bits::BitString;
use crate::error::{param, Error, Result};
use crate::moea::ObjectivePair;
use crate::problems::{BiProblem, Problem, ProblemKind};

pub use profile::{block_profile, structural_profile, BlockProfile, ProfileKey, MAX_PROFILE_BITS};

/// Largest `n` scanned by [`exhaustive_optimum`].
pub const MAX_EXHAUSTIVE_BITS: usize = 24;
/// Largest `n` handled by the bi-objective enumerations.
pub const MAX_FRONT_BITS: usize = 20;
/// Cap on value combinations visited by one attainability query.
pub const MAX_COMBINATIONS: u128 = 1 << 32;

const CHUNK: u64 = 1 << 12;

fn fill_bits(index: u64, x: &mut [bool]) {
    let n = x.len();
    for (i, bit) in x.iter_mut().enumerate() {
        *bit = (index >> (n - 1 - i)) & 1 == 1;
    }
}

fn refuse_above(n: usize, limit: usize, what: &str) -> Result<()> {
    if n > limit {
        return Err(Error::TooLarge(format!("{what} over {n} bits (limit {limit})")));
    }
    Ok(())
}

/// Best value over all `2^n` strings and the lexicographically smallest
/// string attaining it.
pub fn exhaustive_optimum(problem: &Problem) -> Result<(f64, BitString)> {
    let n = problem.n();
    refuse_above(n, MAX_EXHAUSTIVE_BITS, "exhaustive scan")?;
    let total = 1u64 << n;
    let (f, index) = (0..total.div_ceil(CHUNK))
        .into_par_iter()
        .map(|chunk| {
            let mut x = vec![false; n];
            let mut scratch = Vec::with_capacity(problem.m());
            let mut best = (f64::NEG_INFINITY, u64::MAX);
            for index in chunk * CHUNK..((chunk + 1) * CHUNK).min(total) {
                fill_bits(index, &mut x);
                let f = problem.fitness_with(&x, &mut scratch);
                if f > best.0 {
                    best = (f, index);
                }
            }
            best
        })
        .reduce(
            || (f64::NEG_INFINITY, u64::MAX),
            |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a },
        );
    Ok((f, BitString::from_index(index, n)))
}

/// Per-block profiles of a problem, for attainability queries.
#[derive(Clone, Debug)]
pub struct Landscape {
    problem: Problem,
    by_distance: Vec<BlockProfile>,
    by_ones: Vec<BlockProfile>,
}

impl Landscape {
    pub fn new(problem: &Problem) -> Result<Self> {
        let len = problem.block_len();
        let mut cache: BTreeMap<String, (BlockProfile, BlockProfile)> = BTreeMap::new();
        let mut by_distance = Vec::with_capacity(problem.m());
        let mut by_ones = Vec::with_capacity(problem.m());
        for bf in problem.blocks() {
            let entry = match cache.get(&bf.to_string()) {
                Some(entry) => entry.clone(),
                None => {
                    let entry = (
                        structural_profile(bf, len, ProfileKey::Distance)?,
                        structural_profile(bf, len, ProfileKey::Ones)?,
                    );
                    cache.insert(bf.to_string(), entry.clone());
                    entry
                }
            };
            by_distance.push(entry.0);
            by_ones.push(entry.1);
        }
        Ok(Landscape { problem: problem.clone(), by_distance, by_ones })
    }

    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    pub fn distance_profile(&self, block: usize) -> &BlockProfile {
        &self.by_distance[block]
    }

    pub fn ones_profile(&self, block: usize) -> &BlockProfile {
        &self.by_ones[block]
    }

    /// Range of `f` over strings whose block `i` lies at distance `d[i]`
    /// from its block optimum.
    pub fn attainable_by_distance(&self, d: &[usize]) -> Result<(f64, f64)> {
        self.check_vector(d, "distance")?;
        let sets: Vec<Vec<u64>> = d
            .iter()
            .enumerate()
            .map(|(i, &d)| self.by_distance[i].sets[d].iter().copied().collect())
            .collect();
        self.extrema(&sets)
    }

    /// Range of `f` with the given blocks fixed and every other block free.
    pub fn attainable_by_block_values(&self, fixed: &BTreeMap<usize, u64>) -> Result<(f64, f64)> {
        let m = self.problem.m();
        let mut sets: Vec<Vec<u64>> = (0..m)
            .map(|i| self.by_ones[i].all_values().into_iter().collect())
            .collect();
        for (&block, &value) in fixed {
            if block >= m {
                return param(format!("block {block} out of range (m = {m})"));
            }
            if !sets[block].contains(&value) {
                return Err(Error::Unattainable { block, value });
            }
            sets[block] = vec![value];
        }
        self.extrema(&sets)
    }

    /// Every value of `f` taken by some string with exactly `k` ones, sorted.
    pub fn attainable_by_ones_count(&self, k: usize) -> Result<Vec<f64>> {
        let n = self.problem.n();
        if k > n {
            return param(format!("ones count {k} out of range 0..={n}"));
        }
        let len = self.problem.block_len();
        // Distinct value sets per (block, ones count); pairs (u, values).
        let options: Vec<Vec<(usize, Vec<u64>)>> = self
            .by_ones
            .iter()
            .map(|p| {
                (0..=len)
                    .map(|u| (u, p.sets[u].iter().copied().collect()))
                    .collect()
            })
            .collect();
        let mut seen = HashSet::new();
        let mut current = vec![0u64; self.problem.m()];
        self.compose(&options, 0, k, &mut current, &mut seen);
        let mut out: Vec<f64> = seen.into_iter().map(f64::from_bits).collect();
        out.sort_by(f64::total_cmp);
        Ok(out)
    }

    fn compose(
        &self,
        options: &[Vec<(usize, Vec<u64>)>],
        block: usize,
        remaining: usize,
        current: &mut Vec<u64>,
        seen: &mut HashSet<u64>,
    ) {
        let m = options.len();
        if block == m {
            if remaining == 0 {
                seen.insert(canonical(self.problem.aggregate(current)).to_bits());
            }
            return;
        }
        let len = self.problem.block_len();
        let rest_capacity = (m - block - 1) * len;
        for (u, values) in &options[block] {
            if *u > remaining || remaining - u > rest_capacity {
                continue;
            }
            for &v in values {
                current[block] = v;
                self.compose(options, block + 1, remaining - u, current, seen);
            }
        }
    }

    fn check_vector(&self, d: &[usize], what: &str) -> Result<()> {
        let (m, len) = (self.problem.m(), self.problem.block_len());
        if d.len() != m {
            return Err(Error::LengthMismatch { expected: m, actual: d.len() });
        }
        if let Some((i, &v)) = d.iter().enumerate().find(|(_, &v)| v > len) {
            return param(format!("{what} {v} of block {i} out of range 0..={len}"));
        }
        Ok(())
    }

    fn extrema(&self, sets: &[Vec<u64>]) -> Result<(f64, f64)> {
        let p = &self.problem;
        if p.kind() == ProblemKind::Dbp && p.spec().dependency.iter().flatten().all(|&e| e == 0.0) {
            // Separable: each block contributes a + w v independently.
            let spec = p.spec();
            let (mut lo, mut hi) = (0.0, 0.0);
            for (i, set) in sets.iter().enumerate() {
                let terms = set.iter().map(|&v| spec.constants[i] + spec.weights[i] * v as f64);
                lo += terms.clone().fold(f64::INFINITY, f64::min);
                hi += terms.fold(f64::NEG_INFINITY, f64::max);
            }
            return Ok((lo, hi));
        }
        let combos: u128 = sets.iter().map(|s| s.len() as u128).product();
        if combos > MAX_COMBINATIONS {
            return Err(Error::TooLarge(format!("{combos} block-value combinations")));
        }
        let mut digits = vec![0usize; sets.len()];
        let mut v: Vec<u64> = sets.iter().map(|s| s[0]).collect();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        loop {
            let f = p.aggregate(&v);
            lo = lo.min(f);
            hi = hi.max(f);
            let mut i = 0;
            loop {
                if i == sets.len() {
                    return Ok((lo, hi));
                }
                digits[i] += 1;
                if digits[i] < sets[i].len() {
                    v[i] = sets[i][digits[i]];
                    break;
                }
                digits[i] = 0;
                v[i] = sets[i][0];
                i += 1;
            }
        }
    }
}

/// Maps `-0.0` to `0.0` so equal values deduplicate.
fn canonical(f: f64) -> f64 {
    if f == 0.0 {
        0.0
    } else {
        f
    }
}

/// A non-dominated objective vector with the lexicographically smallest
/// string attaining it.
#[derive(Clone, Debug, PartialEq)]
pub struct FrontPoint {
    pub y: ObjectivePair,
    pub x: BitString,
}

fn scan_objectives(problem: &BiProblem) -> Result<Vec<ObjectivePair>> {
    let n = problem.n();
    refuse_above(n, MAX_FRONT_BITS, "objective-space enumeration")?;
    let total = 1u64 << n;
    Ok((0..total.div_ceil(CHUNK))
        .into_par_iter()
        .flat_map_iter(|chunk| {
            let mut x = vec![false; n];
            let mut scratch = Vec::new();
            (chunk * CHUNK..((chunk + 1) * CHUNK).min(total))
                .map(|index| {
                    fill_bits(index, &mut x);
                    let (y1, y2) = problem.objectives_with(&x, &mut scratch);
                    ObjectivePair::new(canonical(y1), canonical(y2))
                })
                .collect::<Vec<_>>()
        })
        .collect())
}

/// Exact Pareto front (maximising both objectives), ordered by the first
/// objective ascending.
pub fn pareto_front_oracle(problem: &BiProblem) -> Result<Vec<FrontPoint>> {
    let ys = scan_objectives(problem)?;
    let mut order: Vec<usize> = (0..ys.len()).collect();
    order.sort_by(|&a, &b| {
        ys[b].y1
            .total_cmp(&ys[a].y1)
            .then(ys[b].y2.total_cmp(&ys[a].y2))
            .then(a.cmp(&b))
    });
    let mut front = Vec::new();
    let mut best_y2 = f64::NEG_INFINITY;
    for i in order {
        if ys[i].y2 > best_y2 {
            best_y2 = ys[i].y2;
            front.push(FrontPoint { y: ys[i], x: BitString::from_index(i as u64, problem.n()) });
        }
    }
    front.reverse();
    Ok(front)
}

/// Every distinct attainable objective vector, sorted.
pub fn objective_space(problem: &BiProblem) -> Result<Vec<ObjectivePair>> {
    let set: BTreeSet<(u64, u64)> = scan_objectives(problem)?
        .into_iter()
        .map(|y| (y.y1.to_bits(), y.y2.to_bits()))
        .collect();
    let mut out: Vec<ObjectivePair> = set
        .into_iter()
        .map(|(a, b)| ObjectivePair::new(f64::from_bits(a), f64::from_bits(b)))
        .collect();
    out.sort_by(|a, b| a.y1.total_cmp(&b.y1).then(a.y2.total_cmp(&b.y2)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{make_biobjective, make_suite_instance, BiSuiteId, SuiteId};

    fn problem(id: SuiteId, n: usize, m: usize) -> Problem {
        Problem::new(make_suite_instance(id, n, m).unwrap()).unwrap()
    }

    fn landscape(id: SuiteId, n: usize, m: usize) -> Landscape {
        Landscape::new(&problem(id, n, m)).unwrap()
    }

    #[test]
    fn exhaustive_examples() {
        let (f, x) = exhaustive_optimum(&problem(SuiteId::F1, 12, 4)).unwrap();
        assert_eq!((f, x.to_string().as_str()), (12.0, "111111111111"));
        let (f, x) = exhaustive_optimum(&problem(SuiteId::F3, 12, 2)).unwrap();
        assert_eq!((f, x), (18.0, BitString::ones(12)));
        let bf1 = BiProblem::new(make_biobjective(BiSuiteId::BF1, 8, 1).unwrap()).unwrap();
        let (f, x) = exhaustive_optimum(bf1.first()).unwrap();
        assert_eq!((f, x), (8.0, BitString::ones(8)));
        let err = exhaustive_optimum(&problem(SuiteId::F1, 25, 1)).unwrap_err();
        assert!(matches!(err, Error::TooLarge(_)));
    }

    #[test]
    fn exhaustive_ties_take_smallest_string() {
        // BF1's second objective is maximised only by all zeros; a flat
        // function is maximised everywhere and must report index 0.
        let mut spec = make_suite_instance(SuiteId::F1, 6, 1).unwrap();
        spec.weights = vec![0.0];
        let (f, x) = exhaustive_optimum(&Problem::new(spec).unwrap()).unwrap();
        assert_eq!((f, x), (0.0, BitString::zeros(6)));
        let f2 = problem(SuiteId::F2, 6, 1);
        assert_eq!(exhaustive_optimum(&f2).unwrap().1, BitString::ones(6));
    }

    #[test]
    fn distance_examples() {
        assert_eq!(landscape(SuiteId::F1, 40, 4).attainable_by_distance(&[0; 4]).unwrap(), (40.0, 40.0));
        assert_eq!(
            landscape(SuiteId::F7, 40, 4).attainable_by_distance(&[10, 0, 0, 0]).unwrap(),
            (3.0, 3.0)
        );
        // OneMax, Jump_2, Jump_3 and Epistasis blocks: 10 + 12 + 13 + 10.
        let f6 = landscape(SuiteId::F6, 40, 4);
        assert_eq!(f6.attainable_by_distance(&[0; 4]).unwrap(), (45.0, 45.0));
        assert_eq!(f6.problem().known_optimum(), Some(45.0));
        assert!(landscape(SuiteId::F1, 40, 4).attainable_by_distance(&[11, 0, 0, 0]).is_err());
        assert!(landscape(SuiteId::F1, 40, 4).attainable_by_distance(&[0; 3]).is_err());
    }

    #[test]
    fn block_value_examples() {
        let f1 = landscape(SuiteId::F1, 40, 4);
        let fixed = BTreeMap::from([(0, 10), (1, 10)]);
        assert_eq!(f1.attainable_by_block_values(&fixed).unwrap(), (20.0, 40.0));

        let f7 = landscape(SuiteId::F7, 40, 4);
        let fixed = BTreeMap::from([(3, 13), (0, 3)]);
        assert_eq!(f7.attainable_by_block_values(&fixed).unwrap(), (3.0, 3.0));
        // Jump_3 on ten bits never takes the value 0.
        let fixed = BTreeMap::from([(3, 13), (0, 0)]);
        assert_eq!(
            f7.attainable_by_block_values(&fixed).unwrap_err(),
            Error::Unattainable { block: 0, value: 0 }
        );

        let all = BTreeMap::from([(0, 7), (1, 13), (2, 2), (3, 10)]);
        let (lo, hi) = f7.attainable_by_block_values(&all).unwrap();
        assert_eq!(lo, hi);
    }

    #[test]
    fn ones_count_examples() {
        let f3 = landscape(SuiteId::F3, 40, 1);
        assert_eq!(f3.attainable_by_ones_count(40).unwrap(), vec![43.0]);
        assert_eq!(f3.attainable_by_ones_count(38).unwrap(), vec![2.0]);
        let f1 = landscape(SuiteId::F1, 40, 4);
        for k in 0..=40 {
            assert_eq!(f1.attainable_by_ones_count(k).unwrap(), vec![k as f64]);
        }
        assert!(f1.attainable_by_ones_count(41).is_err());
    }

    #[test]
    fn f7_neutral_below_threshold() {
        let f7 = landscape(SuiteId::F7, 16, 4);
        for d0 in 1..=4 {
            for rest in 0..125usize {
                let d = [d0, rest % 5, rest / 5 % 5, rest / 25];
                let (lo, hi) = f7.attainable_by_distance(&d).unwrap();
                assert_eq!(lo, hi, "{d:?}");
            }
        }
    }

    #[test]
    fn front_examples() {
        let bf1 = BiProblem::new(make_biobjective(BiSuiteId::BF1, 8, 1).unwrap()).unwrap();
        let front: Vec<(f64, f64)> =
            pareto_front_oracle(&bf1).unwrap().iter().map(|p| (p.y.y1, p.y.y2)).collect();
        assert_eq!(front, (0..=8).map(|i| (i as f64, 8.0 - i as f64)).collect::<Vec<_>>());

        let bf2 = BiProblem::new(make_biobjective(BiSuiteId::BF2, 8, 8).unwrap()).unwrap();
        let front = pareto_front_oracle(&bf2).unwrap();
        assert_eq!(front.len(), 9);
        for p in &front {
            assert_eq!(p.y.y1 + p.y.y2, 8.0);
            let (a, b) = bf2.evaluate(&p.x).unwrap();
            assert_eq!((a.f, b.f), (p.y.y1, p.y.y2));
        }

        let f1 = make_suite_instance(SuiteId::F1, 6, 2).unwrap();
        let same = crate::problems::BiObjectiveInstance { name: None, first: f1.clone(), second: f1 };
        let front = pareto_front_oracle(&BiProblem::new(same).unwrap()).unwrap();
        assert_eq!(front.len(), 1);
        assert_eq!((front[0].y.y1, front[0].y.y2), (6.0, 6.0));
    }
}
