use serde::Serialize;

use crate::bits::BitString;
use crate::moea::{hypervolume_2d, weakly_dominates, ObjectivePair};

/// An accepted insertion: evaluation index, archive hypervolume after it
/// (reference `(0, 0)`), and the inserted solution.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ArchiveEvent {
    pub evals: u64,
    pub hv: f64,
    pub x: BitString,
    pub y: ObjectivePair,
}

/// Mutually non-dominated solutions, one genotype per objective vector
/// (the first one offered).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ParetoArchive {
    entries: Vec<(BitString, ObjectivePair)>,
    trace: Vec<ArchiveEvent>,
    evaluations: u64,
}

impl ParetoArchive {
    pub fn new() -> Self {
        ParetoArchive::default()
    }

    /// Inserts `y` unless an entry weakly dominates it; entries weakly
    /// dominated by `y` are removed. Returns whether `y` was inserted.
    pub fn offer(&mut self, x: &BitString, y: ObjectivePair, evals: u64) -> bool {
        self.evaluations = self.evaluations.max(evals);
        if self.entries.iter().any(|(_, z)| weakly_dominates(*z, y)) {
            return false;
        }
        self.entries.retain(|(_, z)| !weakly_dominates(y, *z));
        self.entries.push((x.clone(), y));
        let hv = self.hypervolume(ObjectivePair::ORIGIN);
        self.trace.push(ArchiveEvent { evals, hv, x: x.clone(), y });
        true
    }

    pub fn entries(&self) -> &[(BitString, ObjectivePair)] {
        &self.entries
    }

    /// Objective vectors sorted by the first objective.
    pub fn points(&self) -> Vec<ObjectivePair> {
        let mut pts: Vec<ObjectivePair> = self.entries.iter().map(|(_, y)| *y).collect();
        pts.sort_by(|a, b| a.y1.total_cmp(&b.y1).then(a.y2.total_cmp(&b.y2)));
        pts
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn hypervolume(&self, reference: ObjectivePair) -> f64 {
        let pts: Vec<ObjectivePair> = self.entries.iter().map(|(_, y)| *y).collect();
        hypervolume_2d(&pts, reference)
    }

    pub fn trace(&self) -> &[ArchiveEvent] {
        &self.trace
    }

    /// Evaluations spent by the run that filled the archive.
    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub(crate) fn set_evaluations(&mut self, evals: u64) {
        self.evaluations = evals;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moea::dominates;
    use crate::random::RandomSource;

    #[test]
    fn insertion_rules() {
        let mut a = ParetoArchive::new();
        let x: BitString = "01".parse().unwrap();
        let x2: BitString = "10".parse().unwrap();
        assert!(a.offer(&x, ObjectivePair::new(1.0, 1.0), 1));
        assert!(!a.offer(&x2, ObjectivePair::new(1.0, 1.0), 2));
        assert_eq!(a.entries()[0].0, x);
        assert!(!a.offer(&x2, ObjectivePair::new(0.0, 1.0), 3));
        assert!(a.offer(&x2, ObjectivePair::new(2.0, 0.0), 4));
        assert!(a.offer(&x2, ObjectivePair::new(2.0, 1.0), 5));
        assert_eq!(a.points(), vec![ObjectivePair::new(2.0, 1.0)]);
        assert_eq!(a.trace().len(), 3);
        assert_eq!(a.evaluations(), 5);
    }

    #[test]
    fn random_offers_keep_invariants() {
        let mut rng = RandomSource::new(3);
        let mut a = ParetoArchive::new();
        let x = BitString::zeros(1);
        for t in 0..2000 {
            let y = ObjectivePair::new(rng.index(20) as f64, rng.index(20) as f64);
            a.offer(&x, y, t);
            let pts = a.points();
            for p in &pts {
                assert!(!pts.iter().any(|q| dominates(*q, *p)));
            }
            let mut uniq = pts.clone();
            uniq.dedup();
            assert_eq!(uniq.len(), pts.len());
        }
        assert!(a.trace().windows(2).all(|w| w[0].hv <= w[1].hv));
    }
}
