use crate::bits::BitString;
use crate::problems::Problem;
use crate::soea::{RunResult, TracePoint};

/// Counts evaluations, enforces the budget and records the best-so-far trace.
pub struct Tracker<'a> {
    problem: &'a Problem,
    budget: u64,
    target: Option<f64>,
    evals: u64,
    best: Option<(f64, BitString, Vec<u64>)>,
    hit_at: Option<u64>,
    trajectory: Vec<TracePoint>,
    scratch: Vec<u64>,
}

impl<'a> Tracker<'a> {
    pub fn new(problem: &'a Problem, budget: u64, target: Option<f64>) -> Self {
        Tracker {
            problem,
            budget,
            target,
            evals: 0,
            best: None,
            hit_at: None,
            trajectory: Vec::new(),
            scratch: Vec::with_capacity(problem.m()),
        }
    }

    pub fn problem(&self) -> &'a Problem {
        self.problem
    }

    pub fn n(&self) -> usize {
        self.problem.n()
    }

    pub fn evals(&self) -> u64 {
        self.evals
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Evaluates `x`, or returns `None` once the budget is spent.
    pub fn eval(&mut self, x: &BitString) -> Option<f64> {
        if self.evals >= self.budget {
            return None;
        }
        self.evals += 1;
        let f = self.problem.fitness_with(x.as_slice(), &mut self.scratch);
        if self.best.as_ref().is_none_or(|(b, _, _)| f > *b) {
            self.trajectory.push(TracePoint {
                evals: self.evals,
                best_f: f,
                block_values: self.scratch.clone(),
            });
            self.best = Some((f, x.clone(), self.scratch.clone()));
        }
        if self.hit_at.is_none() && self.target.is_some_and(|t| f >= t) {
            self.hit_at = Some(self.evals);
        }
        Some(f)
    }

    /// True once the target was hit or the budget is spent.
    pub fn done(&self) -> bool {
        self.hit_at.is_some() || self.evals >= self.budget
    }

    pub fn best_f(&self) -> f64 {
        self.best.as_ref().map_or(f64::NEG_INFINITY, |b| b.0)
    }

    pub fn finish(self) -> RunResult {
        let (best_f, best_x, best_values) = self.best.expect("at least one evaluation");
        RunResult {
            evaluations_used: self.evals,
            best_f,
            best_x,
            best_values,
            hit_target: self.hit_at.is_some(),
            hit_at: self.hit_at,
            trajectory: self.trajectory,
        }
    }
}
