//! Bi-objective (maximisation) algorithms and indicators.

mod archive;
mod runners;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use archive::{ArchiveEvent, ParetoArchive};
pub use runners::{
    run_gsemo, run_mo, run_moead, run_nsga2, run_semo, run_smsemoa, survivors_by_contribution,
    survivors_by_crowding, tchebycheff, weight_vectors, SELECTION_REFERENCE,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ObjectivePair {
    pub y1: f64,
    pub y2: f64,
}

impl ObjectivePair {
    pub const fn new(y1: f64, y2: f64) -> Self {
        ObjectivePair { y1, y2 }
    }

    pub const ORIGIN: ObjectivePair = ObjectivePair::new(0.0, 0.0);
}

impl From<(f64, f64)> for ObjectivePair {
    fn from((y1, y2): (f64, f64)) -> Self {
        ObjectivePair { y1, y2 }
    }
}

/// `a` is at least as good as `b` in both objectives.
pub fn weakly_dominates(a: ObjectivePair, b: ObjectivePair) -> bool {
    a.y1 >= b.y1 && a.y2 >= b.y2
}

/// `a` weakly dominates `b` and differs from it.
pub fn dominates(a: ObjectivePair, b: ObjectivePair) -> bool {
    weakly_dominates(a, b) && a != b
}

/// Pareto fronts as ascending index lists, best front first.
pub fn non_dominated_sort(points: &[ObjectivePair]) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        points[b].y1
            .total_cmp(&points[a].y1)
            .then(points[b].y2.total_cmp(&points[a].y2))
    });
    // In this order a point is dominated by a front iff it is dominated by
    // that front's latest member, which has the front's largest y2.
    let mut fronts: Vec<Vec<usize>> = Vec::new();
    for i in order {
        match fronts
            .iter_mut()
            .find(|f| !dominates(points[*f.last().expect("non-empty")], points[i]))
        {
            Some(front) => front.push(i),
            None => fronts.push(vec![i]),
        }
    }
    for front in &mut fronts {
        front.sort_unstable();
    }
    fronts
}

/// Crowding distance of each point of a front.
///
/// Repeated objective vectors count once: the first copy is scored and
/// later copies get 0.
pub fn crowding_distance(front: &[ObjectivePair]) -> Vec<f64> {
    let mut distance = vec![0.0; front.len()];
    let unique: Vec<usize> = (0..front.len())
        .filter(|&i| !front[..i].contains(&front[i]))
        .collect();
    if unique.len() <= 2 {
        for &i in &unique {
            distance[i] = f64::INFINITY;
        }
        return distance;
    }
    let objectives: [fn(&ObjectivePair) -> f64; 2] = [|p| p.y1, |p| p.y2];
    for objective in objectives {
        let mut sorted = unique.clone();
        sorted.sort_by(|&a, &b| objective(&front[a]).total_cmp(&objective(&front[b])));
        let first = sorted[0];
        let last = sorted[sorted.len() - 1];
        distance[first] = f64::INFINITY;
        distance[last] = f64::INFINITY;
        let range = objective(&front[last]) - objective(&front[first]);
        if range == 0.0 {
            continue;
        }
        for w in sorted.windows(3) {
            let gap = objective(&front[w[2]]) - objective(&front[w[0]]);
            distance[w[1]] += gap / range;
        }
    }
    distance
}

/// Area dominated by `points` and dominating `reference`. Points not
/// strictly better than the reference in both objectives add nothing.
pub fn hypervolume_2d(points: &[ObjectivePair], reference: ObjectivePair) -> f64 {
    let mut pts: Vec<ObjectivePair> = points
        .iter()
        .copied()
        .filter(|p| p.y1 > reference.y1 && p.y2 > reference.y2)
        .collect();
    pts.sort_by(|a, b| b.y1.total_cmp(&a.y1).then(b.y2.total_cmp(&a.y2)));
    let mut volume = 0.0;
    let mut height = reference.y2;
    for p in pts {
        if p.y2 > height {
            volume += (p.y1 - reference.y1) * (p.y2 - height);
            height = p.y2;
        }
    }
    volume
}

/// `HV(points) - HV(points without i)` for every `i`.
pub fn hv_contributions(points: &[ObjectivePair], reference: ObjectivePair) -> Vec<f64> {
    let total = hypervolume_2d(points, reference);
    let mut rest = Vec::with_capacity(points.len());
    (0..points.len())
        .map(|i| {
            rest.clear();
            rest.extend(points.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| *p));
            total - hypervolume_2d(&rest, reference)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoVariant {
    Semo,
    Gsemo,
    Nsga2,
    SmsEmoa,
    Moead,
}

impl MoVariant {
    pub const ALL: [MoVariant; 5] =
        [MoVariant::Semo, MoVariant::Gsemo, MoVariant::Nsga2, MoVariant::SmsEmoa, MoVariant::Moead];

    pub fn as_str(self) -> &'static str {
        match self {
            MoVariant::Semo => "semo",
            MoVariant::Gsemo => "gsemo",
            MoVariant::Nsga2 => "nsga2",
            MoVariant::SmsEmoa => "sms_emoa",
            MoVariant::Moead => "moead",
        }
    }
}

impl fmt::Display for MoVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MoVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        let key = match key.as_str() {
            "nsga_ii" | "nsgaii" => "nsga2",
            "smsemoa" => "sms_emoa",
            "moea_d" | "moea/d" => "moead",
            other => other,
        };
        MoVariant::ALL.into_iter().find(|v| v.as_str() == key).ok_or_else(|| {
            let names: Vec<_> = MoVariant::ALL.iter().map(|v| v.as_str()).collect();
            Error::Parameter(format!("unknown algorithm `{s}` (expected one of {})", names.join(", ")))
        })
    }
}
