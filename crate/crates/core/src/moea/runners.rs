use crate::bits::BitString;
use crate::error::{param, Result};
use crate::moea::{
    crowding_distance, hv_contributions, non_dominated_sort, MoVariant, ObjectivePair, ParetoArchive,
};
use crate::problems::BiProblem;
use crate::random::{bitwise_mutation, mutate_ell, uniform_crossover, RandomSource};

const CROSSOVER_RATE: f64 = 0.9;

/// Reference point for hypervolume-based survival; one unit below the
/// origin so solutions with a zero objective still have a contribution.
pub const SELECTION_REFERENCE: ObjectivePair = ObjectivePair::new(-1.0, -1.0);

struct Counter<'a> {
    problem: &'a BiProblem,
    budget: u64,
    evals: u64,
    archive: ParetoArchive,
    scratch: Vec<u64>,
}

impl<'a> Counter<'a> {
    fn new(problem: &'a BiProblem, budget: u64) -> Result<Self> {
        if budget == 0 {
            return param("budget must be at least 1");
        }
        Ok(Counter { problem, budget, evals: 0, archive: ParetoArchive::new(), scratch: Vec::new() })
    }

    fn eval(&mut self, x: &BitString) -> Option<ObjectivePair> {
        if self.evals >= self.budget {
            return None;
        }
        self.evals += 1;
        let y = ObjectivePair::from(self.problem.objectives_with(x.as_slice(), &mut self.scratch));
        self.archive.offer(x, y, self.evals);
        Some(y)
    }

    fn done(&self) -> bool {
        self.evals >= self.budget
    }

    fn finish(mut self) -> ParetoArchive {
        self.archive.set_evaluations(self.evals);
        self.archive
    }
}

fn semo_like(
    problem: &BiProblem,
    budget: u64,
    rng: &mut RandomSource,
    mut flips: impl FnMut(&mut RandomSource) -> Result<usize>,
) -> Result<ParetoArchive> {
    let mut counter = Counter::new(problem, budget)?;
    let x = BitString::random(problem.n(), rng);
    counter.eval(&x);
    while !counter.done() {
        let entries = counter.archive.entries();
        let parent = entries[rng.index(entries.len())].0.clone();
        let ell = flips(rng)?;
        let child = mutate_ell(rng, &parent, ell)?;
        counter.eval(&child);
    }
    Ok(counter.finish())
}

/// SEMO: the population is the archive; each child flips one uniform bit.
pub fn run_semo(problem: &BiProblem, budget: u64, rng: &mut RandomSource) -> Result<ParetoArchive> {
    semo_like(problem, budget, rng, |_| Ok(1))
}

/// Global SEMO: as SEMO with `ℓ ~ Bin>0(n, 1/n)` flips.
pub fn run_gsemo(problem: &BiProblem, budget: u64, rng: &mut RandomSource) -> Result<ParetoArchive> {
    let n = problem.n();
    semo_like(problem, budget, rng, |rng| rng.sample_bin_gt0(n, 1.0 / n as f64))
}

fn shuffled(len: usize, rng: &mut RandomSource) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..len).collect();
    for i in (1..len).rev() {
        idx.swap(i, rng.index(i + 1));
    }
    idx
}

/// Fills `k` survivors front by front and truncates the critical front by
/// `score` (largest first, ties uniformly at random).
fn survivors(
    points: &[ObjectivePair],
    k: usize,
    rng: &mut RandomSource,
    score: impl Fn(&[ObjectivePair]) -> Vec<f64>,
) -> Vec<usize> {
    let mut keep = Vec::with_capacity(k);
    for front in non_dominated_sort(points) {
        let room = k - keep.len();
        if room == 0 {
            break;
        }
        if front.len() <= room {
            keep.extend(front);
            continue;
        }
        let ys: Vec<ObjectivePair> = front.iter().map(|&i| points[i]).collect();
        let scores = score(&ys);
        let mut order = shuffled(front.len(), rng);
        order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
        keep.extend(order[..room].iter().map(|&o| front[o]));
    }
    keep.sort_unstable();
    keep
}

/// NSGA-II environmental selection of `k` indices.
pub fn survivors_by_crowding(points: &[ObjectivePair], k: usize, rng: &mut RandomSource) -> Vec<usize> {
    survivors(points, k, rng, crowding_distance)
}

/// SMS-EMOA environmental selection of `k` indices.
pub fn survivors_by_contribution(points: &[ObjectivePair], k: usize, rng: &mut RandomSource) -> Vec<usize> {
    survivors(points, k, rng, |ys| hv_contributions(ys, SELECTION_REFERENCE))
}

fn rank_and_crowding(points: &[ObjectivePair]) -> (Vec<usize>, Vec<f64>) {
    let mut rank = vec![0; points.len()];
    let mut crowd = vec![0.0; points.len()];
    for (r, front) in non_dominated_sort(points).into_iter().enumerate() {
        let ys: Vec<ObjectivePair> = front.iter().map(|&i| points[i]).collect();
        for (&i, d) in front.iter().zip(crowding_distance(&ys)) {
            rank[i] = r;
            crowd[i] = d;
        }
    }
    (rank, crowd)
}

fn tournament(rank: &[usize], crowd: &[f64], rng: &mut RandomSource) -> usize {
    let a = rng.index(rank.len());
    let b = rng.index(rank.len());
    if rank[a] != rank[b] {
        return if rank[a] < rank[b] { a } else { b };
    }
    if crowd[a] != crowd[b] {
        return if crowd[a] > crowd[b] { a } else { b };
    }
    if rng.chance(0.5) {
        a
    } else {
        b
    }
}

fn check_population(pop_size: usize) -> Result<()> {
    if pop_size < 2 {
        return param(format!("population size must be at least 2, got {pop_size}"));
    }
    Ok(())
}

fn generational(
    problem: &BiProblem,
    pop_size: usize,
    budget: u64,
    rng: &mut RandomSource,
    select: fn(&[ObjectivePair], usize, &mut RandomSource) -> Vec<usize>,
) -> Result<ParetoArchive> {
    check_population(pop_size)?;
    let mut counter = Counter::new(problem, budget)?;
    let n = problem.n();
    let mut pop: Vec<(BitString, ObjectivePair)> = Vec::with_capacity(2 * pop_size);
    for _ in 0..pop_size {
        let x = BitString::random(n, rng);
        let Some(y) = counter.eval(&x) else { break };
        pop.push((x, y));
    }
    while !counter.done() {
        let ys: Vec<ObjectivePair> = pop.iter().map(|p| p.1).collect();
        let (rank, crowd) = rank_and_crowding(&ys);
        let mut offspring = Vec::with_capacity(pop_size);
        for _ in 0..pop_size {
            let a = tournament(&rank, &crowd, rng);
            let b = tournament(&rank, &crowd, rng);
            let mut child = if rng.chance(CROSSOVER_RATE) {
                uniform_crossover(rng, &pop[a].0, &pop[b].0)?
            } else {
                pop[a].0.clone()
            };
            bitwise_mutation(rng, &mut child, 1.0 / n as f64);
            let Some(y) = counter.eval(&child) else { break };
            offspring.push((child, y));
        }
        if offspring.len() < pop_size {
            break;
        }
        pop.extend(offspring);
        let ys: Vec<ObjectivePair> = pop.iter().map(|p| p.1).collect();
        let keep = select(&ys, pop_size, rng);
        let mut merged: Vec<Option<(BitString, ObjectivePair)>> = pop.into_iter().map(Some).collect();
        pop = keep.into_iter().map(|i| merged[i].take().expect("distinct")).collect();
    }
    Ok(counter.finish())
}

/// NSGA-II with binary tournament, uniform crossover and bit-flip mutation.
pub fn run_nsga2(problem: &BiProblem, pop_size: usize, budget: u64, rng: &mut RandomSource) -> Result<ParetoArchive> {
    generational(problem, pop_size, budget, rng, survivors_by_crowding)
}

/// Generational SMS-EMOA: NSGA-II's loop with hypervolume-contribution
/// truncation of the critical front.
pub fn run_smsemoa(problem: &BiProblem, pop_size: usize, budget: u64, rng: &mut RandomSource) -> Result<ParetoArchive> {
    generational(problem, pop_size, budget, rng, survivors_by_contribution)
}

/// `μ` weight vectors evenly spaced on the 2-simplex.
pub fn weight_vectors(mu: usize) -> Vec<(f64, f64)> {
    (0..mu)
        .map(|i| {
            let t = i as f64 / (mu - 1) as f64;
            (t, 1.0 - t)
        })
        .collect()
}

/// Tchebycheff distance to the ideal point `z` (to be minimised).
pub fn tchebycheff(weight: (f64, f64), z: ObjectivePair, y: ObjectivePair) -> f64 {
    (weight.0 * (z.y1 - y.y1)).max(weight.1 * (z.y2 - y.y2))
}

fn neighbourhoods(weights: &[(f64, f64)]) -> Vec<Vec<usize>> {
    let t = 2.max(weights.len().div_ceil(10));
    weights
        .iter()
        .map(|&(a, b)| {
            let mut idx: Vec<usize> = (0..weights.len()).collect();
            idx.sort_by(|&i, &j| {
                let di = (weights[i].0 - a).powi(2) + (weights[i].1 - b).powi(2);
                let dj = (weights[j].0 - a).powi(2) + (weights[j].1 - b).powi(2);
                di.total_cmp(&dj).then(i.cmp(&j))
            });
            idx.truncate(t);
            idx
        })
        .collect()
}

/// MOEA/D with Tchebycheff subproblems and mutation-only reproduction. A
/// child of subproblem `i` replaces each neighbour `y` with
/// `h_i(child) <= h_i(y)`.
pub fn run_moead(problem: &BiProblem, pop_size: usize, budget: u64, rng: &mut RandomSource) -> Result<ParetoArchive> {
    check_population(pop_size)?;
    let mut counter = Counter::new(problem, budget)?;
    let n = problem.n();
    let weights = weight_vectors(pop_size);
    let hoods = neighbourhoods(&weights);
    let mut xs = Vec::with_capacity(pop_size);
    let mut ys = Vec::with_capacity(pop_size);
    let mut z = ObjectivePair::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for _ in 0..pop_size {
        let x = BitString::random(n, rng);
        let Some(y) = counter.eval(&x) else { return Ok(counter.finish()) };
        z = ObjectivePair::new(z.y1.max(y.y1), z.y2.max(y.y2));
        xs.push(x);
        ys.push(y);
    }
    while !counter.done() {
        for i in 0..pop_size {
            let mut child = xs[i].clone();
            bitwise_mutation(rng, &mut child, 1.0 / n as f64);
            let Some(y) = counter.eval(&child) else { break };
            z = ObjectivePair::new(z.y1.max(y.y1), z.y2.max(y.y2));
            let h = tchebycheff(weights[i], z, y);
            for &j in &hoods[i] {
                if h <= tchebycheff(weights[i], z, ys[j]) {
                    xs[j] = child.clone();
                    ys[j] = y;
                }
            }
        }
    }
    Ok(counter.finish())
}

/// Runs `variant` with population size `pop_size` (default `n`) and budget
/// (default `n^3`). SEMO-type algorithms ignore `pop_size`.
pub fn run_mo(
    variant: MoVariant,
    problem: &BiProblem,
    pop_size: Option<usize>,
    budget: Option<u64>,
    rng: &mut RandomSource,
) -> Result<ParetoArchive> {
    let n = problem.n();
    let pop = pop_size.unwrap_or(n);
    let budget = budget.unwrap_or((n as u64).pow(3));
    match variant {
        MoVariant::Semo => run_semo(problem, budget, rng),
        MoVariant::Gsemo => run_gsemo(problem, budget, rng),
        MoVariant::Nsga2 => run_nsga2(problem, pop, budget, rng),
        MoVariant::SmsEmoa => run_smsemoa(problem, pop, budget, rng),
        MoVariant::Moead => run_moead(problem, pop, budget, rng),
    }
}
