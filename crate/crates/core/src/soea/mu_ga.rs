use crate::bits::BitString;
use crate::error::Result;
use crate::random::{bitwise_mutation, uniform_crossover, RandomSource};
use crate::soea::{Algorithm, SoConfig, Tracker};

#[derive(Clone, Debug)]
pub struct MuGa {
    pub population: Vec<(BitString, f64)>,
    p: f64,
    p_c: f64,
    diversity: bool,
}

impl MuGa {
    pub fn init(cfg: &SoConfig, tracker: &mut Tracker<'_>, rng: &mut RandomSource) -> Result<Option<Self>> {
        let n = tracker.n();
        let mut population = Vec::with_capacity(cfg.mu + 1);
        for _ in 0..cfg.mu {
            let x = BitString::random(n, rng);
            let Some(f) = tracker.eval(&x) else { return Ok(None) };
            population.push((x, f));
        }
        Ok(Some(MuGa { population, p: cfg.rate(n), p_c: cfg.p_c, diversity: cfg.diversity }))
    }

    /// A pair of members at maximum Hamming distance, chosen uniformly among
    /// all such pairs.
    pub fn farthest_pair(&self, rng: &mut RandomSource) -> (usize, usize) {
        let pop = &self.population;
        let mut best = 0;
        let mut pairs = Vec::new();
        for i in 0..pop.len() {
            for j in i + 1..pop.len() {
                let d = pop[i].0.hamming(&pop[j].0);
                if d > best || pairs.is_empty() {
                    best = d;
                    pairs.clear();
                }
                if d == best {
                    pairs.push((i, j));
                }
            }
        }
        pairs[rng.index(pairs.len())]
    }

    /// Index of the member to delete from the `μ+1` population.
    pub fn victim(&self, rng: &mut RandomSource) -> usize {
        let protected = if self.diversity { Some(self.farthest_pair(rng)) } else { None };
        let candidates: Vec<usize> = (0..self.population.len())
            .filter(|&i| protected.is_none_or(|(a, b)| i != a && i != b))
            .collect();
        let worst = candidates
            .iter()
            .map(|&i| self.population[i].1)
            .fold(f64::INFINITY, f64::min);
        let ties: Vec<usize> = candidates
            .into_iter()
            .filter(|&i| self.population[i].1 == worst)
            .collect();
        ties[rng.index(ties.len())]
    }
}

impl Algorithm for MuGa {
    fn step(&mut self, tracker: &mut Tracker<'_>, rng: &mut RandomSource) -> Result<()> {
        let mu = self.population.len();
        let i = rng.index(mu);
        let mut child = if rng.chance(self.p_c) {
            // Uniform over the other members.
            let mut j = rng.index(mu - 1);
            if j >= i {
                j += 1;
            }
            uniform_crossover(rng, &self.population[i].0, &self.population[j].0)?
        } else {
            self.population[i].0.clone()
        };
        bitwise_mutation(rng, &mut child, self.p);
        let Some(f) = tracker.eval(&child) else { return Ok(()) };
        self.population.push((child, f));
        let victim = self.victim(rng);
        self.population.swap_remove(victim);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{make_suite_instance, Problem, SuiteId};
    use crate::soea::{run_mu_ga, Variant};

    fn max_distance(pop: &[(BitString, f64)]) -> usize {
        let mut best = 0;
        for i in 0..pop.len() {
            for j in i + 1..pop.len() {
                best = best.max(pop[i].0.hamming(&pop[j].0));
            }
        }
        best
    }

    #[test]
    fn diversity_keeps_farthest_pair() {
        let mut rng = RandomSource::new(5);
        for trial in 0..500 {
            let size = 3 + trial % 8;
            let n = 1 + trial % 12;
            let population: Vec<(BitString, f64)> = (0..size)
                .map(|_| (BitString::random(n, &mut rng), rng.index(3) as f64))
                .collect();
            let mut ga = MuGa { population, p: 0.1, p_c: 0.5, diversity: true };
            let before = max_distance(&ga.population);
            let victim = ga.victim(&mut rng);
            ga.population.swap_remove(victim);
            assert_eq!(max_distance(&ga.population), before);
        }
    }

    #[test]
    fn victim_respects_protection() {
        let mut rng = RandomSource::new(0);
        let ga = MuGa {
            population: vec![
                ("0000".parse().unwrap(), 0.0),
                ("1111".parse().unwrap(), 4.0),
                ("0011".parse().unwrap(), 2.0),
            ],
            p: 0.25,
            p_c: 0.5,
            diversity: true,
        };
        // 0000 is worst but protected together with 1111.
        for _ in 0..20 {
            assert_eq!(ga.victim(&mut rng), 2);
        }
        let plain = MuGa { diversity: false, ..ga };
        for _ in 0..20 {
            assert_eq!(plain.victim(&mut rng), 0);
        }
    }

    #[test]
    fn solves_small_onemax() {
        let p = Problem::new(make_suite_instance(SuiteId::F1, 10, 1).unwrap()).unwrap();
        let cfg = SoConfig::new(Variant::MuGa);
        let root = RandomSource::new(77);
        for run in 0..100 {
            let r = run_mu_ga(&cfg, &p, 100_000, Some(10.0), &mut root.derive(run)).unwrap();
            assert!(r.hit_target);
        }
    }
}
