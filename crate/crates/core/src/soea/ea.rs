use crate::bits::BitString;
use crate::error::Result;
use crate::random::{mutate_ell, PowerLaw, RandomSource};
use crate::soea::{argmax_uar, Algorithm, SoConfig, Tracker};

/// Uniform initial solution; `None` if the budget refuses even that.
fn initial(tracker: &mut Tracker<'_>, rng: &mut RandomSource) -> Option<(BitString, f64)> {
    let x = BitString::random(tracker.n(), rng);
    let f = tracker.eval(&x)?;
    Some((x, f))
}

#[derive(Clone, Debug)]
pub struct Ea {
    pub x: BitString,
    pub f: f64,
    lambda: usize,
    p: f64,
}

impl Ea {
    pub fn init(cfg: &SoConfig, tracker: &mut Tracker<'_>, rng: &mut RandomSource) -> Result<Option<Self>> {
        let p = cfg.rate(tracker.n());
        Ok(initial(tracker, rng).map(|(x, f)| Ea { x, f, lambda: cfg.lambda, p }))
    }
}

impl Algorithm for Ea {
    fn step(&mut self, tracker: &mut Tracker<'_>, rng: &mut RandomSource) -> Result<()> {
        let n = tracker.n();
        let mut xs = vec![self.x.clone()];
        let mut fs = vec![self.f];
        for _ in 0..self.lambda {
            let ell = rng.sample_bin_gt0(n, self.p)?;
            let y = mutate_ell(rng, &self.x, ell)?;
            let Some(fy) = tracker.eval(&y) else { return Ok(()) };
            xs.push(y);
            fs.push(fy);
        }
        let i = argmax_uar(&fs, rng);
        self.f = fs[i];
        self.x = xs.swap_remove(i);
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Fga {
    pub x: BitString,
    pub f: f64,
    law: PowerLaw,
}

impl Fga {
    pub fn init(cfg: &SoConfig, tracker: &mut Tracker<'_>, rng: &mut RandomSource) -> Result<Option<Self>> {
        let law = PowerLaw::new(tracker.n() / 2, cfg.beta)?;
        Ok(initial(tracker, rng).map(|(x, f)| Fga { x, f, law }))
    }
}

impl Algorithm for Fga {
    fn step(&mut self, tracker: &mut Tracker<'_>, rng: &mut RandomSource) -> Result<()> {
        let ell = self.law.sample(rng);
        let y = mutate_ell(rng, &self.x, ell)?;
        if let Some(fy) = tracker.eval(&y) {
            if fy >= self.f {
                self.x = y;
                self.f = fy;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct TwoRate {
    pub x: BitString,
    pub f: f64,
    /// Current rate parameter; always within `[2, max(n/4, 2)]`.
    pub r: f64,
    lambda: usize,
}

impl TwoRate {
    pub fn init(cfg: &SoConfig, tracker: &mut Tracker<'_>, rng: &mut RandomSource) -> Result<Option<Self>> {
        Ok(initial(tracker, rng).map(|(x, f)| TwoRate { x, f, r: 2.0, lambda: cfg.lambda }))
    }

    fn upper(n: usize) -> f64 {
        (n as f64 / 4.0).max(2.0)
    }
}

impl Algorithm for TwoRate {
    fn step(&mut self, tracker: &mut Tracker<'_>, rng: &mut RandomSource) -> Result<()> {
        let n = tracker.n();
        let nf = n as f64;
        let half = self.lambda / 2;
        let mut xs = Vec::with_capacity(self.lambda);
        let mut fs = Vec::with_capacity(self.lambda);
        for i in 0..self.lambda {
            let rate = if i < half { self.r / (2.0 * nf) } else { 2.0 * self.r / nf };
            let ell = rng.sample_bin_gt0(n, rate.min(1.0))?;
            let y = mutate_ell(rng, &self.x, ell)?;
            let Some(fy) = tracker.eval(&y) else { return Ok(()) };
            xs.push(y);
            fs.push(fy);
        }
        let w = argmax_uar(&fs, rng);
        if fs[w] >= self.f {
            self.f = fs[w];
            self.x = xs.swap_remove(w);
        }
        let s = if w < half { 0.75 } else { 0.25 };
        self.r = if rng.chance(s) {
            (self.r / 2.0).max(2.0)
        } else {
            (2.0 * self.r).min(Self::upper(n))
        };
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct VarEa {
    pub x: BitString,
    pub f: f64,
    pub r: usize,
    pub c: u32,
    lambda: usize,
    factor: f64,
    /// Evaluations since the last strict improvement or reset of `c`.
    stagnant: u64,
}

impl VarEa {
    pub fn init(cfg: &SoConfig, tracker: &mut Tracker<'_>, rng: &mut RandomSource) -> Result<Option<Self>> {
        let r = 2.min(tracker.n());
        Ok(initial(tracker, rng).map(|(x, f)| VarEa {
            x,
            f,
            r,
            c: 0,
            lambda: cfg.lambda,
            factor: cfg.f_var,
            stagnant: 0,
        }))
    }

    pub fn variance(&self, n: usize) -> f64 {
        let r = self.r as f64;
        self.factor.powi(self.c as i32) * r * (1.0 - r / n as f64)
    }
}

impl Algorithm for VarEa {
    fn step(&mut self, tracker: &mut Tracker<'_>, rng: &mut RandomSource) -> Result<()> {
        let n = tracker.n();
        let variance = self.variance(n);
        let mut best: Option<(BitString, f64, usize)> = None;
        for _ in 0..self.lambda {
            let ell = rng.sample_trunc_normal_gt0(self.r as f64, variance, n)?;
            let y = mutate_ell(rng, &self.x, ell)?;
            let Some(fy) = tracker.eval(&y) else { return Ok(()) };
            // Strict comparison keeps the smallest index among the maxima.
            if best.as_ref().is_none_or(|b| fy > b.1) {
                best = Some((y, fy, ell));
            }
        }
        let (y, fy, ell) = best.expect("lambda >= 1");
        if ell == self.r {
            self.c += 1;
        } else {
            self.c = 0;
        }
        self.r = ell;
        if fy > self.f {
            self.stagnant = 0;
        } else {
            self.stagnant += self.lambda as u64;
        }
        if fy >= self.f {
            self.x = y;
            self.f = fy;
        }
        if self.stagnant >= n as u64 {
            self.c = 0;
            self.stagnant = 0;
        }
        Ok(())
    }
}
