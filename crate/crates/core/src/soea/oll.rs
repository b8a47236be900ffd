use crate::bits::BitString;
use crate::error::Result;
use crate::random::{cross_biased, mutate_ell, RandomSource};
use crate::soea::{argmax_uar, Algorithm, SoConfig, Tracker};

#[derive(Clone, Debug)]
pub struct OllGa {
    pub x: BitString,
    pub f: f64,
    /// Real-valued population size, within `[1, n]`.
    pub lambda: f64,
    factor: f64,
}

impl OllGa {
    pub fn init(cfg: &SoConfig, tracker: &mut Tracker<'_>, rng: &mut RandomSource) -> Result<Option<Self>> {
        let x = BitString::random(tracker.n(), rng);
        Ok(tracker.eval(&x).map(|f| OllGa { x, f, lambda: 1.0, factor: cfg.f_oll }))
    }

    /// Offspring per phase: `λ` rounded to nearest, at least one.
    pub fn offspring(&self) -> usize {
        (self.lambda.round() as usize).max(1)
    }

    fn batch(
        &self,
        tracker: &mut Tracker<'_>,
        rng: &mut RandomSource,
        mut make: impl FnMut(&mut RandomSource) -> Result<BitString>,
    ) -> Result<Option<(BitString, f64)>> {
        let k = self.offspring();
        let mut xs = Vec::with_capacity(k);
        let mut fs = Vec::with_capacity(k);
        for _ in 0..k {
            let y = make(rng)?;
            let Some(fy) = tracker.eval(&y) else { return Ok(None) };
            xs.push(y);
            fs.push(fy);
        }
        let i = argmax_uar(&fs, rng);
        Ok(Some((xs.swap_remove(i), fs[i])))
    }
}

impl Algorithm for OllGa {
    fn step(&mut self, tracker: &mut Tracker<'_>, rng: &mut RandomSource) -> Result<()> {
        let n = tracker.n();
        let nf = n as f64;
        let ell = rng.sample_bin_gt0(n, (self.lambda / nf).min(1.0))?;
        let x = self.x.clone();
        let Some((mutant, _)) = self.batch(tracker, rng, |rng| mutate_ell(rng, &x, ell))? else {
            return Ok(());
        };
        let c = 1.0 / self.lambda;
        let Some((y, fy)) = self.batch(tracker, rng, |rng| cross_biased(rng, &x, &mutant, c))? else {
            return Ok(());
        };
        let grow = (self.lambda * self.factor.powf(0.25)).min(nf);
        if fy > self.f {
            self.x = y;
            self.f = fy;
            self.lambda = (self.lambda / self.factor).max(1.0);
        } else if fy == self.f {
            self.x = y;
            self.lambda = grow;
        } else {
            self.lambda = grow;
        }
        Ok(())
    }
}
