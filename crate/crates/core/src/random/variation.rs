use rand::seq::index;

use crate::bits::BitString;
use crate::error::{param, Result};
use crate::random::RandomSource;

/// Copy of `x` with exactly `ell` distinct, uniformly chosen positions flipped.
pub fn mutate_ell(rng: &mut RandomSource, x: &BitString, ell: usize) -> Result<BitString> {
    if ell > x.len() {
        return param(format!("cannot flip {ell} bits of a {}-bit string", x.len()));
    }
    let mut y = x.clone();
    for i in index::sample(rng, x.len(), ell) {
        y.flip(i);
    }
    Ok(y)
}

/// Biased crossover: copies `donor` into `ℓ_c ~ Bin>0(n, c)` distinct
/// positions of a copy of `x`.
pub fn cross_biased(rng: &mut RandomSource, x: &BitString, donor: &BitString, c: f64) -> Result<BitString> {
    if x.len() != donor.len() {
        return param(format!("crossover parents differ in length ({} vs {})", x.len(), donor.len()));
    }
    let mut y = x.clone();
    if x.is_empty() {
        return Ok(y);
    }
    let ell = rng.sample_bin_gt0(x.len(), c)?;
    for i in index::sample(rng, x.len(), ell) {
        y.set(i, donor.get(i));
    }
    Ok(y)
}

pub fn uniform_crossover(rng: &mut RandomSource, x: &BitString, y: &BitString) -> Result<BitString> {
    if x.len() != y.len() {
        return param(format!("crossover parents differ in length ({} vs {})", x.len(), y.len()));
    }
    Ok(x.iter()
        .zip(y.iter())
        .map(|(a, b)| if rng.chance(0.5) { a } else { b })
        .collect())
}

/// Standard bit mutation with independent per-bit flip probability `p`
/// (zero flips allowed).
pub(crate) fn bitwise_mutation(rng: &mut RandomSource, x: &mut BitString, p: f64) {
    for i in 0..x.len() {
        if rng.chance(p) {
            x.flip(i);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bits(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn mutate_examples() {
        let mut rng = RandomSource::new(1);
        assert_eq!(mutate_ell(&mut rng, &bits("00000"), 5).unwrap(), bits("11111"));
        assert_eq!(mutate_ell(&mut rng, &bits("10110"), 0).unwrap(), bits("10110"));
        assert!(mutate_ell(&mut rng, &bits("10110"), 6).is_err());
    }

    #[test]
    fn cross_examples() {
        let mut rng = RandomSource::new(2);
        for c in [0.1, 0.5, 1.0] {
            assert_eq!(cross_biased(&mut rng, &bits("0000"), &bits("0000"), c).unwrap(), bits("0000"));
        }
        assert_eq!(cross_biased(&mut rng, &bits("0000"), &bits("1111"), 1.0).unwrap(), bits("1111"));
        assert!(cross_biased(&mut rng, &bits("000"), &bits("1111"), 0.5).is_err());
        assert!(uniform_crossover(&mut rng, &bits("000"), &bits("1111")).is_err());
    }

    #[test]
    fn uniform_crossover_cell_probability() {
        let mut rng = RandomSource::new(3);
        let (x, y) = (bits("00"), bits("11"));
        let draws = 1_000_000;
        let hits = (0..draws)
            .filter(|_| uniform_crossover(&mut rng, &x, &y).unwrap() == bits("01"))
            .count();
        assert!((hits as f64 / draws as f64 - 0.25).abs() < 0.01);
    }

    fn arb_pair() -> impl Strategy<Value = (Vec<bool>, Vec<bool>)> {
        (1usize..64).prop_flat_map(|n| (proptest::collection::vec(any::<bool>(), n), proptest::collection::vec(any::<bool>(), n)))
    }

    proptest! {
        #[test]
        fn mutation_flips_exactly_ell(bits in proptest::collection::vec(any::<bool>(), 1..64), seed: u64, frac in 0.0f64..=1.0) {
            let x = BitString::from(bits);
            let ell = (frac * x.len() as f64).round() as usize;
            let mut rng = RandomSource::new(seed);
            let y = mutate_ell(&mut rng, &x, ell).unwrap();
            prop_assert_eq!(x.hamming(&y), ell);
        }

        #[test]
        fn crossovers_take_parent_bits((a, b) in arb_pair(), seed: u64, c in 0.01f64..=1.0) {
            let (x, d) = (BitString::from(a), BitString::from(b));
            let mut rng = RandomSource::new(seed);
            let y = cross_biased(&mut rng, &x, &d, c).unwrap();
            let z = uniform_crossover(&mut rng, &x, &d).unwrap();
            for i in 0..x.len() {
                prop_assert!(y.get(i) == x.get(i) || y.get(i) == d.get(i));
                prop_assert!(z.get(i) == x.get(i) || z.get(i) == d.get(i));
            }
            prop_assert!(uniform_crossover(&mut rng, &x, &x).unwrap() == x.clone());
        }
    }
}
