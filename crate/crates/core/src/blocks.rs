//! Block functions: maps from a substring to a non-negative integer value.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::{param, Result};

/// Largest epistasis group size accepted (the per-group maximum is found by
/// enumerating all `2^nu` inputs).
pub const MAX_NU: usize = 16;

fn default_nu() -> usize {
    3
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum BlockFunction {
    OneMax,
    LeadingOnes,
    Jump { k: usize },
    Epistasis {
        #[serde(default = "default_nu")]
        nu: usize,
    },
}

impl fmt::Display for BlockFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockFunction::OneMax => write!(f, "OneMax"),
            BlockFunction::LeadingOnes => write!(f, "LeadingOnes"),
            BlockFunction::Jump { k } => write!(f, "Jump_{k}"),
            BlockFunction::Epistasis { nu } => write!(f, "Epistasis({nu})"),
        }
    }
}

impl BlockFunction {
    pub const EPISTASIS: BlockFunction = BlockFunction::Epistasis { nu: 3 };

    /// Checks that the function is defined on blocks of `length` bits.
    pub fn validate(&self, length: usize) -> Result<()> {
        if length == 0 {
            return param("block length must be positive");
        }
        match *self {
            BlockFunction::Jump { k } if k == 0 || k >= length => {
                param(format!("Jump_{k} needs 1 <= k < block length {length}"))
            }
            BlockFunction::Epistasis { nu } if !(2..=MAX_NU).contains(&nu) => {
                param(format!("Epistasis needs 2 <= nu <= {MAX_NU}, got {nu}"))
            }
            _ => Ok(()),
        }
    }

    /// Value of the block. Assumes [`validate`](Self::validate) passed for `bits.len()`.
    pub fn value(&self, bits: &[bool]) -> u64 {
        let n = bits.len() as u64;
        match *self {
            BlockFunction::OneMax => ones(bits),
            BlockFunction::LeadingOnes => bits.iter().take_while(|&&b| b).count() as u64,
            BlockFunction::Jump { k } => jump(ones(bits), n, k as u64),
            BlockFunction::Epistasis { nu } => epistasis_ones(bits, nu),
        }
    }

    /// Largest value over all inputs of `length` bits.
    pub fn max_value(&self, length: usize) -> u64 {
        match *self {
            BlockFunction::OneMax | BlockFunction::LeadingOnes => length as u64,
            BlockFunction::Jump { k } => (length + k) as u64,
            BlockFunction::Epistasis { nu } => {
                let (full, rest) = (length / nu, length % nu);
                (full * group_optimum(nu).1 + rest) as u64
            }
        }
    }

    /// A maximiser of the block function on `length` bits.
    ///
    /// Epistasis: every full group takes the lexicographically smallest
    /// preimage of its best output, the untouched tail is all ones.
    pub fn optimum(&self, length: usize) -> BitString {
        match *self {
            BlockFunction::Epistasis { nu } => {
                let (group, _) = group_optimum(nu);
                let mut bits = Vec::with_capacity(length);
                for _ in 0..length / nu {
                    bits.extend(group.iter());
                }
                bits.resize(length, true);
                BitString::from(bits)
            }
            _ => BitString::ones(length),
        }
    }
}

/// Value of `bf` on `x`, validating the parameters against `x.len()`.
pub fn eval_block(bf: &BlockFunction, x: &BitString) -> Result<u64> {
    bf.validate(x.len())?;
    Ok(bf.value(x.as_slice()))
}

pub fn block_max(bf: &BlockFunction, length: usize) -> u64 {
    bf.max_value(length)
}

pub fn block_optimum(bf: &BlockFunction, length: usize) -> BitString {
    bf.optimum(length)
}

fn ones(bits: &[bool]) -> u64 {
    bits.iter().filter(|&&b| b).count() as u64
}

fn jump(ones: u64, n: u64, k: u64) -> u64 {
    if ones + k <= n || ones == n {
        ones + k
    } else {
        n - ones
    }
}

/// Epistasis group map: `o_1 = b_1 ⊕ … ⊕ b_ν`, `o_i = b_{i-1} ⊕ b_i`.
fn transform_group(group: &[bool], out: &mut Vec<bool>) {
    let parity = group.iter().fold(false, |acc, &b| acc ^ b);
    out.push(parity);
    out.extend(group.windows(2).map(|w| w[0] ^ w[1]));
}

fn group_ones(group: &[bool]) -> u64 {
    let parity = group.iter().fold(false, |acc, &b| acc ^ b);
    parity as u64 + group.windows(2).filter(|w| w[0] != w[1]).count() as u64
}

fn epistasis_ones(bits: &[bool], nu: usize) -> u64 {
    let chunks = bits.chunks_exact(nu);
    let tail = ones(chunks.remainder());
    chunks.map(group_ones).sum::<u64>() + tail
}

/// Lexicographically smallest group input with the most output ones, and
/// that number of ones.
pub(crate) fn group_optimum(nu: usize) -> (Vec<bool>, usize) {
    let mut best: Option<(Vec<bool>, usize)> = None;
    for index in 0..1u64 << nu {
        let group: Vec<bool> = BitString::from_index(index, nu).into();
        let value = group_ones(&group) as usize;
        if best.as_ref().is_none_or(|(_, v)| value > *v) {
            best = Some((group, value));
        }
    }
    best.expect("nu >= 1")
}

/// Applies the epistasis map to every full group of `nu` bits; a trailing
/// partial group is copied unchanged.
pub fn epistasis_transform(x: &BitString, nu: usize) -> BitString {
    if nu == 0 {
        return x.clone();
    }
    let bits = x.as_slice();
    let mut out = Vec::with_capacity(bits.len());
    let chunks = bits.chunks_exact(nu);
    let tail = chunks.remainder();
    for group in chunks {
        transform_group(group, &mut out);
    }
    out.extend_from_slice(tail);
    BitString::from(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bits(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn all_strings(n: usize) -> impl Iterator<Item = BitString> {
        (0..1u64 << n).map(move |i| BitString::from_index(i, n))
    }

    #[test]
    fn block_values() {
        assert_eq!(eval_block(&BlockFunction::OneMax, &bits("10110")).unwrap(), 3);
        assert_eq!(eval_block(&BlockFunction::LeadingOnes, &bits("110111")).unwrap(), 2);
        let jump3 = BlockFunction::Jump { k: 3 };
        let with_ones = |u: usize| -> BitString { (0..10).map(|i| i < u).collect() };
        assert_eq!(eval_block(&jump3, &with_ones(8)).unwrap(), 2);
        assert_eq!(eval_block(&jump3, &with_ones(10)).unwrap(), 13);
        assert_eq!(eval_block(&jump3, &with_ones(7)).unwrap(), 10);
        assert!(eval_block(&jump3, &bits("101")).is_err());
        assert!(eval_block(&BlockFunction::Epistasis { nu: 1 }, &bits("101")).is_err());
    }

    #[test]
    fn epistasis_examples() {
        assert_eq!(epistasis_transform(&bits("000"), 3), bits("000"));
        assert_eq!(epistasis_transform(&bits("100"), 3), bits("110"));
        assert_eq!(epistasis_transform(&bits("010 010"), 3), bits("111 111"));
        assert_eq!(epistasis_transform(&bits("010 01"), 3), bits("111 01"));
    }

    #[test]
    fn epistasis_nu3_bijective_and_spreading() {
        let images: Vec<BitString> = all_strings(3).map(|x| epistasis_transform(&x, 3)).collect();
        let mut sorted = images.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 8);
        let mut pairs = 0;
        for a in 0..8u64 {
            for bit in 0..3 {
                let b = a ^ (1 << bit);
                if a < b {
                    pairs += 1;
                    assert!(images[a as usize].hamming(&images[b as usize]) >= 2);
                }
            }
        }
        assert_eq!(pairs, 12);
    }

    #[test]
    fn maxima_and_optima() {
        assert_eq!(block_max(&BlockFunction::OneMax, 10), 10);
        assert_eq!(block_max(&BlockFunction::Jump { k: 3 }, 10), 13);
        assert_eq!(block_max(&BlockFunction::EPISTASIS, 10), 10);
        assert_eq!(block_optimum(&BlockFunction::OneMax, 4), bits("1111"));
        assert_eq!(block_optimum(&BlockFunction::EPISTASIS, 3), bits("010"));
        assert_eq!(block_optimum(&BlockFunction::EPISTASIS, 7), bits("010 010 1"));
    }

    #[test]
    fn optimum_attains_max_by_enumeration() {
        let families = [
            BlockFunction::OneMax,
            BlockFunction::LeadingOnes,
            BlockFunction::Jump { k: 2 },
            BlockFunction::Jump { k: 3 },
            BlockFunction::Epistasis { nu: 2 },
            BlockFunction::EPISTASIS,
            BlockFunction::Epistasis { nu: 4 },
            BlockFunction::Epistasis { nu: 5 },
        ];
        for bf in families {
            for len in 1..=20 {
                if bf.validate(len).is_err() {
                    continue;
                }
                let opt = bf.optimum(len);
                assert_eq!(bf.value(opt.as_slice()), bf.max_value(len), "{bf} at {len}");
                if len <= 12 {
                    let best = all_strings(len).map(|x| bf.value(x.as_slice())).max().unwrap();
                    assert_eq!(best, bf.max_value(len), "{bf} at {len}");
                }
            }
        }
    }

    #[test]
    fn even_group_sizes_can_lose_a_one() {
        // For nu ≡ 0 (mod 4) the all-ones output has no preimage.
        assert_eq!(block_max(&BlockFunction::Epistasis { nu: 4 }, 4), 3);
        assert_eq!(block_max(&BlockFunction::Epistasis { nu: 2 }, 2), 2);
    }

    #[test]
    fn jump_is_shifted_onemax_below_the_gap() {
        for n in 2..=12 {
            for k in 1..n {
                let bf = BlockFunction::Jump { k };
                for x in all_strings(n) {
                    let u = x.ones_count();
                    if u <= n - k {
                        assert_eq!(bf.value(x.as_slice()), u as u64 + k as u64);
                    }
                }
            }
        }
    }

    #[test]
    fn serde_shape() {
        let s = serde_json::to_string(&BlockFunction::Jump { k: 3 }).unwrap();
        assert_eq!(s, r#"{"family":"jump","k":3}"#);
        let e: BlockFunction = serde_json::from_str(r#"{"family":"epistasis"}"#).unwrap();
        assert_eq!(e, BlockFunction::EPISTASIS);
    }

    proptest! {
        #[test]
        fn transform_preserves_length(v in proptest::collection::vec(any::<bool>(), 0..50), nu in 2usize..6) {
            let x = BitString::from(v);
            let y = epistasis_transform(&x, nu);
            prop_assert_eq!(y.len(), x.len());
            prop_assert_eq!(y.ones_count() as u64, BlockFunction::Epistasis { nu }.value(x.as_slice()));
        }
    }
}
