use std::collections::BTreeSet;

use serde::Serialize;

use crate::bits::BitString;
use crate::blocks::{group_optimum, BlockFunction};
use crate::error::{Error, Result};

/// Largest block length [`block_profile`] will enumerate.
pub const MAX_PROFILE_BITS: usize = 20;

/// What a [`BlockProfile`] is keyed by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileKey {
    /// Hamming distance to the block optimum.
    Distance,
    /// Number of one bits.
    Ones,
}

/// Exact set of attainable block values for each key `0..=length`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockProfile {
    pub key: ProfileKey,
    pub length: usize,
    pub sets: Vec<BTreeSet<u64>>,
}

impl BlockProfile {
    pub fn values(&self, key: usize) -> Option<&BTreeSet<u64>> {
        self.sets.get(key)
    }

    /// Every value the block can take.
    pub fn all_values(&self) -> BTreeSet<u64> {
        self.sets.iter().flatten().copied().collect()
    }
}

/// Builds the profile by enumerating all `2^length` substrings.
pub fn block_profile(bf: &BlockFunction, length: usize, key: ProfileKey) -> Result<BlockProfile> {
    bf.validate(length)?;
    if length > MAX_PROFILE_BITS {
        return Err(Error::TooLarge(format!(
            "block profile of length {length} (limit {MAX_PROFILE_BITS})"
        )));
    }
    let optimum = bf.optimum(length);
    let mut sets = vec![BTreeSet::new(); length + 1];
    for index in 0..1u64 << length {
        let x = BitString::from_index(index, length);
        let k = match key {
            ProfileKey::Distance => x.hamming(&optimum),
            ProfileKey::Ones => x.ones_count(),
        };
        sets[k].insert(bf.value(x.as_slice()));
    }
    Ok(BlockProfile { key, length, sets })
}

/// Same result as [`block_profile`] without the length cap, derived from the
/// structure of each family.
pub fn structural_profile(bf: &BlockFunction, length: usize, key: ProfileKey) -> Result<BlockProfile> {
    bf.validate(length)?;
    let l = length;
    let ones_of = |k: usize| match key {
        ProfileKey::Distance => l - k,
        ProfileKey::Ones => k,
    };
    let sets = match *bf {
        BlockFunction::OneMax => (0..=l).map(|k| BTreeSet::from([ones_of(k) as u64])).collect(),
        BlockFunction::Jump { .. } => (0..=l)
            .map(|k| {
                let mut x = vec![false; l];
                x[..ones_of(k)].fill(true);
                BTreeSet::from([bf.value(&x)])
            })
            .collect(),
        BlockFunction::LeadingOnes => (0..=l)
            .map(|k| {
                let u = ones_of(k);
                if u == l {
                    BTreeSet::from([l as u64])
                } else {
                    // A zero may sit anywhere from position 0 to position u.
                    (0..=u as u64).collect()
                }
            })
            .collect(),
        BlockFunction::Epistasis { nu } => epistasis_sets(nu, l, key),
    };
    Ok(BlockProfile { key, length, sets })
}

/// Dynamic programme over groups on pairs (key so far, output ones so far).
fn epistasis_sets(nu: usize, l: usize, key: ProfileKey) -> Vec<BTreeSet<u64>> {
    let groups = l / nu;
    let tail = l % nu;
    let (target, _) = group_optimum(nu);
    let mut group_pairs = BTreeSet::new();
    for index in 0..1u64 << nu {
        let g: Vec<bool> = BitString::from_index(index, nu).into();
        let k = match key {
            ProfileKey::Distance => g.iter().zip(&target).filter(|(a, b)| a != b).count(),
            ProfileKey::Ones => g.iter().filter(|&&b| b).count(),
        };
        let out = BlockFunction::Epistasis { nu }.value(&g) as usize;
        group_pairs.insert((k, out));
    }
    // The tail is the identity and its optimum is all ones.
    let mut state: BTreeSet<(usize, usize)> = (0..=tail)
        .map(|k| match key {
            ProfileKey::Distance => (k, tail - k),
            ProfileKey::Ones => (k, k),
        })
        .collect();
    for _ in 0..groups {
        state = state
            .iter()
            .flat_map(|&(k, o)| group_pairs.iter().map(move |&(gk, go)| (k + gk, o + go)))
            .collect();
    }
    let mut sets = vec![BTreeSet::new(); l + 1];
    for (k, out) in state {
        sets[k].insert(out as u64);
    }
    sets
}
