use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A fixed-length binary solution vector.
///
/// Ordering is lexicographic with position 0 most significant, so the
/// enumeration order of [`BitString::from_index`] matches `Ord`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn zeros(n: usize) -> Self {
        BitString(vec![false; n])
    }

    pub fn ones(n: usize) -> Self {
        BitString(vec![true; n])
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        BitString((0..n).map(|_| rng.random::<bool>()).collect())
    }

    /// The `index`-th string of length `n` in lexicographic order.
    pub fn from_index(index: u64, n: usize) -> Self {
        debug_assert!(n <= 64);
        BitString((0..n).map(|i| (index >> (n - 1 - i)) & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        self.0[i] = bit;
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = !self.0[i];
    }

    pub fn ones_count(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn hamming(&self, other: &BitString) -> usize {
        debug_assert_eq!(self.len(), other.len());
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter().copied()
    }

    pub(crate) fn check_len(&self, expected: usize) -> Result<()> {
        if self.len() == expected {
            Ok(())
        } else {
            Err(Error::LengthMismatch { expected, actual: self.len() })
        }
    }
}

impl From<Vec<bool>> for BitString {
    fn from(bits: Vec<bool>) -> Self {
        BitString(bits)
    }
}

impl From<BitString> for Vec<bool> {
    fn from(bits: BitString) -> Self {
        bits.0
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        BitString(iter.into_iter().collect())
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Parses `0`/`1` characters; spaces and underscores are ignored so that
/// block boundaries can be written out (`"010 010 1"`).
impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !matches!(c, ' ' | '_'))
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parameter(format!("invalid bit character {other:?}"))),
            })
            .collect()
    }
}

/// Serialised as a `"0101"` string.
impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let x: BitString = "010 010_1".parse().unwrap();
        assert_eq!(x.len(), 7);
        assert_eq!(x.to_string(), "0100101");
        assert_eq!(x.ones_count(), 3);
        assert!("01a".parse::<BitString>().is_err());
    }

    #[test]
    fn index_order_is_lexicographic() {
        let all: Vec<_> = (0..16).map(|i| BitString::from_index(i, 4)).collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all[5].to_string(), "0101");
    }

    #[test]
    fn hamming_distance() {
        let a: BitString = "1100".parse().unwrap();
        let b: BitString = "1010".parse().unwrap();
        assert_eq!(a.hamming(&b), 2);
    }
}
