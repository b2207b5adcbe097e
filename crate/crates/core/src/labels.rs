//! Label codes: the prefix-free modified label, the block pattern of the
//! fast schedule, and constant-weight relabeling by lexicographic unranking.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("labels start at 1")]
    Zero,
    #[error("label {label} is outside the label space 1..={space}")]
    OutOfSpace { label: u64, space: u64 },
    #[error("label space must contain at least two labels, got {0}")]
    SpaceTooSmall(u64),
    #[error("rank {rank} out of range: only {count} subsets of size {weight} in 1..={length}")]
    RankOutOfRange {
        rank: u64,
        count: u64,
        length: u32,
        weight: u32,
    },
    #[error("weight must satisfy 1 <= w <= L (w = {weight}, L = {space})")]
    InvalidWeight { weight: u32, space: u64 },
    #[error("not a bit string: `{0}`")]
    BadBits(String),
}

/// An agent label, `>= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Label(u64);

impl Label {
    pub fn new(value: u64) -> Result<Self, LabelError> {
        if value == 0 {
            Err(LabelError::Zero)
        } else {
            Ok(Label(value))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// Checks membership in the label space `{1, ..., space}`.
    pub fn within(self, space: u64) -> Result<Self, LabelError> {
        if self.0 <= space {
            Ok(self)
        } else {
            Err(LabelError::OutOfSpace {
                label: self.0,
                space,
            })
        }
    }
}

impl TryFrom<u64> for Label {
    type Error = LabelError;

    fn try_from(value: u64) -> Result<Self, Self::Error> {
        Label::new(value)
    }
}

impl From<Label> for u64 {
    fn from(l: Label) -> u64 {
        l.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A finite bit sequence, printed most significant (first) bit first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitString(bits)
    }

    /// Binary representation without leading zeros; `0` maps to the empty string.
    pub fn binary(value: u64) -> Self {
        let width = u64::BITS - value.leading_zeros();
        BitString((0..width).rev().map(|i| value >> i & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        other.0.starts_with(&self.0)
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

impl FromStr for BitString {
    type Err = LabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(LabelError::BadBits(s.to_string())),
            })
            .collect::<Result<_, _>>()
            .map(BitString)
    }
}

/// `M(l)`: every bit of the binary form of `l` doubled, followed by `01`.
/// Length `2z + 2` where `z = 1 + floor(log2 l)`. No code is a prefix of another.
pub fn modified_label(label: Label) -> BitString {
    let mut bits = Vec::new();
    for &b in BitString::binary(label.get()).bits() {
        bits.extend([b, b]);
    }
    bits.extend([false, true]);
    BitString(bits)
}

/// Block pattern of the fast schedule: a leading 1, then every bit of `code` twice.
pub fn doubled_schedule_bits(code: &BitString) -> BitString {
    let mut bits = Vec::with_capacity(2 * code.len() + 1);
    bits.push(true);
    for &b in code.bits() {
        bits.extend([b, b]);
    }
    BitString(bits)
}

/// `T = (1, S1, S1, ..., Sm, Sm)` for `S = M(l)`; length `2m + 1`.
pub fn fast_schedule_bits(label: Label) -> BitString {
    doubled_schedule_bits(&modified_label(label))
}

/// Binomial coefficient, saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Smallest positive `t` with `C(t, w) >= L`.
pub fn minimal_t(space: u64, weight: u32) -> Result<u32, LabelError> {
    if space < 2 {
        return Err(LabelError::SpaceTooSmall(space));
    }
    if weight == 0 || u64::from(weight) > space {
        return Err(LabelError::InvalidWeight { weight, space });
    }
    let mut t = weight;
    while binomial(u64::from(t), u64::from(weight)) < space {
        t += 1;
    }
    Ok(t)
}

/// A `t`-bit string with exactly `w` ones.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedCode {
    pub length: u32,
    pub weight: u32,
    pub bits: BitString,
}

impl fmt::Display for WeightedCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.bits.fmt(f)
    }
}

/// The `rank`-th smallest (1-based) `weight`-subset of `{1, ..., length}`,
/// ordered lexicographically by characteristic string.
///
/// Walks the positions left to right: strings with a 0 at the current
/// position come first, and there are `C(remaining, ones_left)` of them.
pub fn unrank_subset(rank: u64, length: u32, weight: u32) -> Result<WeightedCode, LabelError> {
    let count = binomial(u64::from(length), u64::from(weight));
    if rank == 0 || rank > count {
        return Err(LabelError::RankOutOfRange {
            rank,
            count,
            length,
            weight,
        });
    }
    let mut rest = rank - 1;
    let mut ones = u64::from(weight);
    let mut bits = Vec::with_capacity(length as usize);
    for pos in 0..u64::from(length) {
        let remaining = u64::from(length) - pos - 1;
        let with_zero = binomial(remaining, ones);
        if ones > 0 && rest >= with_zero {
            rest -= with_zero;
            ones -= 1;
            bits.push(true);
        } else {
            bits.push(false);
        }
    }
    Ok(WeightedCode {
        length,
        weight,
        bits: BitString(bits),
    })
}

/// Inverse of [`unrank_subset`].
pub fn rank_subset(code: &BitString) -> u64 {
    let length = code.len() as u64;
    let mut ones = code.weight() as u64;
    let mut rank = 1;
    for (pos, &b) in code.bits().iter().enumerate() {
        if b {
            rank += binomial(length - pos as u64 - 1, ones);
            ones -= 1;
        }
    }
    rank
}

/// New label of weight `w`: `unrank_subset(l, minimal_t(L, w), w)`.
pub fn relabel(label: Label, space: u64, weight: u32) -> Result<WeightedCode, LabelError> {
    label.within(space)?;
    let t = minimal_t(space, weight)?;
    unrank_subset(label.get(), t, weight)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(v: u64) -> Label {
        Label::new(v).unwrap()
    }

    #[test]
    fn modified_label_examples() {
        assert_eq!(modified_label(l(1)).to_string(), "1101");
        assert_eq!(modified_label(l(5)).to_string(), "11001101");
        let two = modified_label(l(2));
        assert_eq!(two.to_string(), "110001");
        assert!(!two.is_prefix_of(&modified_label(l(5))));
    }

    #[test]
    fn modified_label_length() {
        for v in 1..=100u64 {
            let z = 1 + v.ilog2() as usize;
            assert_eq!(modified_label(l(v)).len(), 2 * z + 2);
        }
    }

    #[test]
    fn prefix_free_small() {
        for x in 1..=16 {
            for y in 1..=16 {
                if x != y {
                    assert!(!modified_label(l(x)).is_prefix_of(&modified_label(l(y))));
                }
            }
        }
    }

    #[test]
    fn fast_bits_examples() {
        assert_eq!(fast_schedule_bits(l(1)).to_string(), "111110011");
        assert_eq!(fast_schedule_bits(l(5)).len(), 17);
        for v in 1..=32 {
            let t = fast_schedule_bits(l(v));
            assert!(t.bits()[0]);
            assert_eq!(t.len() % 2, 1);
        }
    }

    #[test]
    fn minimal_t_examples() {
        assert_eq!(minimal_t(8, 2).unwrap(), 5);
        assert_eq!(minimal_t(2, 1).unwrap(), 2);
        assert_eq!(minimal_t(32, 2).unwrap(), 9);
        assert!(minimal_t(1, 1).is_err());
        assert!(minimal_t(8, 0).is_err());
        assert!(minimal_t(8, 9).is_err());
    }

    #[test]
    fn minimal_t_within_root_bound() {
        // C(t, c) >= (t/c)^c, so t <= ceil(c * L^(1/c)).
        for c in 1..=4u32 {
            for space in u64::from(c).max(2)..=4096 {
                let t = minimal_t(space, c).unwrap() as f64;
                let bound = (c as f64 * (space as f64).powf(1.0 / c as f64) - 1e-9).ceil();
                assert!(t <= bound + 1e-9, "L={space} c={c}: t={t} bound={bound}");
            }
        }
    }

    #[test]
    fn unrank_examples() {
        assert_eq!(unrank_subset(1, 5, 2).unwrap().to_string(), "00011");
        assert_eq!(unrank_subset(10, 5, 2).unwrap().to_string(), "11000");
        let codes: std::collections::HashSet<_> =
            (1..=10).map(|r| unrank_subset(r, 5, 2).unwrap().bits).collect();
        assert_eq!(codes.len(), 10);
        assert!(matches!(
            unrank_subset(11, 5, 2),
            Err(LabelError::RankOutOfRange { .. })
        ));
        assert!(unrank_subset(0, 5, 2).is_err());
    }

    #[test]
    fn relabel_examples() {
        let codes: Vec<_> = (1..=8).map(|v| relabel(l(v), 8, 2).unwrap()).collect();
        assert_eq!(codes[0].to_string(), "00011");
        assert!(codes.iter().all(|c| c.bits.weight() == 2 && c.length == 5));
        let distinct: std::collections::HashSet<_> = codes.iter().map(|c| &c.bits).collect();
        assert_eq!(distinct.len(), 8);
        assert!(relabel(l(9), 8, 2).is_err());
    }

    #[test]
    fn rank_inverts_unrank() {
        for t in 1..=10u32 {
            for w in 0..=t {
                for r in 1..=binomial(t.into(), w.into()) {
                    assert_eq!(rank_subset(&unrank_subset(r, t, w).unwrap().bits), r);
                }
            }
        }
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(4, 5), 0);
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(60, 30), 118264581564861424);
        assert_eq!(binomial(200, 100), u64::MAX);
    }

    #[test]
    fn bitstring_parse() {
        assert_eq!("0110".parse::<BitString>().unwrap().to_string(), "0110");
        assert!("01a".parse::<BitString>().is_err());
        assert_eq!(BitString::binary(6).to_string(), "110");
    }
}
