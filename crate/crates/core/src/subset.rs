//! Finite subsets of a ground set `{0, .., ℓ-1}` with `ℓ ≤ 64`, stored as a
//! single machine word.
//!
//! The derived `Ord` on [`Subset`] compares the bit masks numerically. Among
//! subsets of one fixed cardinality this is exactly the colexicographic order,
//! which is the canonical enumeration order used everywhere in the crate.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported ground set.
pub const MAX_GROUND: usize = 64;

#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub const fn from_bits(bits: u64) -> Self {
        Subset(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// `{0, .., ground_size - 1}`.
    pub fn full(ground_size: usize) -> Self {
        assert!(ground_size <= MAX_GROUND, "ground set larger than 64");
        if ground_size == MAX_GROUND {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << ground_size) - 1)
        }
    }

    pub fn singleton(x: usize) -> Self {
        assert!(x < MAX_GROUND);
        Subset(1u64 << x)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        indices.into_iter().fold(Subset::EMPTY, |s, x| s.with(x))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, x: usize) -> bool {
        x < MAX_GROUND && self.0 >> x & 1 == 1
    }

    #[must_use]
    pub fn with(self, x: usize) -> Self {
        assert!(x < MAX_GROUND);
        Subset(self.0 | 1u64 << x)
    }

    #[must_use]
    pub fn without(self, x: usize) -> Self {
        if x >= MAX_GROUND {
            return self;
        }
        Subset(self.0 & !(1u64 << x))
    }

    #[must_use]
    pub fn union(self, other: Subset) -> Self {
        Subset(self.0 | other.0)
    }

    #[must_use]
    pub fn intersection(self, other: Subset) -> Self {
        Subset(self.0 & other.0)
    }

    #[must_use]
    pub fn difference(self, other: Subset) -> Self {
        Subset(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    pub fn meets(self, other: Subset) -> bool {
        !self.is_disjoint(other)
    }

    /// Smallest element, if any.
    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Largest element, if any.
    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    /// Whether every element lies below `ground_size`.
    pub fn fits(self, ground_size: usize) -> bool {
        ground_size >= MAX_GROUND || self.0 >> ground_size == 0
    }

    /// Elements in increasing order.
    pub fn iter(self) -> Elements {
        Elements(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Position of `self` in the colex enumeration of all `|self|`-subsets.
    pub fn colex_rank(self) -> usize {
        self.iter().enumerate().map(|(i, x)| binomial(x, i + 1) as usize).sum()
    }

    /// Image under an injective relabelling of the ground set.
    pub fn map(self, f: impl Fn(usize) -> usize) -> Self {
        self.iter().fold(Subset::EMPTY, |s, x| s.with(f(x)))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Subset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for Subset {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let indices = Vec::<usize>::deserialize(d)?;
        if let Some(&bad) = indices.iter().find(|&&x| x >= MAX_GROUND) {
            return Err(serde::de::Error::custom(format!("index {bad} out of range")));
        }
        Ok(Subset::from_indices(indices))
    }
}

impl FromIterator<usize> for Subset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Subset::from_indices(iter)
    }
}

pub struct Elements(u64);

impl Iterator for Elements {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let x = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(x)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Elements {}

/// Binomial coefficient, exact for every argument pair used in this crate.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

pub(crate) fn check_ground(ground_size: usize) -> Result<()> {
    if ground_size > MAX_GROUND {
        Err(Error::GroundTooLarge(ground_size))
    } else {
        Ok(())
    }
}

/// Colex enumeration of the `k`-element sub-masks of a fixed mask.
pub struct SubsetsOfSize {
    positions: Vec<usize>,
    // combination over indices into `positions`, as a mask of width `positions.len()`
    state: Option<u128>,
}

impl SubsetsOfSize {
    pub fn new(of: Subset, k: usize) -> Self {
        let positions = of.to_vec();
        let state = (k <= positions.len()).then(|| (1u128 << k) - 1);
        SubsetsOfSize { positions, state }
    }
}

impl Iterator for SubsetsOfSize {
    type Item = Subset;

    fn next(&mut self) -> Option<Subset> {
        let x = self.state?;
        let width = self.positions.len();
        let out = (0..width).filter(|&i| x >> i & 1 == 1).fold(Subset::EMPTY, |s, i| s.with(self.positions[i]));
        // Gosper's hack for the next combination of the same weight
        self.state = if x == 0 {
            None
        } else {
            let c = x & x.wrapping_neg();
            let r = x + c;
            let next = (((r ^ x) >> 2) / c) | r;
            (next >> width == 0).then_some(next)
        };
        Some(out)
    }
}

/// All `k`-subsets of `{0, .., ℓ-1}` in colex order; empty when `k > ℓ`.
pub fn ksubsets(ground_size: usize, k: usize) -> Vec<Subset> {
    SubsetsOfSize::new(Subset::full(ground_size), k).collect()
}

/// All `k`-subsets of `of` in colex order.
pub fn subsets_of_size(of: Subset, k: usize) -> SubsetsOfSize {
    SubsetsOfSize::new(of, k)
}

/// Every way to split `q` as `(P, Q \ P)` with `|P| = m`.
pub fn splits(q: Subset, m: usize) -> Vec<(Subset, Subset)> {
    subsets_of_size(q, m).map(|p| (p, q.difference(p))).collect()
}

/// A family of distinct subsets over a common ground set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetFamily {
    ground_size: usize,
    sets: Vec<Subset>,
}

impl SetFamily {
    pub fn new(ground_size: usize) -> Self {
        SetFamily { ground_size, sets: Vec::new() }
    }

    /// Builds a family, dropping duplicates while keeping first occurrences.
    pub fn from_sets<I: IntoIterator<Item = Subset>>(ground_size: usize, sets: I) -> Result<Self> {
        check_ground(ground_size)?;
        let mut family = SetFamily::new(ground_size);
        for s in sets {
            family.insert(s)?;
        }
        Ok(family)
    }

    pub fn insert(&mut self, set: Subset) -> Result<bool> {
        if !set.fits(self.ground_size) {
            return Err(Error::OutOfGround { set, ground_size: self.ground_size });
        }
        if self.sets.contains(&set) {
            return Ok(false);
        }
        self.sets.push(set);
        Ok(true)
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn sets(&self) -> &[Subset] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn contains(&self, set: Subset) -> bool {
        self.sets.contains(&set)
    }

    /// Union of two families over the same ground set.
    pub fn union(&self, other: &SetFamily) -> Result<SetFamily> {
        if self.ground_size != other.ground_size {
            return Err(Error::GroundMismatch { left: self.ground_size, right: other.ground_size });
        }
        SetFamily::from_sets(self.ground_size, self.sets.iter().chain(&other.sets).copied())
    }

    pub fn without(&self, set: Subset) -> SetFamily {
        SetFamily { ground_size: self.ground_size, sets: self.sets.iter().copied().filter(|&s| s != set).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ksubsets_small_cases() {
        assert_eq!(ksubsets(3, 0), vec![Subset::EMPTY]);
        let pairs = ksubsets(3, 2);
        assert_eq!(
            pairs,
            vec![Subset::from_indices([0, 1]), Subset::from_indices([0, 2]), Subset::from_indices([1, 2]),]
        );
        assert!(ksubsets(3, 4).is_empty());
        assert_eq!(ksubsets(0, 0), vec![Subset::EMPTY]);
    }

    #[test]
    fn ksubsets_count_matches_product_formula() {
        // 8·7·6·5 / 4! = 70
        let expected = (8 * 7 * 6 * 5) / (4 * 3 * 2);
        assert_eq!(ksubsets(8, 4).len(), expected);
        assert_eq!(binomial(8, 4), 70);
    }

    #[test]
    fn ksubsets_at_the_word_boundary() {
        assert_eq!(ksubsets(64, 1).len(), 64);
        assert_eq!(ksubsets(64, 63).len(), 64);
        assert_eq!(ksubsets(64, 64), vec![Subset::full(64)]);
        assert_eq!(ksubsets(64, 2).len(), 2016);
    }

    #[test]
    fn colex_rank_matches_position() {
        for l in 0..=9 {
            for k in 0..=l {
                for (i, s) in ksubsets(l, k).into_iter().enumerate() {
                    assert_eq!(s.colex_rank(), i);
                }
            }
        }
    }

    #[test]
    fn splits_examples() {
        let q = Subset::from_indices([0, 1]);
        assert_eq!(
            splits(q, 1),
            vec![(Subset::singleton(0), Subset::singleton(1)), (Subset::singleton(1), Subset::singleton(0)),]
        );
        let q = Subset::from_indices([0, 1, 2]);
        assert_eq!(splits(q, 0), vec![(Subset::EMPTY, q)]);
        assert_eq!(splits(Subset::from_indices([1, 3, 4, 6, 9]), 2).len(), 10);
        assert!(splits(q, 4).is_empty());
    }

    #[test]
    fn family_rejects_out_of_ground_and_dedups() {
        let mut fam = SetFamily::new(3);
        assert!(fam.insert(Subset::from_indices([0, 2])).unwrap());
        assert!(!fam.insert(Subset::from_indices([0, 2])).unwrap());
        assert!(fam.insert(Subset::singleton(3)).is_err());
        assert_eq!(fam.len(), 1);
    }

    #[test]
    fn display_and_serde() {
        let s = Subset::from_indices([4, 0, 2]);
        assert_eq!(s.to_string(), "{0,2,4}");
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, "[0,2,4]");
        assert_eq!(serde_json::from_str::<Subset>(&json).unwrap(), s);
    }
}
