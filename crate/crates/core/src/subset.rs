use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, Not, Sub};

/// Largest part set supported. Subsets are stored as a single `u128` mask.
pub const MAX_PARTS: usize = 128;

/// A set of parts, stored as a bitmask over the dense part indices of a
/// [`PartSet`](crate::PartSet).
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartSubset(u128);

impl PartSubset {
    pub const EMPTY: PartSubset = PartSubset(0);

    #[inline]
    pub const fn from_bits(bits: u128) -> Self {
        PartSubset(bits)
    }

    #[inline]
    pub const fn bits(self) -> u128 {
        self.0
    }

    /// The set `{0, .., n-1}`.
    #[inline]
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_PARTS, "part index out of range");
        if n == MAX_PARTS {
            PartSubset(u128::MAX)
        } else {
            PartSubset((1u128 << n) - 1)
        }
    }

    #[inline]
    pub fn singleton(i: usize) -> Self {
        assert!(i < MAX_PARTS, "part index out of range");
        PartSubset(1u128 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        indices
            .into_iter()
            .fold(PartSubset::EMPTY, |acc, i| acc | PartSubset::singleton(i))
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        i < MAX_PARTS && self.0 >> i & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        *self |= PartSubset::singleton(i);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1u128 << i);
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn is_subset(self, other: PartSubset) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_strict_subset(self, other: PartSubset) -> bool {
        self.is_subset(other) && self != other
    }

    #[inline]
    pub fn intersects(self, other: PartSubset) -> bool {
        self.0 & other.0 != 0
    }

    /// Least element, if any.
    #[inline]
    pub fn min(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    /// Elements in increasing order.
    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    /// All subsets of `self`, including the empty set and `self`.
    pub fn subsets(self) -> Subsets {
        Subsets {
            mask: self.0,
            next: Some(0),
        }
    }
}

impl fmt::Debug for PartSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl BitAnd for PartSubset {
    type Output = PartSubset;
    #[inline]
    fn bitand(self, rhs: PartSubset) -> PartSubset {
        PartSubset(self.0 & rhs.0)
    }
}

impl BitAndAssign for PartSubset {
    #[inline]
    fn bitand_assign(&mut self, rhs: PartSubset) {
        self.0 &= rhs.0;
    }
}

impl BitOr for PartSubset {
    type Output = PartSubset;
    #[inline]
    fn bitor(self, rhs: PartSubset) -> PartSubset {
        PartSubset(self.0 | rhs.0)
    }
}

impl BitOrAssign for PartSubset {
    #[inline]
    fn bitor_assign(&mut self, rhs: PartSubset) {
        self.0 |= rhs.0;
    }
}

impl Sub for PartSubset {
    type Output = PartSubset;
    #[inline]
    fn sub(self, rhs: PartSubset) -> PartSubset {
        PartSubset(self.0 & !rhs.0)
    }
}

impl Not for PartSubset {
    type Output = PartSubset;
    #[inline]
    fn not(self) -> PartSubset {
        PartSubset(!self.0)
    }
}

impl FromIterator<usize> for PartSubset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        PartSubset::from_indices(iter)
    }
}

impl IntoIterator for PartSubset {
    type Item = usize;
    type IntoIter = Iter;
    fn into_iter(self) -> Iter {
        self.iter()
    }
}

pub struct Iter(u128);

impl Iterator for Iter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

/// Enumerates submasks in increasing numeric order.
pub struct Subsets {
    mask: u128,
    next: Option<u128>,
}

impl Iterator for Subsets {
    type Item = PartSubset;

    fn next(&mut self) -> Option<PartSubset> {
        let cur = self.next?;
        self.next = if cur == self.mask {
            None
        } else {
            // next submask in increasing order
            Some((cur.wrapping_sub(self.mask)) & self.mask)
        };
        Some(PartSubset(cur))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iter_and_len() {
        let s = PartSubset::from_indices([5, 1, 3]);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![1, 3, 5]);
        assert_eq!(s.len(), 3);
        assert_eq!(s.min(), Some(1));
        assert!(PartSubset::EMPTY.min().is_none());
    }

    #[test]
    fn subsets_enumerates_all() {
        let s = PartSubset::from_indices([0, 2, 7]);
        let all: Vec<_> = s.subsets().collect();
        assert_eq!(all.len(), 8);
        assert!(all.iter().all(|x| x.is_subset(s)));
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted, all);
        assert_eq!(PartSubset::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn full_width() {
        assert_eq!(PartSubset::full(MAX_PARTS).len(), MAX_PARTS);
        assert_eq!(PartSubset::full(0), PartSubset::EMPTY);
        assert!(PartSubset::full(MAX_PARTS).contains(127));
    }
}
