//! Fixed-width bit sets used for tuple sets and atom sets.

use std::fmt;

use fixedbitset::FixedBitSet;

/// A subset of `0..width`. Binary operations require equal widths.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitSet(FixedBitSet);

impl BitSet {
    pub fn empty(width: usize) -> Self {
        BitSet(FixedBitSet::with_capacity(width))
    }

    pub fn full(width: usize) -> Self {
        let mut b = FixedBitSet::with_capacity(width);
        b.insert_range(..);
        BitSet(b)
    }

    pub fn from_indices(width: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut b = FixedBitSet::with_capacity(width);
        for i in indices {
            b.insert(i);
        }
        BitSet(b)
    }

    /// The set whose members are the one-bits of `code` (width at most 64).
    pub fn from_word(width: usize, code: u64) -> Self {
        debug_assert!(width <= 64);
        Self::from_indices(width, (0..width).filter(|&i| code >> i & 1 == 1))
    }

    /// Inverse of [`BitSet::from_word`].
    pub fn to_word(&self) -> u64 {
        debug_assert!(self.width() <= 64);
        self.ones().fold(0, |acc, i| acc | 1 << i)
    }

    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(i)
    }

    pub fn insert(&mut self, i: usize) {
        self.0.insert(i)
    }

    pub fn remove(&mut self, i: usize) {
        self.0.remove(i)
    }

    pub fn set(&mut self, i: usize, on: bool) {
        self.0.set(i, on)
    }

    pub fn count(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.0.is_full()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.ones().collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.minimum()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn intersects(&self, other: &Self) -> bool {
        !self.is_disjoint(other)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut b = self.clone();
        b.union_with(other);
        b
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut b = self.clone();
        b.intersect_with(other);
        b
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut b = self.clone();
        b.0.difference_with(&other.0);
        b
    }

    pub fn complement(&self) -> Self {
        let mut b = self.clone();
        b.0.toggle_range(..);
        b
    }

    pub fn union_with(&mut self, other: &Self) {
        debug_assert_eq!(self.width(), other.width());
        self.0.union_with(&other.0)
    }

    pub fn intersect_with(&mut self, other: &Self) {
        debug_assert_eq!(self.width(), other.width());
        self.0.intersect_with(&other.0)
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.ones()).finish()
    }
}
