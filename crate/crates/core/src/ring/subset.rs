use std::cmp::Ordering;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

use super::Elem;

/// A set of element indices of one finite ring, iterated in ascending order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingSubset {
    bits: FixedBitSet,
}

impl RingSubset {
    pub fn empty(order: usize) -> Self {
        RingSubset {
            bits: FixedBitSet::with_capacity(order),
        }
    }

    pub fn full(order: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(order);
        bits.insert_range(..);
        RingSubset { bits }
    }

    /// Elements outside `0..order` are silently dropped; callers validate first.
    pub fn from_elems<I: IntoIterator<Item = Elem>>(order: usize, elems: I) -> Self {
        let mut s = Self::empty(order);
        for e in elems {
            if e.0 < order {
                s.bits.insert(e.0);
            }
        }
        s
    }

    /// Bit `i` of `mask` selects element `i`.
    pub fn from_mask(order: usize, mask: u64) -> Self {
        let mut s = Self::empty(order);
        for i in 0..order.min(64) {
            if mask >> i & 1 == 1 {
                s.bits.insert(i);
            }
        }
        s
    }

    pub fn order(&self) -> usize {
        self.bits.len()
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.bits.contains(e.0)
    }

    /// Returns true if the element was not already present.
    pub fn insert(&mut self, e: Elem) -> bool {
        !self.bits.put(e.0)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn is_subset(&self, other: &RingSubset) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn union_with(&mut self, other: &RingSubset) {
        self.bits.union_with(&other.bits);
    }

    pub fn iter(&self) -> impl Iterator<Item = Elem> + '_ {
        self.bits.ones().map(Elem)
    }

    pub fn members(&self) -> Vec<usize> {
        self.bits.ones().collect()
    }
}

impl Ord for RingSubset {
    /// Size first, then lexicographic on the sorted member lists.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.bits.ones().cmp(other.bits.ones()))
    }
}

impl PartialOrd for RingSubset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for RingSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.bits.ones()).finish()
    }
}

impl fmt::Display for RingSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, m) in self.bits.ones().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for RingSubset {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.bits.ones())
    }
}
