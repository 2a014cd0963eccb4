use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Identifier of a conjunction in a DNF formula (1-based).
pub type ConjId = u32;

/// A set of conjunction identifiers.
///
/// Backed by a bitset indexed by the id itself; the set grows on insert.
#[derive(Clone, Default)]
pub struct ConjSet {
    bits: FixedBitSet,
}

impl ConjSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(max_id: usize) -> Self {
        ConjSet {
            bits: FixedBitSet::with_capacity(max_id + 1),
        }
    }

    pub fn insert(&mut self, id: ConjId) {
        let idx = id as usize;
        if idx >= self.bits.len() {
            self.bits.grow(idx + 1);
        }
        self.bits.insert(idx);
    }

    pub fn contains(&self, id: ConjId) -> bool {
        self.bits.contains(id as usize)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = ConjId> + '_ {
        self.bits.ones().map(|i| i as ConjId)
    }

    pub fn union_with(&mut self, other: &ConjSet) {
        if other.bits.len() > self.bits.len() {
            self.bits.grow(other.bits.len());
        }
        self.bits.union_with(&other.bits);
    }

    pub fn intersection(&self, other: &ConjSet) -> ConjSet {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        ConjSet { bits }
    }

    /// `self |= a & b` without allocating.
    pub fn union_with_intersection(&mut self, a: &ConjSet, b: &ConjSet) {
        let n = a.bits.len().min(b.bits.len());
        if n > self.bits.len() {
            self.bits.grow(n);
        }
        let (xa, xb) = (a.bits.as_slice(), b.bits.as_slice());
        for ((d, x), y) in self.bits.as_mut_slice().iter_mut().zip(xa).zip(xb) {
            *d |= x & y;
        }
    }

    pub fn intersects(&self, other: &ConjSet) -> bool {
        !self.bits.is_disjoint(&other.bits)
    }

    pub fn is_subset(&self, other: &ConjSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn to_vec(&self) -> Vec<ConjId> {
        self.iter().collect()
    }
}

impl PartialEq for ConjSet {
    fn eq(&self, other: &Self) -> bool {
        self.iter().eq(other.iter())
    }
}

impl Eq for ConjSet {}

impl FromIterator<ConjId> for ConjSet {
    fn from_iter<I: IntoIterator<Item = ConjId>>(iter: I) -> Self {
        let mut set = ConjSet::new();
        for id in iter {
            set.insert(id);
        }
        set
    }
}

impl<const N: usize> From<[ConjId; N]> for ConjSet {
    fn from(ids: [ConjId; N]) -> Self {
        ids.into_iter().collect()
    }
}

impl fmt::Debug for ConjSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for ConjSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, id) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{id}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for ConjSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for ConjSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let ids = Vec::<ConjId>::deserialize(deserializer)?;
        Ok(ids.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equality_ignores_capacity() {
        let mut a = ConjSet::with_capacity(100);
        a.insert(3);
        let b = ConjSet::from([3]);
        assert_eq!(a, b);
    }

    #[test]
    fn set_operations() {
        let a = ConjSet::from([1, 5, 6]);
        let b = ConjSet::from([5, 9]);
        assert_eq!(a.intersection(&b), ConjSet::from([5]));
        let mut c = a.clone();
        c.union_with(&b);
        assert_eq!(c.to_vec(), vec![1, 5, 6, 9]);
        assert!(a.intersects(&b));
        assert!(ConjSet::from([5]).is_subset(&a));
        assert_eq!(a.to_string(), "{1,5,6}");
    }
}
