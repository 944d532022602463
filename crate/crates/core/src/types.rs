//! Domain types: entity types drawn from the possibility set, multisets (the
//! unit of replication), and the population holding them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A species label from the possibility set `{1, ..., s_max}`.
///
/// Stored as 32 bits even though the default possibility set tops out at
/// 1000, leaving headroom for larger sets without format changes.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EntityType(u32);

impl EntityType {
    /// Validates `1 <= value <= s_max`.
    pub fn new(value: u32, s_max: u32) -> Result<Self> {
        if value < 1 || value > s_max {
            return Err(Error::EntityOutOfRange { value, s_max });
        }
        Ok(EntityType(value))
    }

    /// Wraps a value the caller already knows to be in range (for example a
    /// uniform draw from `[1, s_max]`).
    #[inline]
    pub(crate) fn from_raw(value: u32) -> Self {
        debug_assert!(value >= 1);
        EntityType(value)
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }
}

/// A canonically sorted bag of entity types; duplicates are permitted and the
/// element sequence is always non-decreasing. Two multisets are equal iff
/// their canonical sequences are identical. Empty multisets are not
/// representable: they signal removal wherever they would arise.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Multiset {
    elements: Vec<EntityType>,
}

impl Multiset {
    /// Canonicalizes `elements` by sorting ascending. Errors on empty input.
    pub fn new(mut elements: Vec<EntityType>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::EmptyMultiset);
        }
        elements.sort_unstable();
        Ok(Multiset { elements })
    }

    /// Builds a multiset from raw values, validating each against `s_max`.
    pub fn from_values(values: &[u32], s_max: u32) -> Result<Self> {
        let elements = values
            .iter()
            .map(|&v| EntityType::new(v, s_max))
            .collect::<Result<Vec<_>>>()?;
        Multiset::new(elements)
    }

    pub fn singleton(e: EntityType) -> Self {
        Multiset { elements: vec![e] }
    }

    #[inline]
    pub fn elements(&self) -> &[EntityType] {
        &self.elements
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    /// Iterator over the raw `u32` values in canonical order.
    pub fn values(&self) -> impl Iterator<Item = u32> + '_ {
        self.elements.iter().map(|e| e.value())
    }
}

/// Sorts a sequence of entity types into a canonical [`Multiset`].
/// Errors on empty input: empty multisets are removed, never stored.
pub fn canonicalize(elements: Vec<EntityType>) -> Result<Multiset> {
    Multiset::new(elements)
}

/// The list of multisets a run evolves. Indexable so competitions can draw
/// members uniformly; removal uses `swap_remove`, so member order carries no
/// meaning.
#[derive(Clone, Debug, Default)]
pub struct Population {
    members: Vec<Multiset>,
}

impl Population {
    pub fn new(members: Vec<Multiset>) -> Self {
        Population { members }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    #[inline]
    pub fn get(&self, index: usize) -> &Multiset {
        &self.members[index]
    }

    pub fn push(&mut self, ms: Multiset) {
        self.members.push(ms);
    }

    pub fn swap_remove(&mut self, index: usize) -> Multiset {
        self.members.swap_remove(index)
    }

    pub fn members(&self) -> &[Multiset] {
        &self.members
    }

    pub(crate) fn take_members(&mut self) -> Vec<Multiset> {
        std::mem::take(&mut self.members)
    }

    pub(crate) fn set_members(&mut self, members: Vec<Multiset>) {
        self.members = members;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms(values: &[u32]) -> Multiset {
        Multiset::from_values(values, 1000).unwrap()
    }

    #[test]
    fn canonicalize_sorts_ascending() {
        assert_eq!(ms(&[3, 1, 1]).values().collect::<Vec<_>>(), vec![1, 1, 3]);
    }

    #[test]
    fn canonicalize_singleton() {
        assert_eq!(ms(&[7]).values().collect::<Vec<_>>(), vec![7]);
    }

    #[test]
    fn empty_input_rejected() {
        assert!(matches!(
            Multiset::from_values(&[], 1000),
            Err(Error::EmptyMultiset)
        ));
        assert!(matches!(canonicalize(vec![]), Err(Error::EmptyMultiset)));
    }

    #[test]
    fn out_of_range_values_rejected() {
        assert!(matches!(
            Multiset::from_values(&[1, 1001], 1000),
            Err(Error::EntityOutOfRange { value: 1001, .. })
        ));
        assert!(matches!(
            Multiset::from_values(&[0], 1000),
            Err(Error::EntityOutOfRange { value: 0, .. })
        ));
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let a = ms(&[9, 2, 9, 4]);
        let b = canonicalize(a.elements().to_vec()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn equality_is_content_based() {
        assert_eq!(ms(&[5, 2]), ms(&[2, 5]));
        assert_ne!(ms(&[5]), ms(&[5, 5]));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn permutation_invariant(mut values in proptest::collection::vec(1u32..=1000, 1..20), seed in any::<u64>()) {
                let a = ms(&values);
                // cheap deterministic shuffle of the input
                let mut s = seed;
                for i in (1..values.len()).rev() {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    let j = (s >> 33) as usize % (i + 1);
                    values.swap(i, j);
                }
                let b = ms(&values);
                prop_assert_eq!(a, b);
            }
        }
    }
}
