//! Finite multisets over an ordered element type.
//!
//! A multiset is stored as a map from element to a positive multiplicity.
//! The *layer* `S⟨i⟩` is the set of elements whose multiplicity is at least
//! `i`; the layers form a decreasing chain and sum back to `S`.

use std::collections::btree_map::{self, BTreeMap};
use std::collections::BTreeSet;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Subtraction `a - b` was requested with `b` not contained in `a`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("multiset is not contained in the minuend")]
pub struct ContainmentError;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multiset<T: Ord> {
    entries: BTreeMap<T, u32>,
}

impl<T: Ord> Default for Multiset<T> {
    fn default() -> Self {
        Multiset { entries: BTreeMap::new() }
    }
}

impl<T: Ord + Clone> Multiset<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// The multiset holding `x` once.
    pub fn singleton(x: T) -> Self {
        let mut m = Self::new();
        m.insert(x);
        m
    }

    pub fn insert(&mut self, x: T) {
        self.insert_many(x, 1);
    }

    /// Adds `count` copies of `x`.
    ///
    /// Panics if the multiplicity would overflow `u32`.
    pub fn insert_many(&mut self, x: T, count: u32) {
        if count == 0 {
            return;
        }
        let slot = self.entries.entry(x).or_insert(0);
        *slot = slot.checked_add(count).expect("multiplicity overflow");
    }

    /// Removes one copy of `x`; returns false when `x` was absent.
    pub fn remove_one(&mut self, x: &T) -> bool {
        match self.entries.get_mut(x) {
            Some(m) if *m > 1 => {
                *m -= 1;
                true
            }
            Some(_) => {
                self.entries.remove(x);
                true
            }
            None => false,
        }
    }

    pub fn multiplicity(&self, x: &T) -> u32 {
        self.entries.get(x).copied().unwrap_or(0)
    }

    /// Total number of elements counted with multiplicity.
    pub fn len(&self) -> usize {
        self.entries.values().map(|&m| m as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_multiplicity(&self) -> u32 {
        self.entries.values().copied().max().unwrap_or(0)
    }

    /// Distinct elements with their multiplicities, in element order.
    pub fn iter(&self) -> btree_map::Iter<'_, T, u32> {
        self.entries.iter()
    }

    /// Every element repeated according to its multiplicity.
    pub fn iter_repeated(&self) -> impl Iterator<Item = &T> + '_ {
        self.entries
            .iter()
            .flat_map(|(x, &m)| std::iter::repeat_n(x, m as usize))
    }

    /// The underlying set `S⟨1⟩`.
    pub fn support(&self) -> BTreeSet<T> {
        self.entries.keys().cloned().collect()
    }

    /// `S⟨i⟩`: elements of multiplicity at least `i`. Layers are 1-based;
    /// `layer(0)` is treated like `layer(1)`.
    pub fn layer(&self, i: u32) -> BTreeSet<T> {
        self.entries
            .iter()
            .filter(|(_, &m)| m >= i)
            .map(|(x, _)| x.clone())
            .collect()
    }

    /// The nonempty layers `S⟨1⟩ ⊇ S⟨2⟩ ⊇ ⋯`.
    pub fn layers(&self) -> Vec<BTreeSet<T>> {
        (1..=self.max_multiplicity()).map(|i| self.layer(i)).collect()
    }

    /// Layerwise containment `self ⊂ other`.
    pub fn is_contained_in(&self, other: &Self) -> bool {
        self.entries
            .iter()
            .all(|(x, &m)| other.multiplicity(x) >= m)
    }

    /// Disjointness of the supports.
    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.entries.keys().all(|x| !other.entries.contains_key(x))
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (x, &m) in &other.entries {
            out.insert_many(x.clone(), m);
        }
        out
    }

    /// `self - other`, defined only when `other ⊂ self`.
    pub fn subtract(&self, other: &Self) -> Result<Self, ContainmentError> {
        if !other.is_contained_in(self) {
            return Err(ContainmentError);
        }
        let mut out = self.clone();
        for (x, &m) in &other.entries {
            let slot = out.entries.get_mut(x).expect("checked containment");
            *slot -= m;
            if *slot == 0 {
                out.entries.remove(x);
            }
        }
        Ok(out)
    }

    /// Keeps the elements for which `keep` holds.
    pub fn retain(&mut self, mut keep: impl FnMut(&T) -> bool) {
        self.entries.retain(|x, _| keep(x));
    }
}

impl<T: Ord + Clone> FromIterator<T> for Multiset<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut m = Multiset::new();
        for x in iter {
            m.insert(x);
        }
        m
    }
}

impl<T: Ord + Clone> Extend<T> for Multiset<T> {
    fn extend<I: IntoIterator<Item = T>>(&mut self, iter: I) {
        for x in iter {
            self.insert(x);
        }
    }
}

impl<T: Ord + Clone> Add for &Multiset<T> {
    type Output = Multiset<T>;

    fn add(self, rhs: Self) -> Multiset<T> {
        self.sum(rhs)
    }
}

impl<T: Ord + Clone> Add for Multiset<T> {
    type Output = Multiset<T>;

    fn add(self, rhs: Self) -> Multiset<T> {
        self.sum(&rhs)
    }
}

impl<'a, T: Ord> IntoIterator for &'a Multiset<T> {
    type Item = (&'a T, &'a u32);
    type IntoIter = btree_map::Iter<'a, T, u32>;

    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

impl<T: Ord + fmt::Debug> fmt::Debug for Multiset<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_set();
        for (x, &m) in &self.entries {
            for _ in 0..m {
                list.entry(x);
            }
        }
        list.finish()
    }
}
