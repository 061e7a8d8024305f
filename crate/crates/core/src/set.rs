//! Subsets of a universe of at most 256 elements.

use core::cmp::Ordering;
use core::fmt;

use alloc::vec::Vec;

use crate::Elem;

const WORDS: usize = 4;

/// A subset of `{0, …, 255}` stored as a 256-bit mask.
///
/// Sets are ordered as the integers their masks represent, so `{0} < {1} <
/// {0, 1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ElementSet {
    words: [u64; WORDS],
}

impl ElementSet {
    pub const fn empty() -> Self {
        ElementSet { words: [0; WORDS] }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty();
        for e in 0..n {
            s.insert(e as Elem);
        }
        s
    }

    pub fn singleton(e: Elem) -> Self {
        let mut s = Self::empty();
        s.insert(e);
        s
    }

    /// Builds a set from the low `n` bits of `mask`.
    pub fn from_mask(mask: u64) -> Self {
        ElementSet { words: [mask, 0, 0, 0] }
    }

    #[inline]
    pub fn contains(&self, e: Elem) -> bool {
        let e = e as usize;
        self.words[e >> 6] >> (e & 63) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, e: Elem) -> bool {
        let e = e as usize;
        let bit = 1u64 << (e & 63);
        let fresh = self.words[e >> 6] & bit == 0;
        self.words[e >> 6] |= bit;
        fresh
    }

    pub fn remove(&mut self, e: Elem) {
        let e = e as usize;
        self.words[e >> 6] &= !(1u64 << (e & 63));
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut words = self.words;
        for (w, o) in words.iter_mut().zip(other.words) {
            *w |= o;
        }
        ElementSet { words }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut words = self.words;
        for (w, o) in words.iter_mut().zip(other.words) {
            *w &= o;
        }
        ElementSet { words }
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut words = self.words;
        for (w, o) in words.iter_mut().zip(other.words) {
            *w &= !o;
        }
        ElementSet { words }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words.iter().zip(other.words).all(|(w, o)| w & !o == 0)
    }

    pub fn is_proper_subset(&self, other: &Self) -> bool {
        self.is_subset(other) && self != other
    }

    /// Largest member, if any.
    pub fn max_element(&self) -> Option<Elem> {
        for (i, &w) in self.words.iter().enumerate().rev() {
            if w != 0 {
                return Some((i * 64 + 63 - w.leading_zeros() as usize) as Elem);
            }
        }
        None
    }

    pub fn iter(&self) -> impl Iterator<Item = Elem> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            core::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some((i * 64 + b) as Elem)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<Elem> {
        self.iter().collect()
    }
}

impl FromIterator<Elem> for ElementSet {
    fn from_iter<T: IntoIterator<Item = Elem>>(iter: T) -> Self {
        let mut s = Self::empty();
        for e in iter {
            s.insert(e);
        }
        s
    }
}

impl Ord for ElementSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.words.iter().rev().cmp(other.words.iter().rev())
    }
}

impl PartialOrd for ElementSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
