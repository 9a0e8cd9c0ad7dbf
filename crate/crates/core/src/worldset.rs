use std::fmt;

use serde::{Deserialize, Serialize};

/// Frames are limited to this many worlds so a set of worlds fits in one `u128`.
pub const MAX_WORLDS: usize = 128;

/// A set of world indices below [`MAX_WORLDS`].
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WorldSet(pub u128);

impl WorldSet {
    pub const EMPTY: WorldSet = WorldSet(0);

    /// `{0, …, n-1}`
    pub fn full(n: usize) -> WorldSet {
        debug_assert!(n <= MAX_WORLDS);
        if n == MAX_WORLDS {
            WorldSet(u128::MAX)
        } else {
            WorldSet((1u128 << n) - 1)
        }
    }

    pub fn singleton(w: usize) -> WorldSet {
        WorldSet(1u128 << w)
    }

    pub fn contains(self, w: usize) -> bool {
        w < MAX_WORLDS && self.0 >> w & 1 == 1
    }

    pub fn insert(&mut self, w: usize) {
        self.0 |= 1u128 << w;
    }

    pub fn remove(&mut self, w: usize) {
        self.0 &= !(1u128 << w);
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 | other.0)
    }

    pub fn intersection(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 & other.0)
    }

    pub fn difference(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: WorldSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: WorldSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let w = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w)
            }
        })
    }
}

impl FromIterator<usize> for WorldSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = WorldSet::EMPTY;
        for w in iter {
            s.insert(w);
        }
        s
    }
}

impl fmt::Debug for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_set_algebra() {
        let a: WorldSet = [0, 2, 5].into_iter().collect();
        let b: WorldSet = [2, 3].into_iter().collect();
        assert_eq!(a.intersection(b).iter().collect::<Vec<_>>(), vec![2]);
        assert_eq!(a.union(b).len(), 4);
        assert_eq!(a.difference(b).iter().collect::<Vec<_>>(), vec![0, 5]);
        assert!(WorldSet::singleton(2).is_subset(a));
        assert_eq!(WorldSet::full(MAX_WORLDS).len(), MAX_WORLDS);
        assert!(WorldSet::full(MAX_WORLDS).contains(127));
        assert!(!a.contains(200));
    }
}
