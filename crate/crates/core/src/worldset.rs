use std::fmt;

/// Maximum number of worlds a frame may have.
pub const MAX_WORLDS: usize = 64;

/// A set of worlds of one frame, one bit per world index.
///
/// Sets carry no reference to their universe; operations that need it
/// (complement) take the universe size explicitly. The derived order compares
/// the underlying bit patterns and is the canonical order used wherever a
/// "least" set is reported.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WorldSet(pub u64);

impl WorldSet {
    pub const EMPTY: WorldSet = WorldSet(0);

    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> WorldSet {
        debug_assert!(n <= MAX_WORLDS);
        if n == MAX_WORLDS {
            WorldSet(u64::MAX)
        } else {
            WorldSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(w: usize) -> WorldSet {
        WorldSet(1u64 << w)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, w: usize) -> bool {
        w < MAX_WORLDS && self.0 >> w & 1 == 1
    }

    pub fn insert(&mut self, w: usize) {
        self.0 |= 1u64 << w;
    }

    pub fn remove(&mut self, w: usize) {
        self.0 &= !(1u64 << w);
    }

    pub fn with(self, w: usize) -> WorldSet {
        WorldSet(self.0 | 1u64 << w)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 | other.0)
    }

    pub fn intersect(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 & other.0)
    }

    pub fn minus(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 & !other.0)
    }

    pub fn complement(self, n: usize) -> WorldSet {
        WorldSet::full(n).minus(self)
    }

    pub fn is_subset(self, other: WorldSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: WorldSet) -> bool {
        self.0 & other.0 != 0
    }

    /// Least element.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// The `k` least elements (all of them if `k >= len`).
    pub fn take_least(self, k: usize) -> WorldSet {
        self.iter().take(k).fold(WorldSet::EMPTY, WorldSet::with)
    }

    /// Elements in increasing order.
    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    /// Image under the transposition of `a` and `b`.
    pub fn swap(self, a: usize, b: usize) -> WorldSet {
        let (ia, ib) = (self.contains(a), self.contains(b));
        let mut out = self;
        out.remove(a);
        out.remove(b);
        if ia {
            out.insert(b);
        }
        if ib {
            out.insert(a);
        }
        out
    }

    /// All subsets of `{0, .., n-1}` in canonical order.
    pub fn powerset(n: usize) -> impl Iterator<Item = WorldSet> {
        assert!(n < MAX_WORLDS, "powerset of {n} worlds");
        (0..1u64 << n).map(WorldSet)
    }

    /// All subsets of `self`, in canonical order.
    pub fn subsets(self) -> impl Iterator<Item = WorldSet> {
        let mask = self.0;
        let mut cur = Some(0u64);
        std::iter::from_fn(move || {
            let out = cur?;
            cur = if out == mask {
                None
            } else {
                Some((out.wrapping_sub(mask)) & mask)
            };
            Some(WorldSet(out))
        })
    }
}

impl FromIterator<usize> for WorldSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(WorldSet::EMPTY, WorldSet::with)
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let w = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(w)
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
    fn basic_algebra() {
        let a: WorldSet = [0, 2].into_iter().collect();
        let b: WorldSet = [2, 3].into_iter().collect();
        assert_eq!(a.union(b), [0, 2, 3].into_iter().collect());
        assert_eq!(a.intersect(b), WorldSet::singleton(2));
        assert_eq!(a.minus(b), WorldSet::singleton(0));
        assert_eq!(a.complement(4), [1, 3].into_iter().collect());
        assert_eq!(a.len(), 2);
        assert!(WorldSet::EMPTY.is_subset(a));
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(WorldSet::full(64).len(), 64);
    }

    #[test]
    fn swap_and_take() {
        let a: WorldSet = [0, 2].into_iter().collect();
        assert_eq!(a.swap(0, 1), [1, 2].into_iter().collect());
        assert_eq!(a.swap(0, 2), a);
        assert_eq!(WorldSet::full(5).take_least(2), [0, 1].into_iter().collect());
        assert_eq!(a.take_least(9), a);
    }

    #[test]
    fn subsets_enumeration() {
        let s: WorldSet = [1, 3, 4].into_iter().collect();
        let subs: Vec<_> = s.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|x| x.is_subset(s)));
        assert!(subs.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(WorldSet::EMPTY.subsets().count(), 1);
        assert_eq!(WorldSet::powerset(3).count(), 8);
    }
}
