use std::fmt;

/// Largest state count a [`StateSet`] can hold.
pub const MAX_SET_STATES: usize = 64;

/// A set of states backed by a 64-bit mask.
///
/// Bit `q` is set iff state `q` is a member. Cardinality is a popcount, so
/// it can never drift from the membership bits.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct StateSet(u64);

impl StateSet {
    pub const EMPTY: StateSet = StateSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        StateSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// `{0, .., n-1}`. Panics if `n > 64`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_SET_STATES, "state set width {n} exceeds 64");
        if n == MAX_SET_STATES {
            StateSet(u64::MAX)
        } else {
            StateSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(q: usize) -> Self {
        assert!(q < MAX_SET_STATES);
        StateSet(1u64 << q)
    }

    pub fn contains(self, q: usize) -> bool {
        q < MAX_SET_STATES && self.0 >> q & 1 == 1
    }

    pub fn insert(&mut self, q: usize) {
        assert!(q < MAX_SET_STATES);
        self.0 |= 1u64 << q;
    }

    pub fn remove(&mut self, q: usize) {
        if q < MAX_SET_STATES {
            self.0 &= !(1u64 << q);
        }
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_singleton(self) -> bool {
        self.0 != 0 && self.0 & (self.0 - 1) == 0
    }

    /// Least member, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Members in increasing order.
    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    pub fn union(self, other: StateSet) -> StateSet {
        StateSet(self.0 | other.0)
    }

    pub fn is_subset(self, other: StateSet) -> bool {
        self.0 & !other.0 == 0
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let q = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(q)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

impl IntoIterator for StateSet {
    type Item = usize;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl FromIterator<usize> for StateSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = StateSet::EMPTY;
        for q in iter {
            s.insert(q);
        }
        s
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_and_singleton() {
        assert_eq!(StateSet::full(4).bits(), 0b1111);
        assert_eq!(StateSet::full(64).len(), 64);
        assert!(StateSet::singleton(63).is_singleton());
        assert!(!StateSet::EMPTY.is_singleton());
        assert!(!StateSet::full(2).is_singleton());
    }

    #[test]
    fn iteration_is_sorted() {
        let s: StateSet = [5, 1, 9, 1].into_iter().collect();
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![1, 5, 9]);
        assert_eq!(s.len(), 3);
        assert_eq!(s.first(), Some(1));
    }
}
