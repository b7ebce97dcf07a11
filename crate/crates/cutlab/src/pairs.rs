//! Indexing of unordered vertex pairs and dense bitsets over them.
//!
//! Pairs {u,v} with u < v < n are numbered in colexicographic order:
//! index(u,v) = v(v-1)/2 + u.  This is also the bit order of the graph6
//! format, so one indexing scheme serves serialization, cut crossing masks
//! and equivalence-pair bookkeeping alike.

/// Number of unordered pairs on `n` vertices.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Colexicographic index of the pair {u,v}; `u != v` required.
pub fn pair_index(u: usize, v: usize) -> usize {
    debug_assert_ne!(u, v);
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    b * (b - 1) / 2 + a
}

/// Inverse of [`pair_index`]: returns (u, v) with u < v.
pub fn pair_from_index(idx: usize) -> (usize, usize) {
    // v is the largest integer with v(v-1)/2 <= idx.
    let mut v = (8 * idx + 1).isqrt().div_ceil(2);
    while v * (v - 1) / 2 > idx {
        v -= 1;
    }
    while (v + 1) * v / 2 <= idx {
        v += 1;
    }
    let u = idx - v * (v - 1) / 2;
    (u, v)
}

/// Dense bitset over the unordered pairs of [n].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairSet {
    n: usize,
    words: Vec<u64>,
}

impl PairSet {
    pub fn empty(n: usize) -> Self {
        let bits = pair_count(n);
        PairSet {
            n,
            words: vec![0; bits.div_ceil(64)],
        }
    }

    /// All pairs of [n].
    pub fn full(n: usize) -> Self {
        let bits = pair_count(n);
        let mut s = PairSet::empty(n);
        for w in 0..s.words.len() {
            let remaining = bits - w * 64;
            s.words[w] = if remaining >= 64 {
                u64::MAX
            } else {
                (1u64 << remaining) - 1
            };
        }
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, u: usize, v: usize) {
        let i = pair_index(u, v);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        let i = pair_index(u, v);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union_with(&mut self, other: &PairSet) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &PairSet) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    /// Pairs of self not in `other`.
    pub fn minus(&self, other: &PairSet) -> PairSet {
        debug_assert_eq!(self.n, other.n);
        PairSet {
            n: self.n,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & !b)
                .collect(),
        }
    }

    /// Complement within the full pair set of [n].
    pub fn complement(&self) -> PairSet {
        let mut c = PairSet::full(self.n);
        for (a, b) in c.words.iter_mut().zip(&self.words) {
            *a &= !b;
        }
        c
    }

    pub fn is_subset_of(&self, other: &PairSet) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    /// Pairs in ascending index order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..pair_count(self.n))
            .filter(move |&i| self.words[i / 64] >> (i % 64) & 1 == 1)
            .map(pair_from_index)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_index_roundtrips() {
        let mut seen = vec![false; pair_count(12)];
        for v in 0..12 {
            for u in 0..v {
                let i = pair_index(u, v);
                assert!(!seen[i]);
                seen[i] = true;
                assert_eq!(pair_from_index(i), (u, v));
            }
        }
        assert!(seen.iter().all(|&b| b));
    }

    #[test]
    fn colex_order_matches_definition() {
        // (0,1) -> 0, (0,2) -> 1, (1,2) -> 2, (0,3) -> 3 ...
        assert_eq!(pair_index(0, 1), 0);
        assert_eq!(pair_index(0, 2), 1);
        assert_eq!(pair_index(1, 2), 2);
        assert_eq!(pair_index(0, 3), 3);
        assert_eq!(pair_index(2, 3), 5);
    }

    #[test]
    fn full_and_complement_agree() {
        let full = PairSet::full(9);
        assert_eq!(full.len(), 36);
        let mut s = PairSet::empty(9);
        s.insert(0, 1);
        s.insert(7, 8);
        let c = s.complement();
        assert_eq!(c.len(), 34);
        assert!(!c.contains(0, 1));
        assert!(c.contains(0, 2));
        let mut u = c.clone();
        u.union_with(&s);
        assert_eq!(u, full);
    }
}
