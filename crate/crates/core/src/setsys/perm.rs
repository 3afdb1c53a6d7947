use std::fmt;

use super::ElementSet;
use crate::error::{Error, Result};

/// An ordering of the ground set `[n]`, stored with 1-based element values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    order: Vec<usize>,
}

impl Permutation {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &v in &order {
            if v == 0 || v > n {
                return Err(Error::InvalidPermutation(format!(
                    "entry {v} is not in [1, {n}]"
                )));
            }
            if std::mem::replace(&mut seen[v - 1], true) {
                return Err(Error::InvalidPermutation(format!("entry {v} repeated")));
            }
        }
        Ok(Permutation { order })
    }

    pub(crate) fn from_vec_unchecked(order: Vec<usize>) -> Self {
        debug_assert!(Permutation::new(order.clone()).is_ok());
        Permutation { order }
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            order: (1..=n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.order
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.order
    }

    /// Image of element `e` (1-based) under the permutation viewed as a map `i -> order[i]`.
    pub fn apply(&self, e: usize) -> usize {
        self.order[e - 1]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.order.len()];
        for (i, &v) in self.order.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Permutation { order: inv }
    }

    /// `self ∘ other`, i.e. `i -> self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Self {
        Permutation {
            order: other.order.iter().map(|&v| self.order[v - 1]).collect(),
        }
    }

    /// The prefix-sets `∅, {π1}, {π1, π2}, …, [n]`.
    pub fn prefix_chain(&self) -> Vec<ElementSet> {
        let mut chain = Vec::with_capacity(self.order.len() + 1);
        let mut acc = ElementSet::EMPTY;
        chain.push(acc);
        for &v in &self.order {
            acc = acc.with(v);
            chain.push(acc);
        }
        chain
    }

    /// Splits into the permutations induced on consecutive blocks of the ground
    /// set with the given sizes, each renumbered from 1.
    ///
    /// Iterating the two-block split on the leading blocks yields the same parts,
    /// so the parts are read off directly.
    pub fn induced_split(&self, sizes: &[usize]) -> Result<Vec<Permutation>> {
        if sizes.contains(&0) {
            return Err(Error::InvalidSizes("block sizes must be positive".into()));
        }
        let total: usize = sizes.iter().sum();
        if total != self.len() {
            return Err(Error::InvalidSizes(format!(
                "sizes sum to {total}, permutation has length {}",
                self.len()
            )));
        }
        let mut block_of = vec![0usize; total + 1];
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut start = 0;
        for (b, &s) in sizes.iter().enumerate() {
            offsets.push(start);
            block_of[start + 1..=start + s].fill(b);
            start += s;
        }
        let mut parts: Vec<Vec<usize>> = sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
        for &v in &self.order {
            let b = block_of[v];
            parts[b].push(v - offsets[b]);
        }
        Ok(parts
            .into_iter()
            .map(|order| Permutation { order })
            .collect())
    }

    /// Lexicographic rank among all permutations of `[n]` (Lehmer code).
    pub fn rank(&self) -> usize {
        rank_of(&self.order)
    }

    /// Inverse of [`Permutation::rank`].
    pub fn unrank(n: usize, mut rank: usize) -> Self {
        let mut fact = vec![1usize; n + 1];
        for i in 1..=n {
            fact[i] = fact[i - 1] * i;
        }
        let mut pool: Vec<usize> = (1..=n).collect();
        let mut order = Vec::with_capacity(n);
        for i in (0..n).rev() {
            let idx = rank / fact[i];
            rank %= fact[i];
            order.push(pool.remove(idx));
        }
        Permutation { order }
    }

    /// All permutations of `[n]` in lexicographic order.
    pub fn all(n: usize) -> Permutations {
        Permutations {
            next: Some((1..=n).collect()),
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.order {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

pub struct Permutations {
    next: Option<Vec<usize>>,
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_permutation(&mut succ) {
            self.next = Some(succ);
        }
        Some(Permutation { order: current })
    }
}

/// Advances `v` to its lexicographic successor; false when `v` was the last one.
pub fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Lexicographic rank of an ordering of `[n]` given as a slice.
pub fn rank_of(order: &[usize]) -> usize {
    let n = order.len();
    let mut used = 0u64;
    let mut rank = 0usize;
    for (i, &v) in order.iter().enumerate() {
        let smaller_unused = (v - 1) - (used & ((1u64 << (v - 1)) - 1)).count_ones() as usize;
        rank = rank * (n - i) + smaller_unused;
        used |= 1 << (v - 1);
    }
    rank
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn prefix_chain_unrolls() {
        let sets = |c: Vec<ElementSet>| {
            c.iter()
                .map(|s| s.elements().collect::<Vec<_>>())
                .collect::<Vec<_>>()
        };
        assert_eq!(
            sets(p(&[1, 2]).prefix_chain()),
            vec![vec![], vec![1], vec![1, 2]]
        );
        assert_eq!(
            sets(p(&[2, 1]).prefix_chain()),
            vec![vec![], vec![2], vec![1, 2]]
        );
        let chain = sets(p(&[1, 4, 3, 6, 2, 5, 7]).prefix_chain());
        assert_eq!(chain[2], vec![1, 4]);
        assert_eq!(chain[3], vec![1, 3, 4]);
        assert_eq!(chain.len(), 8);
    }

    #[test]
    fn induced_split_example() {
        let parts = p(&[1, 4, 3, 6, 2, 5, 7]).induced_split(&[2, 2, 3]).unwrap();
        assert_eq!(parts, vec![p(&[1, 2]), p(&[2, 1]), p(&[2, 1, 3])]);
    }

    #[test]
    fn induced_split_trivial_cases() {
        let id = Permutation::identity(6);
        assert_eq!(
            id.induced_split(&[3, 3]).unwrap(),
            vec![Permutation::identity(3); 2]
        );
        let q = p(&[3, 1, 2]);
        assert_eq!(q.induced_split(&[3]).unwrap(), vec![q.clone()]);
        assert!(q.induced_split(&[1, 1]).is_err());
        assert!(q.induced_split(&[3, 0]).is_err());
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        assert!(Permutation::new(vec![1, 3]).is_err());
        assert!(Permutation::new(vec![]).is_ok());
    }

    #[test]
    fn enumeration_is_lexicographic_and_ranked() {
        let all: Vec<_> = Permutation::all(4).collect();
        assert_eq!(all.len(), 24);
        for (r, q) in all.iter().enumerate() {
            assert_eq!(q.rank(), r);
            assert_eq!(&Permutation::unrank(4, r), q);
        }
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(Permutation::all(0).count(), 1);
    }

    #[test]
    fn inverse_and_compose() {
        let q = p(&[3, 1, 4, 2]);
        assert_eq!(q.compose(&q.inverse()), Permutation::identity(4));
        assert_eq!(q.inverse().compose(&q), Permutation::identity(4));
    }
}
