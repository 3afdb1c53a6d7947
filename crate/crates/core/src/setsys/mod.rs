//! Set systems over `[n]`, their maximal chains, and the operations used to
//! combine and compare them.
//!
//! A set is an `n`-bit word ([`ElementSet`]); a [`SetSystem`] keeps its sets
//! grouped by cardinality, each level sorted and duplicate free, so chain
//! counting is a single upward sweep and membership is a binary search.

mod chains;
mod io;
mod perm;

use std::fmt;

pub use chains::{big_factorial, big_log2, ChainCount, Metrics, ORACLE_CAP};
pub use perm::{factorial, next_permutation, rank_of, Permutation, Permutations};

use crate::error::{Error, Result};

/// Largest ground set for which the full powerset may be materialized.
pub const POWERSET_CAP: usize = 28;
/// Largest ground set representable in a 64-bit word.
pub const SPARSE_CAP: usize = 63;

/// A subset of `[n]`; element `e` (1-based) is bit `e - 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet(u64);

impl ElementSet {
    pub const EMPTY: ElementSet = ElementSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        ElementSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// `[n]` itself.
    pub fn full(n: usize) -> Self {
        ElementSet(low_mask(n))
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> Self {
        ElementSet(elements.into_iter().fold(0, |acc, e| acc | 1 << (e - 1)))
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn contains(self, e: usize) -> bool {
        self.0 >> (e - 1) & 1 == 1
    }

    #[must_use]
    pub const fn with(self, e: usize) -> Self {
        ElementSet(self.0 | 1 << (e - 1))
    }

    #[must_use]
    pub const fn without(self, e: usize) -> Self {
        ElementSet(self.0 & !(1 << (e - 1)))
    }

    pub const fn union(self, other: ElementSet) -> Self {
        ElementSet(self.0 | other.0)
    }

    pub const fn intersection(self, other: ElementSet) -> Self {
        ElementSet(self.0 & other.0)
    }

    pub const fn is_subset(self, other: ElementSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// `{e + k : e ∈ self}`.
    #[must_use]
    pub const fn shifted(self, k: usize) -> Self {
        ElementSet(self.0 << k)
    }

    /// Elements in increasing order.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let e = bits.trailing_zeros() as usize + 1;
                bits &= bits - 1;
                Some(e)
            }
        })
    }

    /// Image under `e -> sigma(e)`.
    pub fn relabeled(self, sigma: &Permutation) -> Self {
        ElementSet::from_elements(self.elements().map(|e| sigma.apply(e)))
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::LowerHex for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::LowerHex::fmt(&self.0, f)
    }
}

pub(crate) const fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A collection of subsets of `[n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetSystem {
    n: usize,
    levels: Vec<Vec<ElementSet>>,
}

impl SetSystem {
    /// The system with no sets at all.
    pub fn empty(n: usize) -> Result<Self> {
        check_sparse(n)?;
        Ok(SetSystem {
            n,
            levels: vec![Vec::new(); n + 1],
        })
    }

    /// Builds a system from arbitrary sets; duplicates are dropped.
    pub fn from_sets<I: IntoIterator<Item = ElementSet>>(n: usize, sets: I) -> Result<Self> {
        check_sparse(n)?;
        let mut levels = vec![Vec::new(); n + 1];
        let outside = !low_mask(n);
        for s in sets {
            if s.bits() & outside != 0 {
                return Err(Error::SetOutOfRange { mask: s.bits(), n });
            }
            levels[s.len()].push(s);
        }
        for level in &mut levels {
            level.sort_unstable();
            level.dedup();
        }
        Ok(SetSystem { n, levels })
    }

    /// Builds from levels already sorted and duplicate free, with correct popcounts.
    pub(crate) fn from_levels_unchecked(n: usize, levels: Vec<Vec<ElementSet>>) -> Self {
        debug_assert_eq!(levels.len(), n + 1);
        debug_assert!(levels
            .iter()
            .enumerate()
            .all(|(k, l)| l.windows(2).all(|w| w[0] < w[1]) && l.iter().all(|s| s.len() == k)));
        SetSystem { n, levels }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of sets, `|F|`.
    pub fn len(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.iter().all(Vec::is_empty)
    }

    /// Sets of cardinality `k`, ascending.
    pub fn level(&self, k: usize) -> &[ElementSet] {
        &self.levels[k]
    }

    pub fn levels(&self) -> &[Vec<ElementSet>] {
        &self.levels
    }

    pub fn contains(&self, s: ElementSet) -> bool {
        let k = s.len();
        k <= self.n && s.bits() & !low_mask(self.n) == 0 && self.levels[k].binary_search(&s).is_ok()
    }

    /// Position of `s` within its level.
    pub fn index_in_level(&self, s: ElementSet) -> Option<usize> {
        self.levels.get(s.len())?.binary_search(&s).ok()
    }

    /// All sets, ascending by `(cardinality, value)`.
    pub fn iter(&self) -> impl Iterator<Item = ElementSet> + '_ {
        self.levels.iter().flatten().copied()
    }

    /// True iff every prefix-set of `p` belongs to the system.
    pub fn supports(&self, p: &Permutation) -> Result<bool> {
        self.check_ground(p.len())?;
        Ok(self.supports_unchecked(p.as_slice()))
    }

    pub(crate) fn supports_unchecked(&self, order: &[usize]) -> bool {
        let mut acc = ElementSet::EMPTY;
        if !self.contains(acc) {
            return false;
        }
        for &v in order {
            acc = acc.with(v);
            if !self.contains(acc) {
                return false;
            }
        }
        true
    }

    pub(crate) fn check_ground(&self, n: usize) -> Result<()> {
        if self.n != n {
            return Err(Error::GroundSetMismatch {
                expected: self.n,
                found: n,
            });
        }
        Ok(())
    }

    /// `F1 ⊠ F2 = {s1 ∪ (s2 + n1)}` over `[n1 + n2]`.
    pub fn union_product(&self, other: &SetSystem) -> Result<SetSystem> {
        let n = self.n + other.n;
        check_sparse(n)?;
        let mut levels = vec![Vec::new(); n + 1];
        for (k1, l1) in self.levels.iter().enumerate() {
            for (k2, l2) in other.levels.iter().enumerate() {
                let target = &mut levels[k1 + k2];
                for &s2 in l2 {
                    let hi = s2.shifted(self.n);
                    target.extend(l1.iter().map(|&s1| s1.union(hi)));
                }
            }
        }
        for level in &mut levels {
            level.sort_unstable();
        }
        Ok(SetSystem { n, levels })
    }

    /// Image of every set under `e -> sigma(e)`.
    pub fn relabel(&self, sigma: &Permutation) -> Result<SetSystem> {
        self.check_ground(sigma.len())?;
        let levels = self
            .levels
            .iter()
            .map(|level| {
                let mut mapped: Vec<_> = level.iter().map(|s| s.relabeled(sigma)).collect();
                mapped.sort_unstable();
                mapped
            })
            .collect();
        Ok(SetSystem { n: self.n, levels })
    }

    /// The union of all prefix-sets of the given permutations: the smallest system
    /// supporting each of them.
    pub fn closure_from_permutations<'a, I>(n: usize, perms: I) -> Result<SetSystem>
    where
        I: IntoIterator<Item = &'a Permutation>,
    {
        check_sparse(n)?;
        let mut sets = Vec::new();
        for p in perms {
            if p.len() != n {
                return Err(Error::GroundSetMismatch {
                    expected: n,
                    found: p.len(),
                });
            }
            sets.extend(p.prefix_chain());
        }
        SetSystem::from_sets(n, sets)
    }

    /// Sets of `self` not in `removed`.
    pub fn difference(&self, removed: &SetSystem) -> Result<SetSystem> {
        self.check_ground(removed.n)?;
        let levels = self
            .levels
            .iter()
            .map(|level| {
                level
                    .iter()
                    .copied()
                    .filter(|&s| !removed.contains(s))
                    .collect()
            })
            .collect();
        Ok(SetSystem { n: self.n, levels })
    }

    pub fn intersection(&self, other: &SetSystem) -> Result<SetSystem> {
        self.check_ground(other.n)?;
        let levels = self
            .levels
            .iter()
            .map(|level| {
                level
                    .iter()
                    .copied()
                    .filter(|&s| other.contains(s))
                    .collect()
            })
            .collect();
        Ok(SetSystem { n: self.n, levels })
    }

    pub fn is_subsystem_of(&self, other: &SetSystem) -> bool {
        self.n == other.n && self.iter().all(|s| other.contains(s))
    }
}

pub(crate) fn check_sparse(n: usize) -> Result<()> {
    if n > SPARSE_CAP {
        return Err(Error::cap("sparse set systems", n, SPARSE_CAP));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(n: usize, sets: &[&[usize]]) -> SetSystem {
        SetSystem::from_sets(
            n,
            sets.iter()
                .map(|s| ElementSet::from_elements(s.iter().copied())),
        )
        .unwrap()
    }

    #[test]
    fn union_product_small() {
        let a = sys(1, &[&[], &[1]]);
        let prod = a.union_product(&a).unwrap();
        assert_eq!(prod, sys(2, &[&[], &[1], &[2], &[1, 2]]));
    }

    #[test]
    fn union_product_with_empty_ground_set_is_identity() {
        let f = sys(3, &[&[], &[2], &[2, 3], &[1, 2, 3]]);
        let unit = sys(0, &[&[]]);
        assert_eq!(f.union_product(&unit).unwrap(), f);
        assert_eq!(unit.union_product(&f).unwrap(), f);
    }

    #[test]
    fn union_product_cap() {
        let a = SetSystem::empty(40).unwrap();
        assert!(matches!(
            a.union_product(&a),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn rejects_out_of_range_sets() {
        assert!(SetSystem::from_sets(2, [ElementSet::from_bits(0b100)]).is_err());
        assert!(SetSystem::empty(64).is_err());
    }

    #[test]
    fn supports_single_chain() {
        let chain = sys(3, &[&[], &[1], &[1, 2], &[1, 2, 3]]);
        assert!(chain.supports(&Permutation::identity(3)).unwrap());
        assert!(!chain
            .supports(&Permutation::new(vec![2, 1, 3]).unwrap())
            .unwrap());
        assert!(chain.supports(&Permutation::identity(2)).is_err());
    }

    #[test]
    fn kp_style_support() {
        // Order ideals of two stacked 2-antichains on [4].
        let f = sys(
            4,
            &[
                &[],
                &[1],
                &[2],
                &[1, 2],
                &[1, 2, 3],
                &[1, 2, 4],
                &[1, 2, 3, 4],
            ],
        );
        assert!(f.supports(&Permutation::identity(4)).unwrap());
        assert!(!f
            .supports(&Permutation::new(vec![3, 1, 2, 4]).unwrap())
            .unwrap());
    }

    #[test]
    fn relabel_roundtrip() {
        let f = sys(4, &[&[], &[1], &[1, 3], &[2, 3, 4], &[1, 2, 3, 4]]);
        let sigma = Permutation::new(vec![3, 4, 1, 2]).unwrap();
        assert_eq!(f.relabel(&Permutation::identity(4)).unwrap(), f);
        assert_eq!(
            f.relabel(&sigma)
                .unwrap()
                .relabel(&sigma.inverse())
                .unwrap(),
            f
        );
        assert!(f.relabel(&Permutation::identity(3)).is_err());
    }

    #[test]
    fn closure_examples() {
        let id = Permutation::identity(3);
        assert_eq!(
            SetSystem::closure_from_permutations(3, [&id]).unwrap(),
            sys(3, &[&[], &[1], &[1, 2], &[1, 2, 3]])
        );
        let swap = Permutation::new(vec![2, 1, 3]).unwrap();
        assert_eq!(
            SetSystem::closure_from_permutations(3, [&id, &swap, &id]).unwrap(),
            sys(3, &[&[], &[1], &[2], &[1, 2], &[1, 2, 3]])
        );
        let all: Vec<_> = Permutation::all(3).collect();
        assert_eq!(
            SetSystem::closure_from_permutations(3, &all).unwrap().len(),
            8
        );
    }

    #[test]
    fn element_set_basics() {
        let s = ElementSet::from_elements([1, 3]);
        assert_eq!(s.bits(), 0b101);
        assert_eq!(s.to_string(), "{1,3}");
        assert!(s.contains(3) && !s.contains(2));
        assert_eq!(s.shifted(2), ElementSet::from_elements([3, 5]));
        assert_eq!(ElementSet::full(3).bits(), 0b111);
    }
}
