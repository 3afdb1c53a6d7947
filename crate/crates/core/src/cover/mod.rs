//! Families of relabeled copies of one set system that jointly support every
//! permutation, and the overlap removal that makes the support unique.

mod build;
mod io;
mod regular;

pub use build::{
    exact_min_cover, greedy_prune, prescribed_family_size, random_cover, EXACT_COVER_CAP,
};
pub use io::FamilyFile;
pub use regular::{
    is_regular_witness, make_unique, regularly_intersecting, regularly_self_intersecting,
    RegularWitness, REGULAR_CAP, SELF_REGULAR_CAP,
};

use crate::error::{Error, Result};
use crate::setsys::{factorial, rank_of, ElementSet, Permutation, SetSystem};

/// Largest ground set on which coverage is checked by enumerating permutations.
pub const ENUMERATION_CAP: usize = 10;

/// `F_j = relabel(base, σ_j) \ G_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverFamily {
    pub base: SetSystem,
    pub relabelings: Vec<Permutation>,
    /// Every permutation is supported by exactly one member.
    pub unique: bool,
    /// Sets removed from each member; empty lists in plain mode.
    pub removed: Vec<Vec<ElementSet>>,
}

impl CoverFamily {
    pub fn plain(base: SetSystem, relabelings: Vec<Permutation>) -> Result<Self> {
        for s in &relabelings {
            base.check_ground(s.len())?;
        }
        let removed = vec![Vec::new(); relabelings.len()];
        Ok(CoverFamily {
            base,
            relabelings,
            unique: false,
            removed,
        })
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn len(&self) -> usize {
        self.relabelings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relabelings.is_empty()
    }

    pub fn member(&self, j: usize) -> SetSystem {
        let relabeled = self
            .base
            .relabel(&self.relabelings[j])
            .expect("relabelings validated on construction");
        if self.removed[j].is_empty() {
            return relabeled;
        }
        let removed = SetSystem::from_sets(self.n(), self.removed[j].iter().copied())
            .expect("removed sets in range");
        relabeled.difference(&removed).expect("same ground set")
    }

    pub fn members(&self) -> Vec<SetSystem> {
        (0..self.len()).map(|j| self.member(j)).collect()
    }

    /// Number of members supporting each permutation, indexed by lexicographic rank.
    pub fn support_multiplicity(&self) -> Result<Vec<u32>> {
        let n = self.n();
        if n > ENUMERATION_CAP {
            return Err(Error::cap("coverage enumeration", n, ENUMERATION_CAP));
        }
        let mut hits = vec![0u32; factorial(n)];
        for m in self.members() {
            m.for_each_supported(|o| hits[rank_of(o)] += 1);
        }
        Ok(hits)
    }

    /// Every permutation of `[n]` is supported by some member.
    pub fn covers_all(&self) -> Result<bool> {
        Ok(self.support_multiplicity()?.iter().all(|&h| h >= 1))
    }

    /// Every permutation of `[n]` is supported by exactly one member.
    pub fn supports_exactly_once(&self) -> Result<bool> {
        Ok(self.support_multiplicity()?.iter().all(|&h| h == 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{powerset, single_chain};

    #[test]
    fn members_and_coverage() {
        let fam = CoverFamily::plain(powerset(3).unwrap(), vec![Permutation::identity(3)]).unwrap();
        assert!(fam.covers_all().unwrap());
        assert!(fam.supports_exactly_once().unwrap());

        let chains: Vec<Permutation> = Permutation::all(3).collect();
        let fam = CoverFamily::plain(single_chain(3).unwrap(), chains).unwrap();
        assert!(fam.supports_exactly_once().unwrap());
        assert_eq!(fam.member(1).len(), 4);

        let fam =
            CoverFamily::plain(single_chain(3).unwrap(), vec![Permutation::identity(3)]).unwrap();
        assert!(!fam.covers_all().unwrap());
        assert!(
            CoverFamily::plain(single_chain(3).unwrap(), vec![Permutation::identity(4)]).is_err()
        );
    }
}
