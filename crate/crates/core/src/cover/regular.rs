use std::collections::{BTreeSet, HashSet};

use super::CoverFamily;
use crate::error::{Error, Result};
use crate::setsys::{ElementSet, Permutation, SetSystem};

/// Largest ground set for the pairwise check.
pub const REGULAR_CAP: usize = 8;
/// Largest ground set for checks over all relabelings.
pub const SELF_REGULAR_CAP: usize = 6;

/// A set `G ⊆ F1 ∩ F2` such that every permutation supported by both systems
/// has a prefix-set in `G`, and no permutation supported by `F1` alone does.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularWitness {
    /// Ascending by `(cardinality, value)`.
    pub sets: Vec<ElementSet>,
}

fn check_pair(f1: &SetSystem, f2: &SetSystem, cap: usize) -> Result<()> {
    f1.check_ground(f2.n())?;
    if f1.n() > cap {
        return Err(Error::cap("regular intersection check", f1.n(), cap));
    }
    Ok(())
}

fn prefixes(order: &[usize]) -> impl Iterator<Item = ElementSet> + '_ {
    std::iter::once(ElementSet::EMPTY).chain(order.iter().scan(ElementSet::EMPTY, |acc, &e| {
        *acc = acc.with(e);
        Some(*acc)
    }))
}

/// Decides whether `f1` and `f2` are regularly intersecting.
///
/// Returns the largest witness `G* = {s ∈ F1 ∩ F2 : s is not a prefix-set of a
/// permutation supported by F1 but not F2}`. Every witness lies inside `G*` and
/// enlarging a witness within `G*` keeps both conditions, so `G*` works
/// whenever any witness does.
pub fn regularly_intersecting(f1: &SetSystem, f2: &SetSystem) -> Result<Option<RegularWitness>> {
    check_pair(f1, f2, REGULAR_CAP)?;
    let mut forbidden = HashSet::new();
    f1.for_each_supported(|o| {
        if !f2.supports_unchecked(o) {
            forbidden.extend(prefixes(o));
        }
    });
    let g: HashSet<ElementSet> = f1
        .iter()
        .filter(|s| f2.contains(*s) && !forbidden.contains(s))
        .collect();
    let mut ok = true;
    f1.for_each_supported(|o| {
        if ok && f2.supports_unchecked(o) && !prefixes(o).any(|s| g.contains(&s)) {
            ok = false;
        }
    });
    if !ok {
        return Ok(None);
    }
    let mut sets: Vec<ElementSet> = g.into_iter().collect();
    sets.sort_unstable_by_key(|s| (s.len(), s.bits()));
    Ok(Some(RegularWitness { sets }))
}

/// Checks both witness conditions for a given `G`.
pub fn is_regular_witness(f1: &SetSystem, f2: &SetSystem, g: &[ElementSet]) -> Result<bool> {
    check_pair(f1, f2, REGULAR_CAP)?;
    if !g.iter().all(|&s| f1.contains(s) && f2.contains(s)) {
        return Ok(false);
    }
    let g: HashSet<ElementSet> = g.iter().copied().collect();
    let mut ok = true;
    f1.for_each_supported(|o| {
        let hit = prefixes(o).any(|s| g.contains(&s));
        if f2.supports_unchecked(o) != hit {
            ok = false;
        }
    });
    Ok(ok)
}

/// True iff `f` is regularly intersecting with every relabeling of itself.
pub fn regularly_self_intersecting(f: &SetSystem) -> Result<bool> {
    let n = f.n();
    if n > SELF_REGULAR_CAP {
        return Err(Error::cap(
            "regular self-intersection check",
            n,
            SELF_REGULAR_CAP,
        ));
    }
    let mut seen = BTreeSet::new();
    for sigma in Permutation::all(n) {
        let other = f.relabel(&sigma)?;
        if !seen.insert(other.iter().map(ElementSet::bits).collect::<Vec<_>>()) {
            continue;
        }
        if regularly_intersecting(f, &other)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Removes from member `i` the union of the witnesses `G*(F'_i, F'_k)` over
/// all `k < i`, so each permutation stays supported by exactly one member.
pub fn make_unique(family: &CoverFamily) -> Result<CoverFamily> {
    if family.unique {
        return Ok(family.clone());
    }
    if !regularly_self_intersecting(&family.base)? {
        return Err(Error::NotRegular);
    }
    if !family.covers_all()? {
        return Err(Error::NotCovering);
    }
    let members = family.members();
    let mut removed = Vec::with_capacity(members.len());
    for (i, fi) in members.iter().enumerate() {
        let mut g: BTreeSet<(usize, u64)> = BTreeSet::new();
        for fk in &members[..i] {
            let w = regularly_intersecting(fi, fk)?.ok_or(Error::NotRegular)?;
            g.extend(w.sets.iter().map(|s| (s.len(), s.bits())));
        }
        removed.push(
            g.into_iter()
                .map(|(_, b)| ElementSet::from_bits(b))
                .collect(),
        );
    }
    Ok(CoverFamily {
        base: family.base.clone(),
        relabelings: family.relabelings.clone(),
        unique: true,
        removed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{powerset, single_chain};

    #[test]
    fn identical_systems() {
        let f = single_chain(4).unwrap();
        let w = regularly_intersecting(&f, &f).unwrap().unwrap();
        assert_eq!(w.sets.len(), f.len());
        let p = powerset(3).unwrap();
        let q = p
            .relabel(&Permutation::new(vec![3, 1, 2]).unwrap())
            .unwrap();
        assert!(regularly_intersecting(&p, &q).unwrap().is_some());
        assert!(regularly_self_intersecting(&powerset(4).unwrap()).unwrap());
    }

    #[test]
    fn duplicate_powersets_lose_everything() {
        let fam =
            CoverFamily::plain(powerset(3).unwrap(), vec![Permutation::identity(3); 2]).unwrap();
        let u = make_unique(&fam).unwrap();
        assert!(u.member(1).is_empty());
        assert_eq!(u.member(0).len(), 8);
        assert!(u.supports_exactly_once().unwrap());
    }

    #[test]
    fn disjoint_chains_unchanged() {
        let fam =
            CoverFamily::plain(single_chain(3).unwrap(), Permutation::all(3).collect()).unwrap();
        let u = make_unique(&fam).unwrap();
        assert!(u.removed.iter().all(Vec::is_empty));
        assert_eq!(u.members(), fam.members());
    }

    #[test]
    fn witness_check_rejects_bad_sets() {
        let f = powerset(3).unwrap();
        assert!(is_regular_witness(&f, &f, &[ElementSet::EMPTY]).unwrap());
        assert!(!is_regular_witness(&f, &f, &[ElementSet::from_elements([1])]).unwrap());
        assert!(
            regularly_intersecting(&powerset(9).unwrap(), &powerset(9).unwrap())
                .unwrap_err()
                .is_cap_violation()
        );
    }
}
