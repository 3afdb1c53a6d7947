use num_bigint::BigUint;
use num_integer::Integer;

use super::{CoverFamily, ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::rng::{random_permutation, seeded};
use crate::setsys::{big_factorial, factorial, rank_of, Permutation, SetSystem};

/// Largest ground set for the exact branch-and-bound cover.
pub const EXACT_COVER_CAP: usize = 5;

/// Ranks of `σ ∘ π` for every `π` supported by the base.
fn relabeled_ranks<'a>(
    supported: &'a [Vec<usize>],
    sigma: &Permutation,
) -> impl Iterator<Item = usize> + 'a {
    let sigma = sigma.clone();
    let mut buf = Vec::new();
    supported.iter().map(move |p| {
        buf.clear();
        buf.extend(p.iter().map(|&e| sigma.apply(e)));
        rank_of(&buf)
    })
}

fn supported_orders(base: &SetSystem) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    base.for_each_supported(|o| out.push(o.to_vec()));
    if out.is_empty() {
        return Err(Error::InvalidParameters(
            "base system supports no permutation".into(),
        ));
    }
    Ok(out)
}

/// The family size `⌈(n!/C(F)) · n²⌉` that makes a uniformly random family
/// cover every permutation with high probability; `None` when `C(F) = 0`.
pub fn prescribed_family_size(base: &SetSystem) -> Option<BigUint> {
    let c = base.count_chains();
    if c.is_zero() {
        return None;
    }
    let n = base.n();
    let num = big_factorial(n) * BigUint::from(n * n);
    Some(num.div_ceil(c.value()))
}

/// Draws relabelings from the seeded generator until every permutation of
/// `[n]` is supported. The identity comes first; a draw is kept only when it
/// supports some permutation not yet covered.
pub fn random_cover(base: &SetSystem, seed: u64, max_tries: usize) -> Result<CoverFamily> {
    let n = base.n();
    if n > ENUMERATION_CAP {
        return Err(Error::cap("coverage enumeration", n, ENUMERATION_CAP));
    }
    let supported = supported_orders(base)?;
    let total = factorial(n);
    let mut covered = vec![false; total];
    let mut remaining = total;
    let mut rng = seeded(seed);
    let mut relabelings = Vec::new();
    let mut tries = 0;
    while remaining > 0 {
        if tries == max_tries {
            return Err(Error::CoverageFailed {
                tries,
                uncovered: remaining,
            });
        }
        let sigma = if tries == 0 {
            Permutation::identity(n)
        } else {
            random_permutation(&mut rng, n)
        };
        tries += 1;
        let mut gained = 0;
        for r in relabeled_ranks(&supported, &sigma) {
            if !covered[r] {
                covered[r] = true;
                gained += 1;
            }
        }
        if gained > 0 {
            remaining -= gained;
            relabelings.push(sigma);
        }
    }
    CoverFamily::plain(base.clone(), relabelings)
}

/// Greedy set cover over the members' supports: repeatedly keeps the member
/// covering the most uncovered permutations (lowest index on ties). Kept
/// members stay in their original order.
pub fn greedy_prune(family: &CoverFamily) -> Result<CoverFamily> {
    if family.unique {
        return Err(Error::InvalidParameters(
            "greedy pruning applies to plain families".into(),
        ));
    }
    let n = family.n();
    if n > ENUMERATION_CAP {
        return Err(Error::cap("coverage enumeration", n, ENUMERATION_CAP));
    }
    let supports: Vec<Vec<usize>> = family
        .members()
        .iter()
        .map(|m| {
            let mut ranks = Vec::new();
            m.for_each_supported(|o| ranks.push(rank_of(o)));
            ranks
        })
        .collect();
    let total = factorial(n);
    let mut covered = vec![false; total];
    let mut remaining = total;
    let mut kept = vec![false; family.len()];
    while remaining > 0 {
        let (best, gain) = supports
            .iter()
            .enumerate()
            .filter(|(j, _)| !kept[*j])
            .map(|(j, s)| (j, s.iter().filter(|&&r| !covered[r]).count()))
            .fold(
                (usize::MAX, 0),
                |acc, (j, g)| if g > acc.1 { (j, g) } else { acc },
            );
        if gain == 0 {
            return Err(Error::NotCovering);
        }
        kept[best] = true;
        for &r in &supports[best] {
            covered[r] = true;
        }
        remaining -= gain;
    }
    let relabelings = family
        .relabelings
        .iter()
        .zip(&kept)
        .filter(|(_, &k)| k)
        .map(|(s, _)| s.clone())
        .collect();
    CoverFamily::plain(family.base.clone(), relabelings)
}

/// A minimum-cardinality family of relabelings of `base` supporting every
/// permutation, by branch and bound over all `n!` relabelings.
pub fn exact_min_cover(base: &SetSystem) -> Result<CoverFamily> {
    let n = base.n();
    if n > EXACT_COVER_CAP {
        return Err(Error::cap("exact cover", n, EXACT_COVER_CAP));
    }
    let supported = supported_orders(base)?;
    let total = factorial(n);
    let full: u128 = (1u128 << total) - 1;

    // One candidate per distinct support, first relabeling in lexicographic order.
    let mut cands: Vec<(u128, Permutation)> = Vec::new();
    for sigma in Permutation::all(n) {
        let mask = relabeled_ranks(&supported, &sigma).fold(0u128, |m, r| m | 1 << r);
        if !cands.iter().any(|(m, _)| *m == mask) {
            cands.push((mask, sigma));
        }
    }
    // Drop candidates whose support is strictly contained in another's.
    let masks: Vec<u128> = cands.iter().map(|c| c.0).collect();
    cands.retain(|(m, _)| !masks.iter().any(|&o| o != *m && *m & !o == 0));

    let widest = cands.iter().map(|c| c.0.count_ones()).max().unwrap_or(1);
    let mut search = Search {
        cands: &cands,
        widest,
        best: greedy_order(&cands, full),
        chosen: Vec::new(),
    };
    search.run(full);
    let mut picked = search.best;
    picked.sort_unstable();
    CoverFamily::plain(
        base.clone(),
        picked.into_iter().map(|i| cands[i].1.clone()).collect(),
    )
}

fn greedy_order(cands: &[(u128, Permutation)], full: u128) -> Vec<usize> {
    let mut uncovered = full;
    let mut picked = Vec::new();
    while uncovered != 0 {
        let (j, _) = cands
            .iter()
            .enumerate()
            .map(|(j, c)| (j, (c.0 & uncovered).count_ones()))
            .fold((0, 0), |acc, x| if x.1 > acc.1 { x } else { acc });
        picked.push(j);
        uncovered &= !cands[j].0;
    }
    picked
}

struct Search<'a> {
    cands: &'a [(u128, Permutation)],
    widest: u32,
    best: Vec<usize>,
    chosen: Vec<usize>,
}

impl Search<'_> {
    fn run(&mut self, uncovered: u128) {
        if uncovered == 0 {
            if self.chosen.len() < self.best.len() {
                self.best = self.chosen.clone();
            }
            return;
        }
        let needed = uncovered.count_ones().div_ceil(self.widest) as usize;
        if self.chosen.len() + needed >= self.best.len() {
            return;
        }
        // Branch on the uncovered permutation with the fewest candidates.
        let mut pivot = 0;
        let mut fewest = usize::MAX;
        let mut bits = uncovered;
        while bits != 0 {
            let r = bits.trailing_zeros();
            bits &= bits - 1;
            let k = self.cands.iter().filter(|c| c.0 >> r & 1 == 1).count();
            if k < fewest {
                fewest = k;
                pivot = r;
            }
        }
        for j in 0..self.cands.len() {
            let mask = self.cands[j].0;
            if mask >> pivot & 1 == 1 {
                self.chosen.push(j);
                self.run(uncovered & !mask);
                self.chosen.pop();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{powerset, single_chain, tower_of_cubes};

    #[test]
    fn powerset_needs_one_member() {
        let fam = random_cover(&powerset(4).unwrap(), 0, 10).unwrap();
        assert_eq!(fam.relabelings, vec![Permutation::identity(4)]);
        assert_eq!(exact_min_cover(&powerset(3).unwrap()).unwrap().len(), 1);
    }

    #[test]
    fn chains_need_one_member_per_permutation() {
        let fam = random_cover(&single_chain(3).unwrap(), 11, 1000).unwrap();
        assert!(fam.covers_all().unwrap());
        assert_eq!(greedy_prune(&fam).unwrap().len(), 6);
        assert_eq!(
            exact_min_cover(&single_chain(4).unwrap()).unwrap().len(),
            24
        );
    }

    #[test]
    fn tower_cover_sizes() {
        let base = tower_of_cubes(2, 2).unwrap();
        let exact = exact_min_cover(&base).unwrap();
        assert!(exact.covers_all().unwrap());
        assert_eq!(exact.len(), 6);
        let fam = random_cover(&base, 3, 10_000).unwrap();
        let pruned = greedy_prune(&fam).unwrap();
        assert!(pruned.covers_all().unwrap());
        assert!(pruned.len() >= exact.len());
    }

    #[test]
    fn duplicates_collapse() {
        let base = powerset(3).unwrap();
        let fam = CoverFamily::plain(base, vec![Permutation::identity(3); 3]).unwrap();
        assert_eq!(greedy_prune(&fam).unwrap().len(), 1);
    }

    #[test]
    fn failures() {
        let empty = SetSystem::empty(3).unwrap();
        assert!(random_cover(&empty, 0, 10).is_err());
        assert!(matches!(
            random_cover(&single_chain(4).unwrap(), 0, 3),
            Err(Error::CoverageFailed { tries: 3, .. })
        ));
        assert!(exact_min_cover(&powerset(6).unwrap())
            .unwrap_err()
            .is_cap_violation());
        let partial =
            CoverFamily::plain(single_chain(3).unwrap(), vec![Permutation::identity(3)]).unwrap();
        assert!(matches!(greedy_prune(&partial), Err(Error::NotCovering)));
    }

    #[test]
    fn prescribed_size() {
        // n!/C · n² for the tower on [4]: 24/4 · 16.
        assert_eq!(
            prescribed_family_size(&tower_of_cubes(2, 2).unwrap()).unwrap(),
            BigUint::from(96u32)
        );
        assert!(prescribed_family_size(&SetSystem::empty(3).unwrap()).is_none());
    }
}
