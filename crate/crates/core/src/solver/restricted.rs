use super::{Solution, TspInstance};
use crate::error::Result;
use crate::setsys::{ElementSet, SetSystem};

const INF: i64 = i64::MAX;

/// Resource counters of one [`restricted_dp`] run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RestrictedStats {
    /// Largest number of cost entries allocated at once.
    pub peak_entries: usize,
    /// First cities for which the DP was run.
    pub starts: usize,
    /// Relaxed `(set, last) -> (set + e, e)` transitions.
    pub transitions: u64,
}

/// Cheapest tour among the permutations supported by `f`, or `None` when `f` supports none.
pub fn restricted_dp(inst: &TspInstance, f: &SetSystem) -> Result<Option<Solution>> {
    Ok(restricted_dp_with_stats(inst, f)?.0)
}

/// [`restricted_dp`] with its resource counters.
///
/// Runs once per first city `s` with `{s} ∈ F`. States are `(A, c)` with
/// `A ∈ F`, `s, c ∈ A`; the table stores the cheapest completion from `(A, c)`
/// through sets of `F` to `[n]` and back to `s`, using `n` entries per set.
pub fn restricted_dp_with_stats(
    inst: &TspInstance,
    f: &SetSystem,
) -> Result<(Option<Solution>, RestrictedStats)> {
    let n = inst.n();
    f.check_ground(n)?;
    let mut stats = RestrictedStats::default();
    if !f.contains(ElementSet::EMPTY) || !f.contains(ElementSet::full(n)) {
        return Ok((None, stats));
    }
    let mut offset = vec![0usize; n + 2];
    for k in 0..=n {
        offset[k + 1] = offset[k] + f.level(k).len();
    }
    let index =
        |s: ElementSet| -> Option<usize> { f.index_in_level(s).map(|i| offset[s.len()] + i) };
    // Successors of each set: (added element, global index).
    let succ: Vec<Vec<(usize, usize)>> = f
        .iter()
        .map(|a| {
            (1..=n)
                .filter(|&e| !a.contains(e))
                .filter_map(|e| index(a.with(e)).map(|j| (e, j)))
                .collect()
        })
        .collect();

    let entries = offset[n + 1] * n;
    stats.peak_entries = entries;
    let mut h = vec![INF; entries];
    let at = |set: usize, c: usize| set * n + (c - 1);
    let full = offset[n];
    let mut best: Option<Solution> = None;

    for s in 1..=n {
        let Some(start) = index(ElementSet::EMPTY.with(s)) else {
            continue;
        };
        stats.starts += 1;
        h.fill(INF);
        for c in 1..=n {
            if c != s {
                h[at(full, c)] = inst.d(c, s);
            }
        }
        for k in (1..n).rev() {
            for (pos, &a) in f.level(k).iter().enumerate() {
                if !a.contains(s) {
                    continue;
                }
                let i = offset[k] + pos;
                for c in a.elements() {
                    if (k == 1) != (c == s) {
                        continue;
                    }
                    let mut v = INF;
                    for &(e, j) in &succ[i] {
                        stats.transitions += 1;
                        let tail = h[at(j, e)];
                        if tail != INF {
                            v = v.min(inst.d(c, e) + tail);
                        }
                    }
                    h[at(i, c)] = v;
                }
            }
        }
        let value = h[at(start, s)];
        if value == INF || best.as_ref().is_some_and(|b| b.value <= value) {
            continue;
        }
        let mut tour = vec![s];
        let (mut i, mut c) = (start, s);
        while tour.len() < n {
            let target = h[at(i, c)];
            let &(e, j) = succ[i]
                .iter()
                .find(|&&(e, j)| h[at(j, e)] != INF && inst.d(c, e) + h[at(j, e)] == target)
                .expect("optimum attained");
            tour.push(e);
            (i, c) = (j, e);
        }
        best = Some(Solution::new(value, tour));
    }
    Ok((best, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{powerset, single_chain};
    use crate::solver::held_karp;

    #[test]
    fn powerset_matches_held_karp() {
        for seed in 0..10 {
            let inst = TspInstance::random(7, seed, 40).unwrap();
            let (sol, stats) = restricted_dp_with_stats(&inst, &powerset(7).unwrap()).unwrap();
            assert_eq!(sol.unwrap(), held_karp(&inst).unwrap());
            assert_eq!(stats.peak_entries, 7 * 128);
            assert_eq!(stats.starts, 7);
        }
    }

    #[test]
    fn single_chain_gives_identity_tour() {
        let inst = TspInstance::random(6, 1, 40).unwrap();
        let sol = restricted_dp(&inst, &single_chain(6).unwrap())
            .unwrap()
            .unwrap();
        assert_eq!(sol.tour.as_slice(), &[1, 2, 3, 4, 5, 6]);
        assert_eq!(sol.value, inst.tour_cost(&[1, 2, 3, 4, 5, 6]));
    }

    #[test]
    fn empty_system_is_infeasible() {
        let inst = TspInstance::random(4, 1, 40).unwrap();
        assert!(restricted_dp(&inst, &SetSystem::empty(4).unwrap())
            .unwrap()
            .is_none());
        assert!(restricted_dp(&inst, &powerset(5).unwrap()).is_err());
    }
}
