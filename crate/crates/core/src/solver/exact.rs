use super::{Solution, TspInstance};
use crate::error::{Error, Result};
use crate::setsys::next_permutation;

pub const BRUTE_FORCE_CAP: usize = 11;
pub const HELD_KARP_CAP: usize = 24;

/// Enumerates all `(n-1)!` tours starting at city 1, in lexicographic order.
pub fn brute_force(inst: &TspInstance) -> Result<Solution> {
    let n = inst.n();
    if n > BRUTE_FORCE_CAP {
        return Err(Error::cap("brute force", n, BRUTE_FORCE_CAP));
    }
    let mut order: Vec<usize> = (1..=n).collect();
    let mut best = Solution::new(inst.tour_cost(&order), order.clone());
    while next_permutation(&mut order[1..]) {
        let cost = inst.tour_cost(&order);
        if cost < best.value {
            best = Solution::new(cost, order.clone());
        }
    }
    Ok(best)
}

/// Bellman–Held–Karp with city 1 as the anchor.
///
/// The table holds the cheapest completion `g(R, c)`: from city `c`, visit every
/// city of `R` and return to city 1. Walking forward and always taking the
/// smallest next city that keeps the optimum yields the lexicographically
/// smallest optimal tour without back-pointers.
pub fn held_karp(inst: &TspInstance) -> Result<Solution> {
    let n = inst.n();
    if n > HELD_KARP_CAP {
        return Err(Error::cap("Held-Karp", n, HELD_KARP_CAP));
    }
    // Cities 2..=n are bits 0..m.
    let m = n - 1;
    let city = |bit: usize| bit + 2;
    let full = (1usize << m) - 1;
    let mut g = vec![i64::MAX; (1usize << m) * m];
    for r in 0..=full {
        for c in 0..m {
            if r >> c & 1 == 1 {
                continue;
            }
            let v = if r == 0 {
                inst.d(city(c), 1)
            } else {
                let mut best = i64::MAX;
                let mut bits = r;
                while bits != 0 {
                    let next = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let cand = inst.d(city(c), city(next)) + g[(r & !(1 << next)) * m + next];
                    best = best.min(cand);
                }
                best
            };
            g[r * m + c] = v;
        }
    }
    let first_leg = |c: usize| inst.d(1, city(c)) + g[(full & !(1 << c)) * m + c];
    let value = (0..m).map(first_leg).min().expect("n >= 2");

    let mut tour = Vec::with_capacity(n);
    tour.push(1);
    let mut cur = (0..m)
        .find(|&c| first_leg(c) == value)
        .expect("optimum attained");
    let mut rest = full & !(1 << cur);
    tour.push(city(cur));
    while rest != 0 {
        let target = g[rest * m + cur];
        let next = (0..m)
            .filter(|&c| rest >> c & 1 == 1)
            .find(|&c| inst.d(city(cur), city(c)) + g[(rest & !(1 << c)) * m + c] == target)
            .expect("optimum attained");
        tour.push(city(next));
        rest &= !(1 << next);
        cur = next;
    }
    Ok(Solution::new(value, tour))
}
