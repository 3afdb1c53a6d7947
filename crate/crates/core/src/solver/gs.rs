use super::{Solution, TspInstance};
use crate::constructions::k_subsets;

const INF: i64 = i64::MAX;

type Path = (i64, Vec<usize>);

/// Divide and conquer over balanced halves of the tour down to depth
/// `switch_depth`, then fixed-endpoint Held–Karp on the remaining pieces.
///
/// Each level guesses the cities of the first `⌊m/2⌋` positions of the path
/// together with the last city of the first half and the first city of the
/// second half. Ties between equal-cost paths go to the lexicographically
/// smaller one at every level, which makes the final tour the smallest optimum.
pub fn gurevich_shelah(inst: &TspInstance, switch_depth: usize) -> Solution {
    let n = inst.n();
    let all: Vec<usize> = (1..=n).collect();
    let mut best: Option<Path> = None;
    for last in 2..=n {
        let (cost, path) = path(inst, &all, 1, last, switch_depth);
        if cost == INF {
            continue;
        }
        let cand = (cost + inst.d(last, 1), path);
        if best.as_ref().is_none_or(|b| cand < *b) {
            best = Some(cand);
        }
    }
    let (value, tour) = best.expect("complete graph has a tour");
    Solution::new(value, tour)
}

/// Cheapest Hamiltonian path through `cities` from `u` to `v`.
fn path(inst: &TspInstance, cities: &[usize], u: usize, v: usize, depth: usize) -> Path {
    let m = cities.len();
    match m {
        1 => return (0, vec![u]),
        2 => return (inst.d(u, v), vec![u, v]),
        _ => {}
    }
    if depth == 0 {
        return held_karp_path(inst, cities, u, v);
    }
    let inner: Vec<usize> = cities
        .iter()
        .copied()
        .filter(|&c| c != u && c != v)
        .collect();
    let first_size = m / 2;
    let mut best: Option<Path> = None;
    for mask in k_subsets(inner.len(), first_size - 1) {
        let mut first = vec![u];
        let mut second = Vec::with_capacity(m - first_size);
        for (i, &c) in inner.iter().enumerate() {
            if mask >> i & 1 == 1 {
                first.push(c);
            } else {
                second.push(c);
            }
        }
        second.push(v);
        for &x in &first {
            if x == u && first.len() > 1 {
                continue;
            }
            let left = path(inst, &first, u, x, depth - 1);
            if left.0 == INF {
                continue;
            }
            for &y in &second {
                if y == v && second.len() > 1 {
                    continue;
                }
                let right = path(inst, &second, y, v, depth - 1);
                if right.0 == INF {
                    continue;
                }
                let cost = left.0 + inst.d(x, y) + right.0;
                if best.as_ref().is_some_and(|b| cost > b.0) {
                    continue;
                }
                let mut joined = left.1.clone();
                joined.extend_from_slice(&right.1);
                let cand = (cost, joined);
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
    }
    best.unwrap_or((INF, Vec::new()))
}

/// Fixed-endpoint Held–Karp on `cities`, lexicographic tie-breaking by forward reconstruction.
fn held_karp_path(inst: &TspInstance, cities: &[usize], u: usize, v: usize) -> Path {
    // Local bits over the cities other than u; g[R][c] = cheapest way from c through R ending at v.
    let rest: Vec<usize> = cities.iter().copied().filter(|&c| c != u).collect();
    let k = rest.len();
    let vb = rest.iter().position(|&c| c == v).expect("v in cities");
    let full = (1usize << k) - 1;
    let mut g = vec![INF; (1usize << k) * k];
    for r in 0..=full {
        for c in 0..k {
            if r >> c & 1 == 1 {
                continue;
            }
            let val = if r == 0 {
                if c == vb {
                    0
                } else {
                    INF
                }
            } else if c == vb {
                INF
            } else {
                let mut best = INF;
                let mut bits = r;
                while bits != 0 {
                    let nb = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let tail = g[(r & !(1 << nb)) * k + nb];
                    if tail != INF {
                        best = best.min(inst.d(rest[c], rest[nb]) + tail);
                    }
                }
                best
            };
            g[r * k + c] = val;
        }
    }
    // Candidate next cities are tried in increasing city order.
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&b| rest[b]);
    let step = |from: usize, r: usize, b: usize| -> i64 {
        let tail = g[(r & !(1 << b)) * k + b];
        if tail == INF {
            INF
        } else {
            inst.d(from, rest[b]) + tail
        }
    };
    let value = (0..k).map(|b| step(u, full, b)).min().unwrap_or(INF);
    if value == INF {
        return (INF, Vec::new());
    }
    let mut out = vec![u];
    let (mut from, mut r, mut target) = (u, full, value);
    while r != 0 {
        let b = *order
            .iter()
            .find(|&&b| r >> b & 1 == 1 && step(from, r, b) == target)
            .expect("optimum attained");
        out.push(rest[b]);
        target = g[(r & !(1 << b)) * k + b];
        r &= !(1 << b);
        from = rest[b];
    }
    (value, out)
}
