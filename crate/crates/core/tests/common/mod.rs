//! Reference implementations written directly from the definitions, kept
//! independent of the library code paths they check.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use chainfold::solver::TspInstance;
use chainfold::SetSystem;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// All orderings of `1..=n` in lexicographic order.
pub fn perms(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for e in 1..=n {
            if !used[e] {
                used[e] = true;
                cur.push(e);
                go(n, cur, used, out);
                cur.pop();
                used[e] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut vec![false; n + 1], &mut out);
    out
}

pub fn bits(f: &SetSystem) -> HashSet<u64> {
    f.iter().map(|s| s.bits()).collect()
}

/// Every prefix of `order`, the empty one included, lies in `sets`.
pub fn supports(sets: &HashSet<u64>, order: &[usize]) -> bool {
    let mut acc = 0u64;
    if !sets.contains(&acc) {
        return false;
    }
    order.iter().all(|&e| {
        acc |= 1 << (e - 1);
        sets.contains(&acc)
    })
}

/// Maximal chains `∅ ⊊ … ⊊ [n]` through `sets`, one element added per step.
pub fn chain_count(n: usize, sets: &HashSet<u64>) -> BigUint {
    let mut sorted: Vec<u64> = sets.iter().copied().collect();
    sorted.sort_by_key(|s| (s.count_ones(), *s));
    let mut ways: HashMap<u64, BigUint> = HashMap::new();
    for s in sorted {
        let w = if s == 0 {
            BigUint::one()
        } else {
            (0..n)
                .filter(|i| s >> i & 1 == 1)
                .filter_map(|i| ways.get(&(s & !(1 << i))))
                .sum()
        };
        ways.insert(s, w);
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    ways.get(&full).cloned().unwrap_or_else(BigUint::zero)
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `(n!/C)^{1/n}`
pub fn density_p(n: usize, chains: &BigUint) -> f64 {
    let ratio = factorial(n).to_f64().unwrap() / chains.to_f64().unwrap();
    ratio.powf(1.0 / n as f64)
}

/// Cheapest closed tour by trying every order that starts at city 1.
pub fn tsp_oracle(inst: &TspInstance) -> i64 {
    let n = inst.n();
    if n == 1 {
        return 0;
    }
    let mut best = i64::MAX;
    for rest in perms(n - 1) {
        let mut cost = 0;
        let mut prev = 1;
        for &c in &rest {
            cost += inst.d(prev, c + 1);
            prev = c + 1;
        }
        best = best.min(cost + inst.d(prev, 1));
    }
    best
}

/// `sets` with element `e` renamed to `sigma[e - 1]`.
pub fn relabel(sets: &HashSet<u64>, sigma: &[usize]) -> HashSet<u64> {
    sets.iter()
        .map(|&s| {
            (0..sigma.len())
                .filter(|i| s >> i & 1 == 1)
                .fold(0u64, |acc, i| acc | 1 << (sigma[i] - 1))
        })
        .collect()
}

/// `H(x)` in bits.
pub fn entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}
