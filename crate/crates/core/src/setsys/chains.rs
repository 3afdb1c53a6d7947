use std::fmt;
use std::ops::AddAssign;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::{next_permutation, ElementSet, Permutation, SetSystem};
use crate::error::{Error, Result};

/// Largest `n` with `n!` below `u128::MAX`; chain counting stays in machine words up to here.
const U128_FACTORIAL_CAP: usize = 34;
/// Enumeration cap for the permutation-by-permutation oracle.
pub const ORACLE_CAP: usize = 10;

/// Number of maximal chains `C(F)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChainCount(pub BigUint);

impl ChainCount {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl fmt::Display for ChainCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl From<u64> for ChainCount {
    fn from(v: u64) -> Self {
        ChainCount(BigUint::from(v))
    }
}

/// Normalized size and inverse normalized chain density of a set system.
#[derive(Clone, Debug, PartialEq)]
pub struct Metrics {
    pub n: usize,
    pub cardinality: usize,
    pub chains: ChainCount,
    /// `|F|^{1/n}`
    pub size_s: f64,
    /// `(n! / C(F))^{1/n}`, `+∞` when `C(F) = 0`
    pub density_p: f64,
    /// `S² · P`
    pub product_st: f64,
}

impl Metrics {
    pub fn lg_s(&self) -> f64 {
        self.size_s.log2()
    }

    pub fn lg_p(&self) -> f64 {
        self.density_p.log2()
    }

    /// Time base `T = S · P` of the resulting tradeoff.
    pub fn time_t(&self) -> f64 {
        self.size_s * self.density_p
    }
}

impl fmt::Display for Metrics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n {} size {} chains {} S {:.6} P {:.6} S2P {:.6}",
            self.n, self.cardinality, self.chains, self.size_s, self.density_p, self.product_st
        )
    }
}

/// `log2` of a big integer, accurate to double precision.
pub fn big_log2(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 64 {
        return (v.to_u64().unwrap() as f64).log2();
    }
    let shift = bits - 64;
    let top = (v >> shift).to_u64().unwrap();
    (top as f64).log2() + shift as f64
}

pub fn big_factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::from(1u32), |acc, k| acc * k)
}

fn chain_dp<T>(f: &SetSystem) -> T
where
    T: Clone + Zero + for<'a> AddAssign<&'a T>,
    T: From<u8>,
{
    let n = f.n();
    if f.level(0).is_empty() {
        return T::zero();
    }
    let mut prev: Vec<T> = vec![T::from(1u8)];
    for k in 1..=n {
        let lower = f.level(k - 1);
        let cur: Vec<T> = f
            .level(k)
            .iter()
            .map(|&s| {
                let mut acc = T::zero();
                for e in s.elements() {
                    if let Ok(i) = lower.binary_search(&s.without(e)) {
                        acc += &prev[i];
                    }
                }
                acc
            })
            .collect();
        prev = cur;
    }
    prev.into_iter().next().unwrap_or_else(T::zero)
}

impl SetSystem {
    /// Exact number of maximal chains `∅ = S0 ⊊ S1 ⊊ … ⊊ Sn = [n]` inside the system.
    pub fn count_chains(&self) -> ChainCount {
        if self.n() <= U128_FACTORIAL_CAP {
            ChainCount(BigUint::from(chain_dp::<u128>(self)))
        } else {
            ChainCount(chain_dp::<BigUint>(self))
        }
    }

    /// Counts supported permutations by testing every permutation of `[n]`.
    ///
    /// Independent of [`SetSystem::count_chains`]; used as its oracle.
    pub fn supported_permutation_count(&self) -> Result<ChainCount> {
        let n = self.n();
        if n > ORACLE_CAP {
            return Err(Error::cap("permutation enumeration", n, ORACLE_CAP));
        }
        let mut order: Vec<usize> = (1..=n).collect();
        let mut count = 0u64;
        loop {
            if self.supports_unchecked(&order) {
                count += 1;
            }
            if !next_permutation(&mut order) {
                break;
            }
        }
        Ok(ChainCount::from(count))
    }

    pub fn metrics(&self) -> Result<Metrics> {
        let n = self.n();
        if n == 0 {
            return Err(Error::EmptyGroundSet);
        }
        let cardinality = self.len();
        let chains = self.count_chains();
        let size_s = (cardinality as f64).powf(1.0 / n as f64);
        let density_p = if chains.is_zero() {
            f64::INFINITY
        } else {
            let lg = (big_log2(&big_factorial(n)) - big_log2(&chains.0)) / n as f64;
            lg.exp2().max(1.0)
        };
        Ok(Metrics {
            n,
            cardinality,
            chains,
            size_s,
            density_p,
            product_st: size_s * size_s * density_p,
        })
    }

    /// Calls `visit` with every supported permutation, in lexicographic order.
    pub fn for_each_supported<F: FnMut(&[usize])>(&self, mut visit: F) {
        if !self.contains(ElementSet::EMPTY) {
            return;
        }
        let mut order = Vec::with_capacity(self.n());
        self.dfs(ElementSet::EMPTY, &mut order, &mut visit);
    }

    fn dfs<F: FnMut(&[usize])>(&self, s: ElementSet, order: &mut Vec<usize>, visit: &mut F) {
        if order.len() == self.n() {
            visit(order);
            return;
        }
        for e in 1..=self.n() {
            if !s.contains(e) && self.contains(s.with(e)) {
                order.push(e);
                self.dfs(s.with(e), order, visit);
                order.pop();
            }
        }
    }

    /// All supported permutations, lexicographically.
    pub fn supported_permutations(&self) -> Vec<Permutation> {
        let mut out = Vec::new();
        self.for_each_supported(|o| out.push(Permutation::from_vec_unchecked(o.to_vec())));
        out
    }
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

    fn powerset(n: usize) -> SetSystem {
        SetSystem::from_sets(n, (0..1u64 << n).map(ElementSet::from_bits)).unwrap()
    }

    #[test]
    fn counts_small_systems() {
        assert_eq!(powerset(3).count_chains(), ChainCount::from(6));
        let chain = sys(4, &[&[], &[1], &[1, 2], &[1, 2, 3], &[1, 2, 3, 4]]);
        assert_eq!(chain.count_chains(), ChainCount::from(1));
        let tower = sys(
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
        assert_eq!(tower.count_chains(), ChainCount::from(4));
        assert_eq!(
            tower.supported_permutation_count().unwrap(),
            ChainCount::from(4)
        );
        assert_eq!(tower.supported_permutations().len(), 4);
    }

    #[test]
    fn missing_empty_set_means_no_chains() {
        let f = sys(2, &[&[1], &[1, 2]]);
        assert!(f.count_chains().is_zero());
        assert!(f.supported_permutation_count().unwrap().is_zero());
        assert_eq!(f.metrics().unwrap().density_p, f64::INFINITY);
    }

    #[test]
    fn metrics_of_powerset_and_chain() {
        let m = powerset(3).metrics().unwrap();
        assert!((m.size_s - 2.0).abs() < 1e-12);
        assert!((m.density_p - 1.0).abs() < 1e-12);

        let chain = SetSystem::closure_from_permutations(8, [&Permutation::identity(8)]).unwrap();
        let m = chain.metrics().unwrap();
        assert!((m.size_s - 1.3161).abs() < 1e-4);
        assert!((m.density_p - 3.7644).abs() < 1e-4);
        assert!(m.time_t() <= 4.9552);
        assert!((m.time_t() - 4.95416).abs() < 1e-4);
    }

    #[test]
    fn metrics_reject_empty_ground_set() {
        assert!(matches!(
            sys(0, &[&[]]).metrics(),
            Err(Error::EmptyGroundSet)
        ));
    }

    #[test]
    fn big_log2_matches_f64() {
        for v in [1u64, 2, 3, 1 << 40, u64::MAX] {
            assert!((big_log2(&BigUint::from(v)) - (v as f64).log2()).abs() < 1e-12);
        }
        let big = BigUint::from(1u32) << 200u32;
        assert!((big_log2(&big) - 200.0).abs() < 1e-12);
        assert!((big_log2(&big_factorial(26)) - 88.38).abs() < 0.01);
    }

    #[test]
    fn big_integer_path_for_large_ground_sets() {
        // Two stacked antichains of 18 on [36], past the machine-word path.
        let n = 36;
        let mut sets = Vec::new();
        for m in 0..(1u64 << 18) {
            sets.push(ElementSet::from_bits(m));
            sets.push(ElementSet::from_bits((m << 18) | ((1 << 18) - 1)));
        }
        let f = SetSystem::from_sets(n, sets).unwrap();
        let f18 = big_factorial(18);
        assert_eq!(f.count_chains().0, &f18 * &f18);
    }
}
