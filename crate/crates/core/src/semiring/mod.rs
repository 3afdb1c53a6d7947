//! Permutation problems of bounded degree over arbitrary semirings.
//!
//! A problem of degree `d` sums, over all permutations `π` of `[n]`, the product
//! `f_1(π^(1), …) ⊗ … ⊗ f_n(π^(n), …)`, where `f_j` sees the prefix-set of
//! length `j` and the last `min(d, j)` entries of the prefix, in order.

mod poset;

use std::collections::HashMap;
use std::fmt::Debug;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use poset::{count_linear_extensions, linear_extension_problem, Poset};

use crate::cover::CoverFamily;
use crate::error::{Error, Result};
use crate::setsys::{next_permutation, ElementSet, SetSystem};
use crate::solver::TspInstance;

pub const MAX_DEGREE: usize = 3;
pub const EVALUATE_BRUTE_CAP: usize = 8;
pub const EVALUATE_DP_CAP: usize = 20;

pub trait Semiring {
    type Value: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Value;
    fn one(&self) -> Self::Value;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    /// `x ⊕ x = x` for every `x`.
    fn is_idempotent(&self) -> bool;
}

/// `(min, +)` over the integers; `None` is `+∞`.
#[derive(Clone, Copy, Debug, Default)]
pub struct MinPlus;

impl Semiring for MinPlus {
    type Value = Option<i64>;

    fn zero(&self) -> Option<i64> {
        None
    }

    fn one(&self) -> Option<i64> {
        Some(0)
    }

    fn add(&self, a: &Option<i64>, b: &Option<i64>) -> Option<i64> {
        match (a, b) {
            (Some(x), Some(y)) => Some(*x.min(y)),
            _ => a.or(*b),
        }
    }

    fn mul(&self, a: &Option<i64>, b: &Option<i64>) -> Option<i64> {
        Some(
            a.as_ref()?
                .checked_add(*b.as_ref()?)
                .expect("tropical product overflow"),
        )
    }

    fn is_idempotent(&self) -> bool {
        true
    }
}

/// `(+, ·)` over the nonnegative integers.
#[derive(Clone, Copy, Debug, Default)]
pub struct Counting;

impl Semiring for Counting {
    type Value = BigUint;

    fn zero(&self) -> BigUint {
        BigUint::zero()
    }

    fn one(&self) -> BigUint {
        BigUint::one()
    }

    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        a + b
    }

    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        a * b
    }

    fn is_idempotent(&self) -> bool {
        false
    }
}

/// `(max, ·)` over the nonnegative rationals.
#[derive(Clone, Copy, Debug, Default)]
pub struct MaxTimes;

impl Semiring for MaxTimes {
    type Value = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a.max(b).clone()
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn is_idempotent(&self) -> bool {
        true
    }
}

type LocalCost<V> = Box<dyn Fn(ElementSet, &[usize]) -> V + Send + Sync>;

/// A degree-`d` permutation problem: `local_cost(A, tail)` is `f_{|A|}`, where
/// `tail` holds the last `min(d, |A|)` entries of the prefix, oldest first.
pub struct PermutationProblem<R: Semiring> {
    n: usize,
    degree: usize,
    semiring: R,
    local_cost: LocalCost<R::Value>,
}

impl<R: Semiring> PermutationProblem<R> {
    pub fn new<F>(n: usize, degree: usize, semiring: R, local_cost: F) -> Result<Self>
    where
        F: Fn(ElementSet, &[usize]) -> R::Value + Send + Sync + 'static,
    {
        if n == 0 {
            return Err(Error::EmptyGroundSet);
        }
        if degree > MAX_DEGREE {
            return Err(Error::InvalidParameters(format!(
                "degree {degree} exceeds the cap of {MAX_DEGREE}"
            )));
        }
        crate::setsys::check_sparse(n)?;
        Ok(PermutationProblem {
            n,
            degree,
            semiring,
            local_cost: Box::new(local_cost),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn semiring(&self) -> &R {
        &self.semiring
    }

    pub fn local_cost(&self, prefix: ElementSet, tail: &[usize]) -> R::Value {
        (self.local_cost)(prefix, tail)
    }

    /// `f(π)` for one permutation.
    pub fn value_of(&self, order: &[usize]) -> R::Value {
        let r = &self.semiring;
        let mut prefix = ElementSet::EMPTY;
        let mut acc = r.one();
        for (j, &e) in order.iter().enumerate() {
            prefix = prefix.with(e);
            let tail = &order[(j + 1).saturating_sub(self.degree)..=j];
            acc = r.mul(
                &acc,
                &self.local_cost(prefix, if self.degree == 0 { &[] } else { tail }),
            );
        }
        acc
    }
}

/// Folds `f(π)` over all `n!` permutations in lexicographic order.
pub fn evaluate_brute<R: Semiring>(p: &PermutationProblem<R>) -> Result<R::Value> {
    if p.n > EVALUATE_BRUTE_CAP {
        return Err(Error::cap(
            "brute-force evaluation",
            p.n,
            EVALUATE_BRUTE_CAP,
        ));
    }
    let r = &p.semiring;
    let mut order: Vec<usize> = (1..=p.n).collect();
    let mut acc = r.zero();
    loop {
        acc = r.add(&acc, &p.value_of(&order));
        if !next_permutation(&mut order) {
            return Ok(acc);
        }
    }
}

/// Dynamic programming over all prefix-sets.
pub fn evaluate_dp<R: Semiring>(p: &PermutationProblem<R>) -> Result<R::Value> {
    if p.n > EVALUATE_DP_CAP {
        return Err(Error::cap(
            "dynamic-programming evaluation",
            p.n,
            EVALUATE_DP_CAP,
        ));
    }
    Ok(run_dp(p, |_| true))
}

/// `⊕` over the permutations supported by `f`.
pub fn evaluate_on_system<R: Semiring>(
    p: &PermutationProblem<R>,
    f: &SetSystem,
) -> Result<R::Value> {
    f.check_ground(p.n)?;
    if p.n > EVALUATE_DP_CAP {
        return Err(Error::cap(
            "dynamic-programming evaluation",
            p.n,
            EVALUATE_DP_CAP,
        ));
    }
    if !f.contains(ElementSet::EMPTY) {
        return Ok(p.semiring.zero());
    }
    Ok(run_dp(p, |s| f.contains(s)))
}

/// `⊕` over members of the per-member restricted sums. Overlapping supports
/// are harmless only for idempotent addition, so other semirings are refused.
pub fn evaluate_restricted<R: Semiring>(
    p: &PermutationProblem<R>,
    family: &CoverFamily,
) -> Result<R::Value> {
    if !p.semiring.is_idempotent() {
        return Err(Error::NotIdempotent);
    }
    fold_members(p, family)
}

/// Like [`evaluate_restricted`], for any semiring, given a family in which
/// every permutation is supported by exactly one member.
pub fn evaluate_unique<R: Semiring>(
    p: &PermutationProblem<R>,
    family: &CoverFamily,
) -> Result<R::Value> {
    if !family.unique {
        return Err(Error::NotUnique);
    }
    fold_members(p, family)
}

fn fold_members<R: Semiring>(p: &PermutationProblem<R>, family: &CoverFamily) -> Result<R::Value> {
    let mut acc = p.semiring.zero();
    for j in 0..family.len() {
        acc = p
            .semiring
            .add(&acc, &evaluate_on_system(p, &family.member(j))?);
    }
    Ok(acc)
}

/// Tail of up to three elements packed 5 bits apiece above the set bits.
const TAIL_SHIFT: u32 = 40;

fn pack(set: u64, tail: &[usize]) -> u64 {
    tail.iter().fold(0u64, |acc, &e| acc << 5 | e as u64) << TAIL_SHIFT
        | set
        | (tail.len() as u64) << 62
}

fn unpack(key: u64) -> (u64, Vec<usize>) {
    let len = (key >> 62) as usize;
    let mut packed = (key >> TAIL_SHIFT) & ((1 << 20) - 1);
    let mut tail = vec![0; len];
    for slot in tail.iter_mut().rev() {
        *slot = (packed & 31) as usize;
        packed >>= 5;
    }
    (key & ((1 << TAIL_SHIFT) - 1), tail)
}

/// Forward sweep over states `(A, last min(d−1, |A|) entries)` with `A` allowed by `keep`.
fn run_dp<R: Semiring>(p: &PermutationProblem<R>, keep: impl Fn(ElementSet) -> bool) -> R::Value {
    let r = &p.semiring;
    let (n, d) = (p.n, p.degree);
    let mut layer: HashMap<u64, R::Value> = HashMap::from([(pack(0, &[]), r.one())]);
    for _ in 0..n {
        let mut next: HashMap<u64, R::Value> = HashMap::new();
        for (key, value) in &layer {
            let (set, tail) = unpack(*key);
            for e in 1..=n {
                let grown = ElementSet::from_bits(set).with(e);
                if grown.bits() == set || !keep(grown) {
                    continue;
                }
                let mut args = tail.clone();
                args.push(e);
                let seen = &args[args.len().saturating_sub(d)..];
                let v = r.mul(value, &p.local_cost(grown, seen));
                let carry = &args[args.len().saturating_sub(d.saturating_sub(1))..];
                let carry = if d <= 1 { &[][..] } else { carry };
                next.entry(pack(grown.bits(), carry))
                    .and_modify(|acc| *acc = r.add(acc, &v))
                    .or_insert(v);
            }
        }
        layer = next;
    }
    layer.values().fold(r.zero(), |acc, v| r.add(&acc, v))
}

/// Minimum-weight Hamiltonian path: degree 2, `f_j = d(π_{j−1}, π_j)`.
pub fn tsp_path_problem(inst: &TspInstance) -> Result<PermutationProblem<MinPlus>> {
    let inst = inst.clone();
    PermutationProblem::new(inst.n(), 2, MinPlus, move |_, tail| match *tail {
        [x, y] => Some(inst.d(x, y)),
        _ => Some(0),
    })
}

/// Tours as Hamiltonian paths over `n + 1` elements from city 1 to its copy `n + 1`.
pub fn tsp_tour_problem(inst: &TspInstance) -> Result<PermutationProblem<MinPlus>> {
    let inst = inst.clone();
    let n = inst.n();
    let city = move |e: usize| if e == n + 1 { 1 } else { e };
    PermutationProblem::new(n + 1, 2, MinPlus, move |prefix, tail| {
        let last = *tail.last().expect("nonempty prefix");
        let j = prefix.len();
        if (j == 1) != (last == 1) || (j == n + 1) != (last == n + 1) {
            return None;
        }
        match *tail {
            [x, y] => Some(inst.d(city(x), city(y))),
            _ => Some(0),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::powerset;
    use crate::setsys::Permutation;
    use crate::solver::held_karp;

    #[test]
    fn all_one_costs() {
        let count = PermutationProblem::new(5, 0, Counting, |_, _| BigUint::one()).unwrap();
        assert_eq!(evaluate_brute(&count).unwrap(), BigUint::from(120u32));
        assert_eq!(evaluate_dp(&count).unwrap(), BigUint::from(120u32));
        let tropical = PermutationProblem::new(5, 2, MinPlus, |_, _| Some(0)).unwrap();
        assert_eq!(evaluate_brute(&tropical).unwrap(), Some(0));
        assert_eq!(evaluate_dp(&tropical).unwrap(), Some(0));
    }

    #[test]
    fn single_element() {
        let p = PermutationProblem::new(1, 3, Counting, |a, t| {
            BigUint::from(a.bits() * 10 + t.len() as u64)
        })
        .unwrap();
        assert_eq!(evaluate_dp(&p).unwrap(), BigUint::from(11u32));
        assert_eq!(evaluate_brute(&p).unwrap(), BigUint::from(11u32));
    }

    #[test]
    fn tails_are_passed_in_order() {
        let p = PermutationProblem::new(3, 2, Counting, |_, t| BigUint::from(t[0] as u64)).unwrap();
        // f(π) = π1 · π1 · π2 summed over all orders.
        let want: u64 = Permutation::all(3)
            .map(|q| (q.as_slice()[0] * q.as_slice()[0] * q.as_slice()[1]) as u64)
            .sum();
        assert_eq!(evaluate_brute(&p).unwrap(), BigUint::from(want));
        assert_eq!(evaluate_dp(&p).unwrap(), BigUint::from(want));
    }

    #[test]
    fn tour_reduction_matches_held_karp() {
        for seed in 0..5 {
            let inst = TspInstance::random(6, seed, 40).unwrap();
            let p = tsp_tour_problem(&inst).unwrap();
            assert_eq!(
                evaluate_dp(&p).unwrap(),
                Some(held_karp(&inst).unwrap().value)
            );
        }
    }

    #[test]
    fn refuses_unsafe_families() {
        let p = PermutationProblem::new(3, 0, Counting, |_, _| BigUint::one()).unwrap();
        let fam = CoverFamily::plain(powerset(3).unwrap(), vec![Permutation::identity(3)]).unwrap();
        assert!(matches!(
            evaluate_restricted(&p, &fam),
            Err(Error::NotIdempotent)
        ));
        assert!(matches!(evaluate_unique(&p, &fam), Err(Error::NotUnique)));
        assert!(PermutationProblem::new(3, 4, Counting, |_, _| BigUint::one()).is_err());
    }

    #[test]
    fn packing_round_trips() {
        for tail in [&[][..], &[7], &[20, 3], &[1, 19, 20]] {
            let key = pack(0b1011, tail);
            assert_eq!(unpack(key), (0b1011, tail.to_vec()));
        }
    }
}
