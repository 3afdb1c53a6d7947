use num_bigint::BigUint;
use num_integer::Integer;

use super::{better, restricted_dp, Solution, TspInstance};
use crate::constructions::{floor_count, k_subsets};
use crate::error::{Error, Result};
use crate::rng::seeded;
use crate::setsys::{big_log2, low_mask, ElementSet, SetSystem, POWERSET_CAP};

/// Prefix-sets allowed once `S'` holds the first `a` cities of the tour and
/// its complement the last `a`: subsets of `S'`, sets with at least `a`
/// cities of `S'` and at most `|[n] \ S'| − a` outside it, and supersets of `S'`.
pub fn warmup_prefix_system(n: usize, s_prime: ElementSet, a: usize) -> Result<SetSystem> {
    if n > POWERSET_CAP {
        return Err(Error::cap("warm-up prefix enumeration", n, POWERSET_CAP));
    }
    let inside = s_prime.bits();
    let outside = low_mask(n) & !inside;
    let out_size = outside.count_ones() as usize;
    if inside & !low_mask(n) != 0 || a > s_prime.len() || a > out_size {
        return Err(Error::InvalidParameters(format!(
            "no split of [{n}] keeps {a} cities on each side of {s_prime}"
        )));
    }
    let sets = (0..1u64 << n).filter(|&x| {
        let (i, o) = (
            (x & inside).count_ones() as usize,
            (x & outside).count_ones() as usize,
        );
        x & outside == 0 || x & inside == inside || (i >= a && o + a <= out_size)
    });
    SetSystem::from_sets(n, sets.map(ElementSet::from_bits))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=0.5).contains(&alpha) {
        return Err(Error::Domain {
            value: alpha,
            domain: "alpha in [0, 1/2]",
        });
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> BigUint {
    (0..k).fold(BigUint::from(1u32), |acc, i| acc * (n - i) / (i + 1))
}

/// Probability that a uniform `⌊n/2⌋`-subset fits a fixed tour:
/// `C(n − 2a, ⌊n/2⌋ − a) / C(n, ⌊n/2⌋)` with `a = ⌊αn⌋`.
pub fn warmup_success_probability(n: usize, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let (h, a) = (n / 2, floor_count(alpha * n as f64));
    if a > h {
        return Ok(0.0);
    }
    Ok((big_log2(&binomial(n - 2 * a, h - a)) - big_log2(&binomial(n, h))).exp2())
}

/// `⌈n / p⌉` trials, computed exactly.
pub fn warmup_trials(n: usize, alpha: f64) -> Result<usize> {
    check_alpha(alpha)?;
    let (h, a) = (n / 2, floor_count(alpha * n as f64));
    if a > h {
        return Err(Error::InvalidParameters(format!(
            "alpha = {alpha} leaves no valid split for n = {n}"
        )));
    }
    let trials = (binomial(n, h) * n).div_ceil(&binomial(n - 2 * a, h - a));
    trials
        .try_into()
        .map_err(|_| Error::InvalidParameters(format!("trial count for n = {n} overflows")))
}

/// Best tour over `trials` random splits `S'`, each solved by the restricted DP.
pub fn warmup_solver(inst: &TspInstance, alpha: f64, trials: usize, seed: u64) -> Result<Solution> {
    check_alpha(alpha)?;
    if trials == 0 {
        return Err(Error::InvalidParameters("need at least one trial".into()));
    }
    let n = inst.n();
    let (h, a) = (n / 2, floor_count(alpha * n as f64));
    let mut rng = seeded(seed);
    let mut best = None;
    for _ in 0..trials {
        let picked = rand::seq::index::sample(&mut rng, n, h);
        let s_prime = ElementSet::from_elements(picked.into_iter().map(|i| i + 1));
        let f = warmup_prefix_system(n, s_prime, a)?;
        best = better(best, restricted_dp(inst, &f)?);
    }
    Ok(best.expect("every split admits a tour"))
}

/// Deterministic variant over all `C(n, ⌊n/2⌋)` splits; always optimal.
pub fn warmup_solver_exhaustive(inst: &TspInstance, alpha: f64) -> Result<Solution> {
    check_alpha(alpha)?;
    let n = inst.n();
    let (h, a) = (n / 2, floor_count(alpha * n as f64));
    let mut best = None;
    for bits in k_subsets(n, h) {
        let f = warmup_prefix_system(n, ElementSet::from_bits(bits), a)?;
        best = better(best, restricted_dp(inst, &f)?);
    }
    Ok(best.expect("every split admits a tour"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{brute_force, held_karp};

    #[test]
    fn zero_alpha_is_the_powerset() {
        let f = warmup_prefix_system(6, ElementSet::from_elements([1, 2, 3]), 0).unwrap();
        assert_eq!(f.len(), 64);
        let inst = TspInstance::random(7, 2, 30).unwrap();
        assert_eq!(
            warmup_solver(&inst, 0.0, 1, 9).unwrap(),
            held_karp(&inst).unwrap()
        );
    }

    #[test]
    fn exhaustive_splits_are_exact() {
        for seed in 0..6 {
            let inst = TspInstance::random(8, seed, 30).unwrap();
            assert_eq!(
                warmup_solver_exhaustive(&inst, 0.445).unwrap().value,
                brute_force(&inst).unwrap().value
            );
        }
    }

    #[test]
    fn probability_and_trials() {
        // n = 10, a = 4: C(2, 1) / C(10, 5).
        let p = warmup_success_probability(10, 0.445).unwrap();
        assert!((p - 2.0 / 252.0).abs() < 1e-12);
        assert_eq!(warmup_trials(10, 0.445).unwrap(), 1260);
        assert_eq!(warmup_success_probability(10, 0.0).unwrap(), 1.0);
        assert!(warmup_solver(&TspInstance::random(4, 0, 5).unwrap(), 0.6, 1, 0).is_err());
    }

    #[test]
    fn every_trial_is_feasible() {
        let inst = TspInstance::random(9, 4, 30).unwrap();
        let s = warmup_solver(&inst, 0.445, 1, 17).unwrap();
        assert_eq!(inst.tour_cost(s.tour.as_slice()), s.value);
    }
}
