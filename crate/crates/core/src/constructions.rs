//! Concrete set systems: the trivial extremes, towers of cubes (including the
//! 13×2 system of Koivisto and Parviainen), the warm-up system, and the two
//! parametric families behind the main upper bounds.
//!
//! Blocks are placed canonically (low elements first); [`SetSystem::relabel`]
//! generates the rest of each isomorphism class.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::setsys::{check_sparse, low_mask, ElementSet, SetSystem, POWERSET_CAP};

/// Floors `x` to a count, absorbing float noise such as `0.3 * 10 = 2.9999…`.
pub fn floor_count(x: f64) -> usize {
    (x + 1e-9).floor().max(0.0) as usize
}

/// All `k`-subsets of the low `n` bits, ascending (Gosper's hack).
pub(crate) fn k_subsets(n: usize, k: usize) -> impl Iterator<Item = u64> {
    let limit = 1u64.checked_shl(n as u32).unwrap_or(0);
    let mut next = if k > n {
        None
    } else if k == 0 {
        Some(0)
    } else {
        Some(low_mask(k))
    };
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur.wrapping_add(c);
            let succ = (((r ^ cur) >> 2) / c) | r;
            if r == 0 || (limit != 0 && succ >= limit) {
                None
            } else {
                Some(succ)
            }
        };
        Some(cur)
    })
}

fn check_powerset(n: usize) -> Result<()> {
    if n > POWERSET_CAP {
        return Err(Error::cap("powerset enumeration", n, POWERSET_CAP));
    }
    Ok(())
}

/// `2^[n]`.
pub fn powerset(n: usize) -> Result<SetSystem> {
    check_powerset(n)?;
    let levels = (0..=n)
        .map(|k| k_subsets(n, k).map(ElementSet::from_bits).collect())
        .collect();
    Ok(SetSystem::from_levels_unchecked(n, levels))
}

/// The prefix-sets of the identity permutation.
pub fn single_chain(n: usize) -> Result<SetSystem> {
    check_sparse(n)?;
    let levels = (0..=n).map(|k| vec![ElementSet::full(k)]).collect();
    Ok(SetSystem::from_levels_unchecked(n, levels))
}

/// Order ideals of `k` antichains of size `t`, each entirely below the next.
///
/// `|F| = k·2^t − k + 1` and `C(F) = (t!)^k`.
pub fn tower_of_cubes(t: usize, k: usize) -> Result<SetSystem> {
    if t == 0 || k == 0 {
        return Err(Error::InvalidParameters(
            "tower of cubes needs t >= 1 and k >= 1".into(),
        ));
    }
    check_powerset(t)?;
    let n = t
        .checked_mul(k)
        .ok_or_else(|| Error::cap("sparse set systems", usize::MAX, 63))?;
    check_sparse(n)?;
    let mut sets = Vec::with_capacity(k << t);
    for block in 0..k {
        let below = low_mask(block * t);
        for m in 0..(1u64 << t) {
            sets.push(ElementSet::from_bits(below | m << (block * t)));
        }
    }
    SetSystem::from_sets(n, sets)
}

/// The height-two poset system on `[26]`: the 13×2 tower of cubes.
pub fn koivisto_parviainen() -> SetSystem {
    tower_of_cubes(13, 2).expect("13x2 tower is within caps")
}

/// The warm-up system over `[2k]`: all subsets of the low half, the low half
/// plus any subset of the high half, and the middle band
/// `{s1 ∪ (s2 + k) : |s1| ≥ ⌊βk⌋, |s2| ≤ k − ⌊βk⌋}`.
pub fn warmup_system(k: usize, beta: f64) -> Result<SetSystem> {
    if !(0.5..=1.0).contains(&beta) {
        return Err(Error::InvalidParameters(format!(
            "warm-up needs 1/2 <= beta <= 1, got {beta}"
        )));
    }
    check_powerset(k)?;
    check_sparse(2 * k)?;
    let b = floor_count(beta * k as f64);
    let low = low_mask(k);
    let mut sets = Vec::new();
    for m in 0..(1u64 << k) {
        sets.push(ElementSet::from_bits(m));
        sets.push(ElementSet::from_bits(low | m << k));
    }
    let heavy_low: Vec<u64> = (b..=k).flat_map(|j| k_subsets(k, j)).collect();
    let light_high: Vec<u64> = (0..=k - b).flat_map(|j| k_subsets(k, j)).collect();
    for &s1 in &heavy_low {
        for &s2 in &light_high {
            sets.push(ElementSet::from_bits(s1 | s2 << k));
        }
    }
    SetSystem::from_sets(2 * k, sets)
}

/// Parameters of the four-block construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thm41Params {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// Integer block sizes after flooring.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Thm41Counts {
    pub n: usize,
    /// `n / 2`
    pub half: usize,
    /// `⌊αn⌋`, size of `L2` and `R2`
    pub a: usize,
    /// `⌊βn⌋`
    pub b: usize,
    /// `⌊γn⌋`
    pub g: usize,
}

impl Thm41Params {
    pub fn new(n: usize, alpha: f64, beta: f64, gamma: f64) -> Self {
        Thm41Params {
            n,
            alpha,
            beta,
            gamma,
        }
    }

    /// Floors the fractional parameters and validates the result.
    pub fn counts(&self) -> Result<Thm41Counts> {
        let Thm41Params {
            n,
            alpha,
            beta,
            gamma,
        } = *self;
        let eps = 1e-12;
        if !(0.25 - eps <= beta
            && beta <= gamma + eps
            && gamma <= 0.5 + eps
            && beta <= alpha + eps
            && alpha <= 0.5 + eps)
        {
            return Err(Error::InvalidParameters(format!(
                "need 1/4 <= beta <= gamma <= 1/2 and beta <= alpha <= 1/2, got alpha={alpha}, beta={beta}, gamma={gamma}"
            )));
        }
        if n == 0 || n % 2 != 0 {
            return Err(Error::InvalidParameters(format!(
                "n must be even and positive, got {n}"
            )));
        }
        check_sparse(n)?;
        let counts = Thm41Counts {
            n,
            half: n / 2,
            a: floor_count(alpha * n as f64),
            b: floor_count(beta * n as f64),
            g: floor_count(gamma * n as f64),
        };
        if !(counts.b <= counts.g
            && counts.g <= counts.half
            && counts.b <= counts.a
            && counts.a <= counts.half)
        {
            return Err(Error::InvalidParameters(format!(
                "floored counts violate the ranges: {counts:?}"
            )));
        }
        Ok(counts)
    }
}

impl Thm41Counts {
    /// `L1 = [1..n/2]`
    pub fn l1(&self) -> u64 {
        low_mask(self.half)
    }

    /// `R1 = [n/2+1..n]`
    pub fn r1(&self) -> u64 {
        low_mask(self.n) & !low_mask(self.half)
    }

    /// `L2 = [1..a]`
    pub fn l2(&self) -> u64 {
        low_mask(self.a)
    }

    /// `R2 = [n−a+1..n]`
    pub fn r2(&self) -> u64 {
        low_mask(self.n) & !low_mask(self.n - self.a)
    }

    /// Whether `s` is a prefix-set of some permutation whose first `b` entries lie
    /// in `L2`, last `b` entries in `R2`, and whose first half holds at least `g`
    /// elements of `L1` (equivalently, last half at least `g` of `R1`).
    ///
    /// For `|s| <= n/2`: `|s ∩ L2| >= min(|s|, b)`, `|s ∩ R2| <= a − b`,
    /// `|s ∩ R1| <= n/2 − g`; larger sets satisfy the mirrored conditions on
    /// their complement. Both readings coincide at `|s| = n/2`.
    pub fn is_member(&self, s: u64) -> bool {
        let k = s.count_ones() as usize;
        if k <= self.half {
            self.lower_member(s, self.l2(), self.r2(), self.r1())
        } else {
            let c = !s & low_mask(self.n);
            self.lower_member(c, self.r2(), self.l2(), self.l1())
        }
    }

    fn lower_member(&self, s: u64, near: u64, far: u64, other_half: u64) -> bool {
        let k = s.count_ones() as usize;
        (s & near).count_ones() as usize >= k.min(self.b)
            && (s & far).count_ones() as usize <= self.a - self.b
            && (s & other_half).count_ones() as usize <= self.half - self.g
    }

    /// Whether the permutation meets the four constraints defining the system.
    pub fn admits(&self, order: &[usize]) -> bool {
        let in_mask = |m: u64, e: usize| m >> (e - 1) & 1 == 1;
        let n = self.n;
        order[..self.b].iter().all(|&e| in_mask(self.l2(), e))
            && order[n - self.b..].iter().all(|&e| in_mask(self.r2(), e))
            && order[..self.half]
                .iter()
                .filter(|&&e| in_mask(self.l1(), e))
                .count()
                >= self.g
            && order[self.half..]
                .iter()
                .filter(|&&e| in_mask(self.r1(), e))
                .count()
                >= self.g
    }
}

/// The four-block system: every set that is a prefix-set of a permutation
/// meeting the block constraints, built from the set-level characterization.
pub fn theorem41_system(p: &Thm41Params) -> Result<SetSystem> {
    let c = p.counts()?;
    if c.half > POWERSET_CAP {
        return Err(Error::cap("half-block enumeration", c.half, POWERSET_CAP));
    }
    let half = c.half;
    // Group subsets of R1 by (|· ∩ R2|, |·|) so each L1 subset only meets compatible classes.
    let a = c.a;
    let mut classes: Vec<Vec<Vec<u64>>> = vec![vec![Vec::new(); half + 1]; a + 1];
    let r2_local = low_mask(half) & !low_mask(half - a);
    for m in 0..(1u64 << half) {
        classes[(m & r2_local).count_ones() as usize][m.count_ones() as usize].push(m);
    }
    let l2 = c.l2();
    let mut levels: Vec<Vec<ElementSet>> = vec![Vec::new(); c.n + 1];
    for left in 0..(1u64 << half) {
        let p_cnt = (left & l2).count_ones() as usize;
        let x = left.count_ones() as usize;
        for (r, by_size) in classes.iter().enumerate() {
            for (y, members) in by_size.iter().enumerate() {
                if members.is_empty() || !class_admissible(&c, p_cnt, x, r, y) {
                    continue;
                }
                levels[x + y].extend(
                    members
                        .iter()
                        .map(|&m| ElementSet::from_bits(left | m << half)),
                );
            }
        }
    }
    for level in &mut levels {
        level.sort_unstable();
    }
    Ok(SetSystem::from_levels_unchecked(c.n, levels))
}

/// [`Thm41Counts::is_member`] expressed through block intersection counts:
/// `p = |s ∩ L2|`, `x = |s ∩ L1|`, `r = |s ∩ R2|`, `y = |s ∩ R1|`.
fn class_admissible(c: &Thm41Counts, p: usize, x: usize, r: usize, y: usize) -> bool {
    let k = x + y;
    if k <= c.half {
        p >= k.min(c.b) && r <= c.a - c.b && y <= c.half - c.g
    } else {
        // complement counts: |c ∩ R2| = a − r, |c ∩ L2| = a − p, |c ∩ L1| = half − x
        let ck = c.n - k;
        c.a - r >= ck.min(c.b) && c.a - p <= c.a - c.b && c.half - x <= c.half - c.g
    }
}

/// Parameters of the single-block (regularly self-intersecting) construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thm45Params {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
}

impl Thm45Params {
    pub fn new(n: usize, alpha: f64, beta: f64) -> Self {
        Thm45Params { n, alpha, beta }
    }

    /// `(⌊αn⌋, ⌊βn⌋)` after validation.
    pub fn counts(&self) -> Result<(usize, usize)> {
        let Thm45Params { n, alpha, beta } = *self;
        let eps = 1e-12;
        if !(alpha > 0.0 && alpha <= 1.0 + eps && alpha / 2.0 <= beta + eps && beta <= alpha + eps)
        {
            return Err(Error::InvalidParameters(format!(
                "need 0 < alpha <= 1 and alpha/2 <= beta <= alpha, got alpha={alpha}, beta={beta}"
            )));
        }
        if n == 0 {
            return Err(Error::EmptyGroundSet);
        }
        check_sparse(n)?;
        let a = floor_count(alpha * n as f64).min(n);
        let b = floor_count(beta * n as f64).min(a);
        Ok((a, b))
    }
}

/// All `⌊βn⌋`-subsets of `L = [1..⌊αn⌋]` together with all their subsets and supersets.
pub fn theorem45_system(p: &Thm45Params) -> Result<SetSystem> {
    let (a, b) = p.counts()?;
    let n = p.n;
    if a > POWERSET_CAP || n - a > POWERSET_CAP {
        return Err(Error::cap("block enumeration", a.max(n - a), POWERSET_CAP));
    }
    let mut levels: Vec<Vec<ElementSet>> = vec![Vec::new(); n + 1];
    for inside in 0..(1u64 << a) {
        let j = inside.count_ones() as usize;
        if j < b {
            levels[j].push(ElementSet::from_bits(inside));
        } else {
            for outside in 0..(1u64 << (n - a)) {
                let s = inside | outside << a;
                levels[s.count_ones() as usize].push(ElementSet::from_bits(s));
            }
        }
    }
    for level in &mut levels {
        level.sort_unstable();
    }
    Ok(SetSystem::from_levels_unchecked(n, levels))
}

/// `∅`, `[n]`, and every other subset independently with probability `density`.
pub fn random_system(n: usize, density: f64, seed: u64) -> Result<SetSystem> {
    use rand::Rng as _;
    check_powerset(n)?;
    let mut rng = crate::rng::seeded(seed);
    let full = low_mask(n);
    let density = density.clamp(0.0, 1.0);
    let sets = (0..=full).filter(|&s| s == 0 || s == full || rng.gen_bool(density));
    SetSystem::from_sets(n, sets.map(ElementSet::from_bits))
}

/// A named construction, as accepted on the command line.
#[derive(Clone, Debug, PartialEq)]
pub enum Construction {
    Powerset(usize),
    Chain(usize),
    Tower {
        t: usize,
        k: usize,
    },
    KoivistoParviainen,
    Warmup {
        k: usize,
        beta: f64,
    },
    /// `gamma = None` solves `H(2β) + H(1 − 2γ) = 2α` for γ.
    Thm41 {
        n: usize,
        alpha: f64,
        beta: f64,
        gamma: Option<f64>,
    },
    Thm45 {
        n: usize,
        alpha: f64,
        beta: f64,
    },
}

impl Construction {
    pub fn build(&self) -> Result<SetSystem> {
        match *self {
            Construction::Powerset(n) => powerset(n),
            Construction::Chain(n) => single_chain(n),
            Construction::Tower { t, k } => tower_of_cubes(t, k),
            Construction::KoivistoParviainen => Ok(koivisto_parviainen()),
            Construction::Warmup { k, beta } => warmup_system(k, beta),
            Construction::Thm41 {
                n,
                alpha,
                beta,
                gamma,
            } => {
                let gamma = match gamma {
                    Some(g) => g,
                    None => crate::analysis::solve_gamma(alpha, beta)?,
                };
                theorem41_system(&Thm41Params::new(n, alpha, beta, gamma))
            }
            Construction::Thm45 { n, alpha, beta } => {
                theorem45_system(&Thm45Params::new(n, alpha, beta))
            }
        }
    }
}

impl FromStr for Construction {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let bad = |msg: &str| Error::parse(0, format!("construction `{spec}`: {msg}"));
        let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
        let args: Vec<&str> = if args.is_empty() {
            Vec::new()
        } else {
            args.split(',').map(str::trim).collect()
        };
        let int = |i: usize| -> Result<usize> {
            args.get(i)
                .ok_or_else(|| bad("missing argument"))?
                .parse()
                .map_err(|_| bad("expected an integer"))
        };
        let real = |i: usize| -> Result<f64> {
            args.get(i)
                .ok_or_else(|| bad("missing argument"))?
                .parse()
                .map_err(|_| bad("expected a number"))
        };
        let arity = |k: usize| -> Result<()> {
            if args.len() == k {
                Ok(())
            } else {
                Err(bad(&format!("expected {k} arguments, got {}", args.len())))
            }
        };
        match name {
            "powerset" => arity(1).and_then(|_| Ok(Construction::Powerset(int(0)?))),
            "chain" => arity(1).and_then(|_| Ok(Construction::Chain(int(0)?))),
            "tower" => arity(2).and_then(|_| {
                Ok(Construction::Tower {
                    t: int(0)?,
                    k: int(1)?,
                })
            }),
            "kp" => arity(0).map(|_| Construction::KoivistoParviainen),
            "warmup" => arity(2).and_then(|_| {
                Ok(Construction::Warmup {
                    k: int(0)?,
                    beta: real(1)?,
                })
            }),
            "thm41" => {
                arity(4)?;
                let gamma = if args[3] == "auto" {
                    None
                } else {
                    Some(real(3)?)
                };
                Ok(Construction::Thm41 {
                    n: int(0)?,
                    alpha: real(1)?,
                    beta: real(2)?,
                    gamma,
                })
            }
            "thm45" => arity(3).and_then(|_| {
                Ok(Construction::Thm45 {
                    n: int(0)?,
                    alpha: real(1)?,
                    beta: real(2)?,
                })
            }),
            _ => Err(bad("unknown construction")),
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Construction::Powerset(n) => write!(f, "powerset:{n}"),
            Construction::Chain(n) => write!(f, "chain:{n}"),
            Construction::Tower { t, k } => write!(f, "tower:{t},{k}"),
            Construction::KoivistoParviainen => write!(f, "kp"),
            Construction::Warmup { k, beta } => write!(f, "warmup:{k},{beta}"),
            Construction::Thm41 {
                n,
                alpha,
                beta,
                gamma,
            } => match gamma {
                Some(g) => write!(f, "thm41:{n},{alpha},{beta},{g}"),
                None => write!(f, "thm41:{n},{alpha},{beta},auto"),
            },
            Construction::Thm45 { n, alpha, beta } => write!(f, "thm45:{n},{alpha},{beta}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use num_bigint::BigUint;

    use super::*;
    use crate::setsys::{next_permutation, ChainCount, Permutation};

    fn closure_of_admitted(c: &Thm41Counts) -> SetSystem {
        let mut perms = Vec::new();
        let mut order: Vec<usize> = (1..=c.n).collect();
        loop {
            if c.admits(&order) {
                perms.push(Permutation::new(order.clone()).unwrap());
            }
            if !next_permutation(&mut order) {
                break;
            }
        }
        SetSystem::closure_from_permutations(c.n, &perms).unwrap()
    }

    #[test]
    fn k_subsets_enumerates_in_order() {
        let all: Vec<u64> = k_subsets(5, 2).collect();
        assert_eq!(all.len(), 10);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(all.iter().all(|m| m.count_ones() == 2 && *m < 32));
        assert_eq!(k_subsets(4, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(k_subsets(4, 4).collect::<Vec<_>>(), vec![15]);
        assert_eq!(k_subsets(3, 4).count(), 0);
        assert_eq!(k_subsets(63, 63).count(), 1);
    }

    #[test]
    fn powerset_and_chain() {
        assert_eq!(powerset(2).unwrap().len(), 4);
        assert_eq!(powerset(3).unwrap().count_chains(), ChainCount::from(6));
        let m = powerset(3).unwrap().metrics().unwrap();
        assert_eq!((m.size_s, m.density_p), (2.0, 1.0));
        assert!(powerset(29).is_err());

        let c1 = single_chain(1).unwrap();
        assert_eq!(c1.len(), 2);
        for n in 1..12 {
            assert_eq!(single_chain(n).unwrap().count_chains(), ChainCount::from(1));
        }
    }

    #[test]
    fn tower_counts_exhaustive() {
        for t in 1..=8 {
            for k in 1..=16 / t {
                let f = tower_of_cubes(t, k).unwrap();
                assert_eq!(f.len(), k * (1 << t) - k + 1, "t={t} k={k}");
                let tf = BigUint::from((1..=t as u64).product::<u64>());
                assert_eq!(f.count_chains().0, tf.pow(k as u32), "t={t} k={k}");
            }
        }
        assert_eq!(
            tower_of_cubes(2, 2)
                .unwrap()
                .supported_permutation_count()
                .unwrap(),
            ChainCount::from(4)
        );
        assert_eq!(tower_of_cubes(5, 1).unwrap(), powerset(5).unwrap());
        assert_eq!(tower_of_cubes(13, 2).unwrap().len(), 16383);
        assert!(tower_of_cubes(8, 8).is_err());
    }

    #[test]
    fn koivisto_parviainen_point() {
        let f = koivisto_parviainen();
        assert_eq!(f.len(), (1 << 13) + (1 << 13) - 1);
        assert_eq!(f, tower_of_cubes(13, 2).unwrap());
        let m = f.metrics().unwrap();
        assert!((m.size_s - 1.4524).abs() < 1e-4);
        assert!((m.density_p - 1.8616).abs() < 1e-4);
        assert!((3.925..=3.931).contains(&m.product_st));
    }

    #[test]
    fn warmup_collapses_to_tower_at_beta_one() {
        assert_eq!(
            warmup_system(3, 1.0).unwrap(),
            tower_of_cubes(3, 2).unwrap()
        );
        assert!(warmup_system(3, 0.4).is_err());
    }

    #[test]
    fn warmup_size_matches_direct_count() {
        // Inclusion-exclusion over the three parts: 2^k + (2^k − 1) + band − overlaps.
        for k in 2..=10usize {
            let b = floor_count(0.889972 * k as f64);
            let binom = |n: usize, r: usize| (0..r).fold(1usize, |acc, i| acc * (n - i) / (i + 1));
            let heavy: usize = (b..=k).map(|j| binom(k, j)).sum();
            let light: usize = (0..=k - b).map(|j| binom(k, j)).sum();
            // band ∩ low half: s2 = ∅; band ∩ (full low ∪ high): s1 = [k]
            let band_new = heavy * light - light - heavy + 1;
            let expected = (1 << k) + (1 << k) - 1 + band_new;
            assert_eq!(warmup_system(k, 0.889972).unwrap().len(), expected, "k={k}");
        }
        assert_eq!(warmup_system(10, 0.889972).unwrap().len(), 5072);
    }

    #[test]
    fn thm41_cross_checks_against_permutation_closure() {
        let cases = [
            (8, 0.5, 0.25, 0.5),
            (8, 0.5, 0.25, 0.25),
            (8, 0.375, 0.25, 0.375),
            (8, 0.5, 0.375, 0.375),
            (8, 0.5, 0.25, 0.375),
            (8, 0.25, 0.25, 0.5),
            (8, 0.5, 0.5, 0.5),
        ];
        for (n, a, b, g) in cases {
            let p = Thm41Params::new(n, a, b, g);
            let c = p.counts().unwrap();
            let built = theorem41_system(&p).unwrap();
            assert_eq!(built, closure_of_admitted(&c), "params {p:?}");
            let by_predicate = SetSystem::from_sets(
                n,
                (0..1u64 << n)
                    .filter(|&m| c.is_member(m))
                    .map(ElementSet::from_bits),
            )
            .unwrap();
            assert_eq!(built, by_predicate);
        }
    }

    #[test]
    fn thm41_degenerate_case_is_the_tower() {
        let f = theorem41_system(&Thm41Params::new(8, 0.5, 0.25, 0.5)).unwrap();
        assert_eq!(f, tower_of_cubes(4, 2).unwrap());
    }

    #[test]
    fn thm41_predicate_count_at_twelve() {
        let p = Thm41Params::new(12, 0.5, 5.0 / 12.0, 5.0 / 12.0);
        let c = p.counts().unwrap();
        assert_eq!((c.a, c.b, c.g), (6, 5, 5));
        let f = theorem41_system(&p).unwrap();
        let expected = (0..1u64 << 12).filter(|&m| c.is_member(m)).count();
        assert_eq!(f.len(), expected);
    }

    #[test]
    fn thm41_every_admitted_permutation_is_supported() {
        let p = Thm41Params::new(8, 0.5, 0.25, 0.375);
        let c = p.counts().unwrap();
        let f = theorem41_system(&p).unwrap();
        let mut admitted = 0;
        for q in Permutation::all(8) {
            if c.admits(q.as_slice()) {
                admitted += 1;
                assert!(f.supports(&q).unwrap());
            }
        }
        assert!(admitted > 0);
    }

    #[test]
    fn thm41_rejects_bad_ranges() {
        assert!(theorem41_system(&Thm41Params::new(8, 0.5, 0.2, 0.5)).is_err());
        assert!(theorem41_system(&Thm41Params::new(8, 0.3, 0.4, 0.5)).is_err());
        assert!(theorem41_system(&Thm41Params::new(7, 0.5, 0.3, 0.4)).is_err());
    }

    #[test]
    fn thm45_examples() {
        assert_eq!(
            theorem45_system(&Thm45Params::new(5, 1.0, 0.7)).unwrap(),
            powerset(5).unwrap()
        );
        let f = theorem45_system(&Thm45Params::new(6, 2.0 / 3.0, 1.0 / 3.0)).unwrap();
        let l = 0b1111u64;
        let expected = (0..1u64 << 6)
            .filter(|&m| {
                let k = m.count_ones();
                (k <= 2 && m & !l == 0) || (m & l).count_ones() >= 2
            })
            .count();
        assert_eq!(f.len(), expected);
        assert!(theorem45_system(&Thm45Params::new(6, 0.5, 0.1)).is_err());
    }

    #[test]
    fn thm45_supports_exactly_the_constrained_permutations() {
        for (n, a, b) in [
            (6, 4.0 / 6.0, 2.0 / 6.0),
            (7, 5.0 / 7.0, 3.0 / 7.0),
            (8, 0.75, 0.5),
        ] {
            let p = Thm45Params::new(n, a, b);
            let (la, lb) = p.counts().unwrap();
            let f = theorem45_system(&p).unwrap();
            let mut order: Vec<usize> = (1..=n).collect();
            loop {
                let expected = order[..lb].iter().all(|&e| e <= la);
                assert_eq!(f.supports_unchecked(&order), expected);
                if !next_permutation(&mut order) {
                    break;
                }
            }
        }
    }

    #[test]
    fn construction_specs_roundtrip() {
        for spec in [
            "powerset:3",
            "chain:8",
            "tower:2,2",
            "kp",
            "warmup:3,1",
            "thm41:8,0.5,0.25,auto",
            "thm45:6,0.6,0.4",
        ] {
            let c: Construction = spec.parse().unwrap();
            assert_eq!(c.to_string(), spec);
        }
        for bad in [
            "powerset",
            "tower:2",
            "nope:1",
            "thm41:8,0.5,x,auto",
            "kp:1",
        ] {
            assert!(bad.parse::<Construction>().is_err(), "{bad}");
        }
    }
}
