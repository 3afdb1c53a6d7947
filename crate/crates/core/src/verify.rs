//! Self-checks run by `chainfold verify`: one check per headline number or
//! identity, each against an exhaustive oracle or a fixed reference value.

use std::collections::HashSet;
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::One;

use crate::analysis::{
    chain_count_ceiling, entropy, jlr_comparison, solve_gamma, thm41_bounds, thm45_bounds,
    BoundParams,
};
use crate::constructions::{
    koivisto_parviainen, powerset, random_system, single_chain, theorem41_system, theorem45_system,
    tower_of_cubes, warmup_system, Thm41Params, Thm45Params,
};
use crate::cover::{greedy_prune, make_unique, random_cover, regularly_self_intersecting};
use crate::error::{Error, Result};
use crate::rng::substream;
use crate::semiring::{
    count_linear_extensions, evaluate_unique, Counting, PermutationProblem, Poset,
};
use crate::setsys::{big_factorial, factorial, Permutation, SetSystem};
use crate::solver::{
    block_families, brute_force, framework_solver, gurevich_shelah, held_karp, restricted_dp,
    TspInstance,
};

/// Outcome of one check.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub id: usize,
    pub suite: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:>2} {:<18} {} {:>9.3}s  {}",
            self.id,
            self.suite,
            if self.passed { "PASS" } else { "FAIL" },
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

type CheckFn = fn(u64) -> Result<(bool, String)>;

/// A named check with its own time budget.
pub struct Check {
    pub id: usize,
    pub suite: &'static str,
    pub aliases: &'static [&'static str],
    pub budget: Duration,
    run: CheckFn,
}

impl Check {
    /// Runs the check; errors and overruns of the time budget count as failures.
    pub fn run(&self, seed: u64) -> CheckResult {
        let start = Instant::now();
        let outcome = (self.run)(seed);
        let elapsed = start.elapsed();
        let (passed, mut detail) = match outcome {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        let in_time = elapsed <= self.budget;
        if !in_time {
            detail.push_str(&format!(" (over the {:?} budget)", self.budget));
        }
        CheckResult {
            id: self.id,
            suite: self.suite,
            passed: passed && in_time,
            detail,
            elapsed,
        }
    }

    pub fn matches(&self, name: &str) -> bool {
        self.suite == name || self.aliases.contains(&name) || name.parse() == Ok(self.id)
    }
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

pub const CHECKS: &[Check] = &[
    Check {
        id: 1,
        suite: "kp",
        aliases: &[],
        budget: secs(1),
        run: kp_point,
    },
    Check {
        id: 2,
        suite: "sqrt2-bound",
        aliases: &[],
        budget: secs(1),
        run: sqrt2_bound,
    },
    Check {
        id: 3,
        suite: "mid-bound",
        aliases: &[],
        budget: secs(1),
        run: mid_bound,
    },
    Check {
        id: 4,
        suite: "single-block-bound",
        aliases: &[],
        budget: secs(1),
        run: single_block_bound,
    },
    Check {
        id: 5,
        suite: "warmup-constants",
        aliases: &[],
        budget: secs(1),
        run: warmup_constants,
    },
    Check {
        id: 6,
        suite: "solvers",
        aliases: &[],
        budget: secs(120),
        run: solver_equivalence,
    },
    Check {
        id: 7,
        suite: "union-product",
        aliases: &["lemma37"],
        budget: secs(60),
        run: union_product,
    },
    Check {
        id: 8,
        suite: "split",
        aliases: &[],
        budget: secs(60),
        run: split_support,
    },
    Check {
        id: 9,
        suite: "supported-fraction",
        aliases: &[],
        budget: secs(60),
        run: supported_fraction,
    },
    Check {
        id: 10,
        suite: "chain-ceiling",
        aliases: &[],
        budget: secs(60),
        run: chain_ceiling,
    },
    Check {
        id: 11,
        suite: "cover",
        aliases: &[],
        budget: secs(120),
        run: cover_correctness,
    },
    Check {
        id: 12,
        suite: "linear-extensions",
        aliases: &["le"],
        budget: secs(60),
        run: linear_extensions,
    },
    Check {
        id: 13,
        suite: "self-intersection",
        aliases: &["regular"],
        budget: secs(120),
        run: self_intersection,
    },
    Check {
        id: 14,
        suite: "jlr",
        aliases: &[],
        budget: secs(120),
        run: jlr_report,
    },
];

/// Checks whose suite name, alias or id equals `name`; all checks for `None`.
pub fn select(name: Option<&str>) -> Result<Vec<&'static Check>> {
    let picked: Vec<_> = CHECKS
        .iter()
        .filter(|c| name.is_none_or(|n| c.matches(n)))
        .collect();
    if picked.is_empty() {
        let known: Vec<_> = CHECKS.iter().map(|c| c.suite).collect();
        return Err(Error::InvalidParameters(format!(
            "unknown suite `{}` (known: {})",
            name.unwrap_or(""),
            known.join(", ")
        )));
    }
    Ok(picked)
}

pub fn run(name: Option<&str>, seed: u64) -> Result<Vec<CheckResult>> {
    Ok(select(name)?.into_iter().map(|c| c.run(seed)).collect())
}

fn kp_point(_: u64) -> Result<(bool, String)> {
    let m = koivisto_parviainen().metrics()?;
    let ok = (1.4523..=1.4525).contains(&m.size_s)
        && (1.8615..=1.8618).contains(&m.density_p)
        && (3.925..=3.931).contains(&m.product_st);
    Ok((
        ok,
        format!(
            "S={:.6} P={:.6} S2P={:.6}",
            m.size_s, m.density_p, m.product_st
        ),
    ))
}

fn sqrt2_bound(_: u64) -> Result<(bool, String)> {
    let b = thm41_bounds(BoundParams::new(0.5, 0.4112, solve_gamma(0.5, 0.4112)?))?;
    let ok = b.p() <= 1.785975 + 1e-4 && 2.0 * b.p() < 3.5720;
    Ok((
        ok,
        format!("lgS={:.6} P={:.6} ST={:.6}", b.lg_s, b.p(), 2.0 * b.p()),
    ))
}

fn mid_bound(_: u64) -> Result<(bool, String)> {
    let b = thm41_bounds(BoundParams::new(0.46, 0.406, solve_gamma(0.46, 0.406)?))?;
    Ok((
        b.p() <= 2.121604 + 1e-4,
        format!("lgS={:.6} P={:.6}", b.lg_s, b.p()),
    ))
}

fn single_block_bound(_: u64) -> Result<(bool, String)> {
    let b = thm45_bounds(0.8412, 0.75 * 0.8412)?;
    let ok =
        (b.s() - 1.7916).abs() <= 5e-4 && b.p() <= 1.20375 + 1e-4 && b.s() * b.s() * b.p() < 3.864;
    Ok((
        ok,
        format!(
            "S={:.6} P={:.6} S2P={:.6}",
            b.s(),
            b.p(),
            b.s() * b.s() * b.p()
        ),
    ))
}

fn warmup_constants(_: u64) -> Result<(bool, String)> {
    let root = 0.889972;
    let p = f64::exp2(root);
    let st = 2f64.sqrt() * p * 2f64.sqrt();
    let ok = (entropy(root)? - 0.5).abs() <= 1e-5 && (1.8531..=1.8533).contains(&p) && st < 3.7066;
    Ok((ok, format!("2^x={p:.6} ST={st:.6}")))
}

fn solver_equivalence(seed: u64) -> Result<(bool, String)> {
    let mut mismatches = Vec::new();
    let mut runs = 0;
    for n in 4..=10 {
        let families = block_families(n, n / 2, seed)?;
        let full = powerset(n)?;
        for i in 0..50u64 {
            let inst = TspInstance::random(n, seed ^ (n as u64) << 32 ^ i, 1000)?;
            let want = brute_force(&inst)?.value;
            let mut got = vec![held_karp(&inst)?.value];
            got.push(restricted_dp(&inst, &full)?.map_or(i64::MIN, |s| s.value));
            got.extend((0..=2).map(|d| gurevich_shelah(&inst, d).value));
            got.push(framework_solver(&inst, n / 2, &families)?.value);
            runs += 1;
            if got.iter().any(|&v| v != want) {
                mismatches.push(format!("n={n} i={i}"));
            }
        }
    }
    Ok((
        mismatches.is_empty(),
        format!(
            "{runs} instances, {} mismatches {:?}",
            mismatches.len(),
            mismatches
        ),
    ))
}

fn binomial(n: usize, k: usize) -> BigUint {
    big_factorial(n) / (big_factorial(k) * big_factorial(n - k))
}

fn union_product(seed: u64) -> Result<(bool, String)> {
    let mut bad = 0;
    for i in 0..200u64 {
        let mut rng = substream(seed, i);
        let (n1, n2) = (
            1 + rand::Rng::gen_range(&mut rng, 0..6),
            1 + rand::Rng::gen_range(&mut rng, 0..6),
        );
        let density = rand::Rng::gen_range(&mut rng, 0.2..0.9);
        let f1 = random_system(n1, density, seed.wrapping_add(2 * i))?;
        let f2 = random_system(n2, density, seed.wrapping_add(2 * i + 1))?;
        let u = f1.union_product(&f2)?;
        let chains = binomial(n1 + n2, n1) * f1.count_chains().value() * f2.count_chains().value();
        if u.n() != n1 + n2 || u.len() != f1.len() * f2.len() || *u.count_chains().value() != chains
        {
            bad += 1;
        }
    }
    Ok((bad == 0, format!("200 pairs, {bad} violations")))
}

fn split_support(seed: u64) -> Result<(bool, String)> {
    let mut exceptions = 0;
    let mut supported = 0;
    for i in 0..20u64 {
        let f1 = random_system(3, 0.6, seed.wrapping_add(100 + 2 * i))?;
        let f2 = random_system(3, 0.6, seed.wrapping_add(101 + 2 * i))?;
        let u = f1.union_product(&f2)?;
        for p in Permutation::all(6) {
            let parts = p.induced_split(&[3, 3])?;
            let whole = u.supports(&p)?;
            supported += whole as usize;
            if whole != (f1.supports(&parts[0])? && f2.supports(&parts[1])?) {
                exceptions += 1;
            }
        }
    }
    Ok((
        exceptions == 0,
        format!("20 pairs x 720 permutations, {supported} supported, {exceptions} exceptions"),
    ))
}

/// `(N, M)`: distinct relabelings of `f`, and how many of them support the identity.
fn relabeling_counts(f: &SetSystem) -> Result<(u64, u64)> {
    let n = f.n();
    let id = Permutation::identity(n);
    let mut seen = HashSet::new();
    let mut with_id = 0;
    for sigma in Permutation::all(n) {
        let g = f.relabel(&sigma)?;
        if seen.insert(g.iter().map(|s| s.bits()).collect::<Vec<_>>()) && g.supports(&id)? {
            with_id += 1;
        }
    }
    Ok((seen.len() as u64, with_id))
}

fn supported_fraction(seed: u64) -> Result<(bool, String)> {
    let mut bad = 0;
    for i in 0..20u64 {
        let n = 3 + (i % 3) as usize;
        let f = random_system(n, 0.5, seed.wrapping_add(300 + i))?;
        let count = f.supported_permutation_count()?.to_u64().expect("small");
        let (big_n, m) = relabeling_counts(&f)?;
        if count * big_n != m * factorial(n) as u64 {
            bad += 1;
        }
    }
    Ok((bad == 0, format!("20 systems, {bad} violations")))
}

/// Every construction small enough to count exactly.
pub fn corpus() -> Result<Vec<(String, SetSystem)>> {
    let mut out = Vec::new();
    for n in 1..=8 {
        out.push((format!("powerset:{n}"), powerset(n)?));
        out.push((format!("chain:{n}"), single_chain(n)?));
    }
    for (t, k) in [
        (1, 5),
        (2, 2),
        (2, 4),
        (3, 2),
        (3, 3),
        (4, 2),
        (4, 4),
        (5, 3),
        (8, 2),
        (13, 2),
    ] {
        out.push((format!("tower:{t},{k}"), tower_of_cubes(t, k)?));
    }
    out.push(("kp".into(), koivisto_parviainen()));
    for (k, beta) in [(3, 0.5), (3, 1.0), (5, 0.8), (8, 0.889972), (10, 0.889972)] {
        out.push((format!("warmup:{k},{beta}"), warmup_system(k, beta)?));
    }
    for n in [8, 12, 16] {
        let p = Thm41Params::new(n, 0.5, 0.4112, solve_gamma(0.5, 0.4112)?);
        out.push((format!("thm41:{n},0.5,0.4112,auto"), theorem41_system(&p)?));
    }
    for (n, a, b) in [
        (6, 2.0 / 3.0, 1.0 / 3.0),
        (10, 0.8, 0.6),
        (16, 0.8412, 0.6309),
    ] {
        out.push((
            format!("thm45:{n},{a:.4},{b:.4}"),
            theorem45_system(&Thm45Params::new(n, a, b))?,
        ));
    }
    Ok(out)
}

fn chain_ceiling(_: u64) -> Result<(bool, String)> {
    let corpus = corpus()?;
    let mut bad = Vec::new();
    for (name, f) in &corpus {
        let c = f.count_chains();
        for k in 0..=6 {
            if *c.value() > chain_count_ceiling(f.n(), f.len(), k) {
                bad.push(format!("{name} k={k}"));
            }
        }
    }
    Ok((
        bad.is_empty(),
        format!(
            "{} systems x 7 values of k, violations {:?}",
            corpus.len(),
            bad
        ),
    ))
}

/// The first seeded random system from `seed` on that supports some permutation.
fn supporting_random_system(n: usize, seed: u64) -> Result<SetSystem> {
    for s in seed.. {
        let f = random_system(n, 0.5, s)?;
        if !f.count_chains().is_zero() {
            return Ok(f);
        }
    }
    unreachable!("the seed space is exhausted")
}

fn cover_correctness(seed: u64) -> Result<(bool, String)> {
    let mut notes = Vec::new();
    let mut ok = true;
    let plain_bases = [
        ("tower:2,2", tower_of_cubes(2, 2)?),
        ("chain:4", single_chain(4)?),
        ("thm45:5", theorem45_system(&Thm45Params::new(5, 0.8, 0.4))?),
        ("warmup:2,0.5", warmup_system(2, 0.5)?),
        ("random:5", supporting_random_system(5, seed)?),
    ];
    for (name, base) in &plain_bases {
        let fam = greedy_prune(&random_cover(base, seed, 1 << 16)?)?;
        let covered = fam.covers_all()?;
        ok &= covered;
        notes.push(format!(
            "{name}:{}{}",
            fam.len(),
            if covered { "" } else { "!" }
        ));
    }
    let unique_bases = [
        (
            "thm45:4",
            theorem45_system(&Thm45Params::new(4, 0.75, 0.5))?,
        ),
        ("thm45:5", theorem45_system(&Thm45Params::new(5, 0.8, 0.4))?),
        (
            "thm45:6",
            theorem45_system(&Thm45Params::new(6, 2.0 / 3.0, 1.0 / 3.0))?,
        ),
        ("powerset:5", powerset(5)?),
    ];
    for (name, base) in &unique_bases {
        let n = base.n();
        let fam = make_unique(&greedy_prune(&random_cover(base, seed, 1 << 16)?)?)?;
        let once = fam.supports_exactly_once()?;
        let ones = PermutationProblem::new(n, 0, Counting, |_, _| BigUint::one())?;
        let count = evaluate_unique(&ones, &fam)?;
        let exact = count == big_factorial(n);
        ok &= once && exact;
        notes.push(format!("unique {name}:{} count={count}", fam.len()));
    }
    Ok((ok, notes.join(" ")))
}

fn linear_extensions(seed: u64) -> Result<(bool, String)> {
    let mut bad = 0;
    for i in 0..100u64 {
        let n = 1 + (i % 8) as usize;
        let density = 0.1 + 0.15 * (i % 5) as f64;
        let p = Poset::random(n, density, seed.wrapping_add(500 + i))?;
        let brute = Permutation::all(n)
            .filter(|q| p.is_linear_extension(q.as_slice()))
            .count();
        if count_linear_extensions(&p)? != BigUint::from(brute) {
            bad += 1;
        }
    }
    for n in 1..=8 {
        if count_linear_extensions(&Poset::antichain(n)?)? != big_factorial(n)
            || !count_linear_extensions(&Poset::chain(n)?)?.is_one()
        {
            bad += 1;
        }
    }
    Ok((
        bad == 0,
        format!("100 random posets plus chains and antichains, {bad} mismatches"),
    ))
}

fn self_intersection(_: u64) -> Result<(bool, String)> {
    let f = theorem45_system(&Thm45Params::new(6, 2.0 / 3.0, 1.0 / 3.0))?;
    let a = regularly_self_intersecting(&f)?;
    let b = regularly_self_intersecting(&powerset(4)?)?;
    Ok((a && b, format!("single-block n=6: {a}, powerset n=4: {b}")))
}

fn jlr_report(_: u64) -> Result<(bool, String)> {
    let rows = jlr_comparison(&[8, 12, 16, 20, 24])?;
    let rising = rows.windows(2).all(|w| w[0].tower_p < w[1].tower_p)
        && rows.iter().all(|r| r.tower_p < 2.0);
    let last = rows.last().expect("five rows");
    let strict = last.thm41_p < last.tower_p;
    let table: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "n={} tower P={:.4} four-block P={:.4}",
                r.n, r.tower_p, r.thm41_p
            )
        })
        .collect();
    Ok((
        rising && strict,
        format!("{}; formula P={:.6}", table.join("; "), last.formula_p),
    ))
}
