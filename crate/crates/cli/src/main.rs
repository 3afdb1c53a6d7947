use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use chainfold::analysis::{
    emit_curve, jlr_comparison, optimize_params, solve_gamma, thm41_bounds, thm45_bounds,
    write_curve_csv, BoundParams, Bounds, Theorem, DEFAULT_GRID,
};
use chainfold::constructions::Construction;
use chainfold::cover::{
    exact_min_cover, greedy_prune, make_unique, prescribed_family_size, random_cover, CoverFamily,
};
use chainfold::semiring::{
    count_linear_extensions, evaluate_brute, evaluate_dp, evaluate_restricted, evaluate_unique,
    linear_extension_problem, tsp_tour_problem, PermutationProblem, Poset, Semiring,
};
use chainfold::solver::{
    block_families, brute_force, framework_solver_threaded, gurevich_shelah, held_karp,
    restricted_dp_with_stats, warmup_solver, warmup_trials, Solution, TspInstance,
};
use chainfold::{verify, Error, SetSystem};

#[derive(Parser)]
#[command(
    name = "chainfold",
    version,
    about = "Set-system space-time tradeoffs for exact TSP and permutation problems"
)]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, env = "CHAINFOLD_SEED", default_value_t = 0)]
    seed: u64,

    /// Worker threads for the framework solver and curve grids.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a TSP instance exactly.
    Solve(SolveArgs),
    /// Build set systems and print their metrics.
    Sys(SysArgs),
    /// Build covering families of relabeled set systems.
    Cover(CoverArgs),
    /// Count the linear extensions of a poset.
    CountLe(CountLeArgs),
    /// Evaluate a permutation problem over its semiring.
    Eval(EvalArgs),
    /// Evaluate the closed-form size and density bounds.
    Bounds(BoundsArgs),
    /// Minimize the density bound at a given size.
    Optimize(OptimizeArgs),
    /// Write the upper and lower tradeoff curves as CSV.
    Curve(CurveArgs),
    /// Run the self-checks.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Alg {
    Brute,
    Bhk,
    Restricted,
    Gs,
    Warmup,
    Framework,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    alg: Alg,
    #[arg(long)]
    instance: PathBuf,
    /// Set system for `restricted`.
    #[arg(long)]
    set_system: Option<PathBuf>,
    /// Recursion depth for `gs` before switching to dynamic programming.
    #[arg(long, default_value_t = 1)]
    depth: usize,
    /// Balance parameter for `warmup`.
    #[arg(long, default_value_t = 0.445)]
    alpha: f64,
    /// Trials for `warmup`; defaults to n divided by the success probability.
    #[arg(long)]
    trials: Option<usize>,
    /// Block size for `framework`; defaults to n/2.
    #[arg(long)]
    block_size: Option<usize>,
}

#[derive(Args)]
struct SysArgs {
    /// Construction: powerset:n, chain:n, tower:t,k, kp, warmup:k,beta, thm41:n,a,b,g|auto, thm45:n,a,b.
    #[arg(long)]
    make: Option<String>,
    /// Write the constructed system here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print metrics, of the constructed system or of the given file.
    #[arg(long, num_args = 0..=1)]
    metrics: Option<Option<PathBuf>>,
}

#[derive(Args)]
struct CoverArgs {
    /// Base construction, as for `sys --make`.
    #[arg(long, conflicts_with = "base_file")]
    base: Option<String>,
    /// Base set-system file.
    #[arg(long)]
    base_file: Option<PathBuf>,
    /// Minimum cover by branch and bound instead of random relabelings.
    #[arg(long)]
    exact: bool,
    /// Keep random relabelings as drawn, without greedy pruning.
    #[arg(long)]
    no_prune: bool,
    /// Remove overlaps so each permutation is supported exactly once.
    #[arg(long)]
    unique: bool,
    #[arg(long, default_value_t = 1 << 16)]
    max_tries: usize,
    /// Write the family here; the base goes to the same path with `.base.ss` appended.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CountLeArgs {
    #[arg(long)]
    poset: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Problem {
    Tsp,
    Le,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Brute,
    Dp,
    Restricted,
    Unique,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long, value_enum)]
    problem: Problem,
    /// Instance file for `tsp`.
    #[arg(long)]
    instance: Option<PathBuf>,
    /// Poset file for `le`.
    #[arg(long)]
    poset: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "dp")]
    method: Method,
    /// Family file for `restricted` and `unique`.
    #[arg(long, conflicts_with = "base")]
    family: Option<PathBuf>,
    /// Base construction from which a seeded family is built instead.
    #[arg(long)]
    base: Option<String>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, required_unless_present = "jlr")]
    theorem: Option<Theorem>,
    #[arg(long, required_unless_present = "jlr")]
    alpha: Option<f64>,
    #[arg(long, required_unless_present = "jlr")]
    beta: Option<f64>,
    /// Four-block family only; solved from alpha and beta when absent.
    #[arg(long)]
    gamma: Option<f64>,
    /// Compare towers of cubes with four-block systems at these ground sizes.
    #[arg(long, value_delimiter = ',', num_args = 0.., conflicts_with_all = ["theorem", "alpha", "beta", "gamma"])]
    jlr: Option<Vec<usize>>,
}

#[derive(Args)]
struct OptimizeArgs {
    #[arg(long = "target-lgS", alias = "target-lgs")]
    target_lg_s: f64,
    #[arg(long)]
    theorem: Theorem,
    /// Grid spacing before local refinement.
    #[arg(long, default_value_t = 0.01)]
    step: f64,
}

#[derive(Args)]
struct CurveArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run one suite by name or number.
    #[arg(long)]
    suite: Option<String>,
    /// Validate a set-system file and cross-check its chain count.
    #[arg(long)]
    set_system: Option<PathBuf>,
}

/// Exit status for an error: 2 for unreadable or malformed input, 3 for resource caps.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::Io(_) => 2,
        e if e.is_cap_violation() => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(&cli, &mut out).and_then(|ok| {
        out.flush()?;
        Ok(ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

type Result<T> = chainfold::Result<T>;

/// Names the file in I/O errors.
fn at<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Io(io) => Error::Io(io::Error::new(
            io.kind(),
            format!("{}: {io}", path.display()),
        )),
        other => other,
    })
}

fn run(cli: &Cli, out: &mut impl Write) -> Result<bool> {
    match &cli.command {
        Command::Solve(a) => solve(a, cli, out),
        Command::Sys(a) => sys(a, out),
        Command::Cover(a) => cover(a, cli.seed, out),
        Command::CountLe(a) => {
            writeln!(
                out,
                "{}",
                count_linear_extensions(&at(a.poset.as_ref(), Poset::load(&a.poset))?)?
            )?;
            Ok(true)
        }
        Command::Eval(a) => eval(a, cli.seed, out),
        Command::Bounds(a) => bounds(a, out),
        Command::Optimize(a) => {
            let o = optimize_params(a.target_lg_s, a.theorem, a.step)?;
            writeln!(out, "theorem {}", o.theorem)?;
            match o.theorem {
                Theorem::FourBlock => writeln!(
                    out,
                    "alpha {:.6} beta {:.6} gamma {:.6}",
                    o.params.alpha, o.params.beta, o.params.gamma
                )?,
                Theorem::SingleBlock => {
                    writeln!(out, "alpha {:.6} beta {:.6}", o.params.alpha, o.params.beta)?
                }
            }
            print_bounds(&o.bounds, out)?;
            Ok(true)
        }
        Command::Curve(a) => {
            let rows = emit_curve(a.grid, cli.threads)?;
            let mut w = BufWriter::new(File::create(&a.out)?);
            write_curve_csv(&rows, &mut w)?;
            w.flush()?;
            writeln!(out, "rows {}", rows.len())?;
            Ok(true)
        }
        Command::Verify(a) => verify_cmd(a, cli.seed, out),
    }
}

fn solve(a: &SolveArgs, cli: &Cli, out: &mut impl Write) -> Result<bool> {
    let inst = at(a.instance.as_ref(), TspInstance::load(&a.instance))?;
    let n = inst.n();
    let start = Instant::now();
    let (sol, peak): (Solution, Option<usize>) = match a.alg {
        Alg::Brute => (brute_force(&inst)?, Some(0)),
        Alg::Bhk => (held_karp(&inst)?, Some((1usize << (n - 1)) * (n - 1))),
        Alg::Restricted => {
            let path = a
                .set_system
                .as_ref()
                .ok_or_else(|| Error::InvalidParameters("--set-system is required".into()))?;
            let (sol, stats) =
                restricted_dp_with_stats(&inst, &at(path.as_ref(), SetSystem::load(path))?)?;
            let sol = sol.ok_or_else(|| {
                Error::InvalidParameters("the set system supports no tour".into())
            })?;
            (sol, Some(stats.peak_entries))
        }
        Alg::Gs => (gurevich_shelah(&inst, a.depth), None),
        Alg::Warmup => {
            let trials = match a.trials {
                Some(t) => t,
                None => warmup_trials(n, a.alpha)?,
            };
            (warmup_solver(&inst, a.alpha, trials, cli.seed)?, None)
        }
        Alg::Framework => {
            let m = a.block_size.unwrap_or((n / 2).max(1));
            let families = block_families(n, m, cli.seed)?;
            (
                framework_solver_threaded(&inst, m, &families, cli.threads)?,
                None,
            )
        }
    };
    writeln!(out, "{sol}")?;
    writeln!(out, "algorithm {}", alg_name(a.alg))?;
    match peak {
        Some(p) => writeln!(out, "peak_entries {p}")?,
        None => writeln!(out, "peak_entries untracked")?,
    }
    eprintln!("elapsed {:.3}s", start.elapsed().as_secs_f64());
    Ok(true)
}

fn alg_name(a: Alg) -> &'static str {
    match a {
        Alg::Brute => "brute",
        Alg::Bhk => "bhk",
        Alg::Restricted => "restricted",
        Alg::Gs => "gs",
        Alg::Warmup => "warmup",
        Alg::Framework => "framework",
    }
}

fn construction(spec: &str) -> Result<SetSystem> {
    spec.parse::<Construction>()?.build()
}

fn sys(a: &SysArgs, out: &mut impl Write) -> Result<bool> {
    let built = a.make.as_deref().map(construction).transpose()?;
    if let (Some(f), Some(path)) = (&built, &a.out) {
        f.save(path)?;
    }
    let target = match (&a.metrics, &built) {
        (Some(Some(path)), _) => Some(at(path.as_ref(), SetSystem::load(path))?),
        (Some(None), Some(f)) => Some(f.clone()),
        (Some(None), None) => {
            return Err(Error::InvalidParameters(
                "--metrics needs a file or --make".into(),
            ))
        }
        (None, Some(f)) if a.out.is_none() => {
            f.write_to(&mut *out)?;
            None
        }
        (None, None) => {
            return Err(Error::InvalidParameters(
                "nothing to do: give --make or --metrics".into(),
            ))
        }
        (None, Some(_)) => None,
    };
    if let Some(f) = target {
        writeln!(out, "{}", f.metrics()?)?;
    }
    Ok(true)
}

fn base_system(spec: Option<&str>, file: Option<&Path>) -> Result<SetSystem> {
    match (spec, file) {
        (Some(s), _) => construction(s),
        (None, Some(p)) => at(p, SetSystem::load(p)),
        (None, None) => Err(Error::InvalidParameters(
            "give --base or --base-file".into(),
        )),
    }
}

fn build_family(
    base: &SetSystem,
    exact: bool,
    prune: bool,
    unique: bool,
    seed: u64,
    tries: usize,
) -> Result<CoverFamily> {
    let mut fam = if exact {
        exact_min_cover(base)?
    } else {
        let drawn = random_cover(base, seed, tries)?;
        if prune {
            greedy_prune(&drawn)?
        } else {
            drawn
        }
    };
    if unique {
        fam = make_unique(&fam)?;
    }
    Ok(fam)
}

fn cover(a: &CoverArgs, seed: u64, out: &mut impl Write) -> Result<bool> {
    let base = base_system(a.base.as_deref(), a.base_file.as_deref())?;
    let fam = build_family(&base, a.exact, !a.no_prune, a.unique, seed, a.max_tries)?;
    let complete = if a.unique {
        fam.supports_exactly_once()?
    } else {
        fam.covers_all()?
    };
    writeln!(out, "n {}", fam.n())?;
    writeln!(out, "mode {}", if fam.unique { "unique" } else { "plain" })?;
    writeln!(out, "family_size {}", fam.len())?;
    match prescribed_family_size(&base) {
        Some(q) => writeln!(out, "prescribed_size {q}")?,
        None => writeln!(out, "prescribed_size none")?,
    }
    writeln!(out, "verified {complete}")?;
    if let Some(path) = &a.out {
        let name = path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        fam.save(path, format!("{name}.base.ss"))?;
    }
    Ok(complete)
}

fn family_for(a: &EvalArgs, n: usize, unique: bool, seed: u64) -> Result<CoverFamily> {
    let fam = match (&a.family, &a.base) {
        (Some(path), _) => at(path.as_ref(), CoverFamily::load(path))?,
        (None, Some(spec)) => {
            build_family(&construction(spec)?, false, true, unique, seed, 1 << 16)?
        }
        (None, None) => {
            return Err(Error::InvalidParameters(
                "--family or --base is required".into(),
            ))
        }
    };
    if fam.n() != n {
        return Err(Error::GroundSetMismatch {
            expected: n,
            found: fam.n(),
        });
    }
    Ok(fam)
}

fn evaluate<R: Semiring>(p: &PermutationProblem<R>, a: &EvalArgs, seed: u64) -> Result<R::Value> {
    match a.method {
        Method::Brute => evaluate_brute(p),
        Method::Dp => evaluate_dp(p),
        Method::Restricted => evaluate_restricted(p, &family_for(a, p.n(), false, seed)?),
        Method::Unique => evaluate_unique(p, &family_for(a, p.n(), true, seed)?),
    }
}

fn eval(a: &EvalArgs, seed: u64, out: &mut impl Write) -> Result<bool> {
    let missing =
        |flag: &str| Error::InvalidParameters(format!("{flag} is required for this problem"));
    match a.problem {
        Problem::Tsp => {
            let path = a.instance.as_ref().ok_or_else(|| missing("--instance"))?;
            let inst = at(path, TspInstance::load(path))?;
            match evaluate(&tsp_tour_problem(&inst)?, a, seed)? {
                Some(v) => writeln!(out, "value {v}")?,
                None => writeln!(out, "value inf")?,
            }
        }
        Problem::Le => {
            let path = a.poset.as_ref().ok_or_else(|| missing("--poset"))?;
            let poset = at(path, Poset::load(path))?;
            writeln!(
                out,
                "value {}",
                evaluate(&linear_extension_problem(&poset)?, a, seed)?
            )?;
        }
    }
    Ok(true)
}

fn print_bounds(b: &Bounds, out: &mut impl Write) -> Result<()> {
    writeln!(out, "lgS {:.9} lgP {:.9}", b.lg_s, b.lg_p)?;
    writeln!(
        out,
        "S {:.6} P {:.6} T {:.6} ST {:.6}",
        b.s(),
        b.p(),
        b.s() * b.p(),
        b.st()
    )?;
    Ok(())
}

fn bounds(a: &BoundsArgs, out: &mut impl Write) -> Result<bool> {
    if let Some(ns) = &a.jlr {
        let ns = if ns.is_empty() {
            vec![8, 12, 16, 20, 24]
        } else {
            ns.clone()
        };
        writeln!(
            out,
            "n,tower_S,tower_P,four_block_S,four_block_P,formula_S,formula_P"
        )?;
        for r in jlr_comparison(&ns)? {
            writeln!(
                out,
                "{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}",
                r.n,
                r.tower_s,
                r.tower_p,
                r.thm41_s,
                r.thm41_p,
                r.formula_lg_s.exp2(),
                r.formula_p
            )?;
        }
        return Ok(true);
    }
    let (theorem, alpha, beta) = (
        a.theorem.expect("required"),
        a.alpha.expect("required"),
        a.beta.expect("required"),
    );
    let b = match theorem {
        Theorem::FourBlock => {
            let gamma = match a.gamma {
                Some(g) => g,
                None => solve_gamma(alpha, beta)?,
            };
            writeln!(out, "gamma {gamma:.9}")?;
            thm41_bounds(BoundParams::new(alpha, beta, gamma))?
        }
        Theorem::SingleBlock => thm45_bounds(alpha, beta)?,
    };
    print_bounds(&b, out)?;
    Ok(true)
}

fn verify_cmd(a: &VerifyArgs, seed: u64, out: &mut impl Write) -> Result<bool> {
    if let Some(path) = &a.set_system {
        let f = at(path.as_ref(), SetSystem::load(path))?;
        let m = f.metrics()?;
        writeln!(out, "{m}")?;
        if f.n() <= 8 {
            let oracle = f.supported_permutation_count()?;
            let agree = oracle == m.chains;
            writeln!(out, "oracle_chains {oracle} agree {agree}")?;
            return Ok(agree);
        }
        return Ok(true);
    }
    let results = verify::run(a.suite.as_deref(), seed)?;
    writeln!(out, "id\tsuite\tresult\tdetail")?;
    for r in &results {
        let verdict = if r.passed { "PASS" } else { "FAIL" };
        writeln!(out, "{}\t{}\t{}\t{}", r.id, r.suite, verdict, r.detail)?;
        eprintln!("{} {:.3}s", r.suite, r.elapsed.as_secs_f64());
    }
    Ok(results.iter().all(|r| r.passed))
}
