use super::{better, restricted_dp, Solution, TspInstance};
use crate::constructions::{theorem45_system, tower_of_cubes, Thm45Params};
use crate::cover::{exact_min_cover, greedy_prune, random_cover, CoverFamily, EXACT_COVER_CAP};
use crate::error::{Error, Result};
use crate::setsys::SetSystem;

/// Largest block on which family coverage is checked before solving.
const COVERAGE_CHECK_CAP: usize = 8;

/// `⌊n/m⌋` consecutive blocks of size `m`, the remainder joining the last one.
pub fn block_sizes(n: usize, m: usize) -> Result<Vec<usize>> {
    if m == 0 || m > n {
        return Err(Error::InvalidSizes(format!(
            "block size {m} does not fit n = {n}"
        )));
    }
    let mut sizes = vec![m; n / m];
    *sizes.last_mut().expect("at least one block") += n % m;
    Ok(sizes)
}

/// Base system for a block of `b` cities: a two-level tower of `b/2`-cubes for
/// even `b`, otherwise the single-block system with `|L| = b − 1` and
/// threshold `⌈(b − 1)/2⌉`.
pub fn block_base(b: usize) -> Result<SetSystem> {
    if b.is_multiple_of(2) {
        tower_of_cubes(b / 2, 2)
    } else if b == 1 {
        crate::constructions::powerset(1)
    } else {
        let alpha = (b - 1) as f64 / b as f64;
        let beta = (b - 1).div_ceil(2) as f64 / b as f64;
        theorem45_system(&Thm45Params::new(b, alpha, beta))
    }
}

/// Covering families for each block of `block_sizes(n, m)`: exact minimum
/// covers up to five cities, seeded greedy-pruned random covers above.
pub fn block_families(n: usize, m: usize, seed: u64) -> Result<Vec<CoverFamily>> {
    block_sizes(n, m)?
        .into_iter()
        .map(|b| {
            let base = block_base(b)?;
            if b <= EXACT_COVER_CAP {
                exact_min_cover(&base)
            } else {
                greedy_prune(&random_cover(&base, seed, 1 << 16)?)
            }
        })
        .collect()
}

fn prepare(
    inst: &TspInstance,
    block_size: usize,
    families: &[CoverFamily],
) -> Result<Vec<Vec<SetSystem>>> {
    let sizes = block_sizes(inst.n(), block_size)?;
    if families.len() != sizes.len() {
        return Err(Error::InvalidSizes(format!(
            "{} blocks but {} families",
            sizes.len(),
            families.len()
        )));
    }
    for (fam, &size) in families.iter().zip(&sizes) {
        if fam.n() != size {
            return Err(Error::GroundSetMismatch {
                expected: size,
                found: fam.n(),
            });
        }
        if fam.is_empty() || (size <= COVERAGE_CHECK_CAP && !fam.covers_all()?) {
            return Err(Error::NotCovering);
        }
    }
    Ok(families.iter().map(CoverFamily::members).collect())
}

/// Mixed-radix digits of `index`, first block least significant.
fn digits(mut index: usize, radices: &[usize]) -> Vec<usize> {
    radices
        .iter()
        .map(|&r| {
            let d = index % r;
            index /= r;
            d
        })
        .collect()
}

fn solve_tuple(
    inst: &TspInstance,
    members: &[Vec<SetSystem>],
    tuple: &[usize],
) -> Result<Option<Solution>> {
    let mut f = members[0][tuple[0]].clone();
    for (block, &j) in members.iter().zip(tuple).skip(1) {
        f = f.union_product(&block[j])?;
    }
    restricted_dp(inst, &f)
}

/// Blocks the cities into consecutive groups, and for every choice of one member
/// per block solves the restricted DP over the union product of the choices.
///
/// Each family must support every permutation of its block, so every tour is
/// supported by at least one union product and the minimum is exact.
pub fn framework_solver(
    inst: &TspInstance,
    block_size: usize,
    families: &[CoverFamily],
) -> Result<Solution> {
    framework_solver_threaded(inst, block_size, families, 1)
}

/// [`framework_solver`] with index tuples split over `threads` workers.
pub fn framework_solver_threaded(
    inst: &TspInstance,
    block_size: usize,
    families: &[CoverFamily],
    threads: usize,
) -> Result<Solution> {
    let members = prepare(inst, block_size, families)?;
    let radices: Vec<usize> = members.iter().map(Vec::len).collect();
    let total: usize = radices.iter().product();
    let threads = threads.clamp(1, total);
    let results: Vec<Result<Option<Solution>>> = std::thread::scope(|scope| {
        let workers: Vec<_> = (0..threads)
            .map(|w| {
                let (members, radices) = (&members, &radices);
                scope.spawn(move || {
                    let mut best = None;
                    for index in (w..total).step_by(threads) {
                        best = better(best, solve_tuple(inst, members, &digits(index, radices))?);
                    }
                    Ok(best)
                })
            })
            .collect();
        workers
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let mut best = None;
    for r in results {
        best = better(best, r?);
    }
    best.ok_or(Error::NotCovering)
}
