//! Exact TSP solvers. Every solver returns the optimal cyclic cost together
//! with the lexicographically smallest optimal tour it can represent.

mod exact;
mod framework;
mod gs;
mod restricted;
mod warmup;

use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;

use rand::Rng as _;

pub use exact::{brute_force, held_karp, BRUTE_FORCE_CAP, HELD_KARP_CAP};
pub use framework::{
    block_base, block_families, block_sizes, framework_solver, framework_solver_threaded,
};
pub use gs::gurevich_shelah;
pub use restricted::{restricted_dp, restricted_dp_with_stats, RestrictedStats};
pub use warmup::{
    warmup_prefix_system, warmup_solver, warmup_solver_exhaustive, warmup_success_probability,
    warmup_trials,
};

use crate::error::{Error, Result};
use crate::rng::seeded;
use crate::setsys::Permutation;

/// `n` cities with a full, possibly asymmetric, integer distance matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TspInstance {
    n: usize,
    dist: Vec<i64>,
}

impl TspInstance {
    /// Rejects matrices that are not `n × n` with `n >= 2`, or whose worst-case tour sum overflows.
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::InvalidInstance(format!(
                "need at least 2 cities, got {n}"
            )));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::InvalidInstance(format!(
                "row {} has {} entries, expected {n}",
                i + 1,
                r.len()
            )));
        }
        // Any tour uses one edge out of each city.
        let worst: i128 = rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &w)| (w as i128).abs())
                    .max()
                    .unwrap_or(0)
            })
            .sum();
        if worst > i64::MAX as i128 {
            return Err(Error::InvalidInstance(
                "edge weights can overflow a tour sum".into(),
            ));
        }
        let mut dist: Vec<i64> = rows.into_iter().flatten().collect();
        for i in 0..n {
            dist[i * n + i] = 0;
        }
        Ok(TspInstance { n, dist })
    }

    /// Uniform weights in `[1, max_weight]` from the seeded generator.
    pub fn random(n: usize, seed: u64, max_weight: i64) -> Result<Self> {
        if max_weight < 1 {
            return Err(Error::InvalidInstance("max weight must be positive".into()));
        }
        let mut rng = seeded(seed);
        let rows = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(1..=max_weight)).collect())
            .collect();
        TspInstance::new(rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Distance from city `i` to city `j` (1-based).
    #[inline]
    pub fn d(&self, i: usize, j: usize) -> i64 {
        self.dist[(i - 1) * self.n + (j - 1)]
    }

    /// Cost of the closed tour visiting `order` and returning to its first city.
    pub fn tour_cost(&self, order: &[usize]) -> i64 {
        let path: i64 = order.windows(2).map(|w| self.d(w[0], w[1])).sum();
        match (order.first(), order.last()) {
            (Some(&a), Some(&b)) if order.len() > 1 => path + self.d(b, a),
            _ => path,
        }
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "n {}", self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = self.dist[i * self.n..(i + 1) * self.n]
                .iter()
                .map(i64::to_string)
                .collect();
            writeln!(w, "{}", row.join(" "))?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("ascii output")
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r
            .lines()
            .enumerate()
            .filter(|(_, l)| l.as_ref().map_or(true, |l| !l.trim().is_empty()));
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(0, "empty instance file"))?;
        let header = header?;
        let n: usize = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["n", v] => v
                .parse()
                .map_err(|_| Error::parse(1, format!("bad city count `{v}`")))?,
            _ => return Err(Error::parse(1, "expected `n <n>`")),
        };
        let mut rows = Vec::with_capacity(n);
        for (i, line) in lines {
            let line = line?;
            let row = line
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<Vec<i64>, _>>()
                .map_err(|_| Error::parse(i + 1, "bad distance entry"))?;
            if row.len() != n {
                return Err(Error::parse(
                    i + 1,
                    format!("expected {n} entries, got {}", row.len()),
                ));
            }
            rows.push(row);
        }
        if rows.len() != n {
            return Err(Error::parse(
                0,
                format!("expected {n} rows, got {}", rows.len()),
            ));
        }
        TspInstance::new(rows)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        TspInstance::read_from(text.as_bytes())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        TspInstance::read_from(std::io::BufReader::new(std::fs::File::open(path)?))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_to(&mut w)?;
        w.flush()?;
        Ok(())
    }
}

/// An optimal tour and its cost.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Solution {
    pub value: i64,
    pub tour: Permutation,
}

impl Solution {
    pub(crate) fn new(value: i64, tour: Vec<usize>) -> Self {
        Solution {
            value,
            tour: Permutation::from_vec_unchecked(tour),
        }
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "value {}\ntour {}", self.value, self.tour)
    }
}

/// Keeps the smaller of two candidates by `(value, tour)`.
pub(crate) fn better(a: Option<Solution>, b: Option<Solution>) -> Option<Solution> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_cost() {
        let inst = TspInstance::from_text("n 3\n0 1 2\n3 0 4\n5 6 0\n").unwrap();
        assert_eq!(inst.tour_cost(&[1, 2, 3]), 1 + 4 + 5);
        assert_eq!(inst.tour_cost(&[1, 3, 2]), 2 + 6 + 3);
        assert_eq!(TspInstance::from_text(&inst.to_text()).unwrap(), inst);
    }

    #[test]
    fn diagonal_is_ignored() {
        let inst = TspInstance::from_text("n 2\n9 1\n2 9\n").unwrap();
        assert_eq!(inst.d(1, 1), 0);
        assert_eq!(inst.tour_cost(&[1, 2]), 3);
    }

    #[test]
    fn rejects_bad_instances() {
        for bad in [
            "",
            "n 1\n0\n",
            "n 2\n0 1\n",
            "n 2\n0 1\n1 x\n",
            "m 2\n0 1\n1 0\n",
            "n 2\n0 1 2\n1 0\n",
        ] {
            assert!(TspInstance::from_text(bad).is_err(), "{bad:?}");
        }
        let huge = vec![vec![0, i64::MAX], vec![1, 0]];
        assert!(TspInstance::new(huge).is_err());
    }

    #[test]
    fn random_is_reproducible() {
        assert_eq!(
            TspInstance::random(6, 5, 100).unwrap(),
            TspInstance::random(6, 5, 100).unwrap()
        );
        assert_ne!(
            TspInstance::random(6, 5, 100).unwrap(),
            TspInstance::random(6, 6, 100).unwrap()
        );
    }
}
