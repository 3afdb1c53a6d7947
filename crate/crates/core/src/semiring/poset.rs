use std::io::{BufRead, Write};
use std::path::Path;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng as _;

use super::{evaluate_dp, Counting, PermutationProblem};
use crate::error::{Error, Result};
use crate::rng::{random_permutation, seeded};
use crate::setsys::{check_sparse, ElementSet};

/// A strict partial order on `[n]`, stored transitively closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    n: usize,
    /// `below[y]` holds every `x ≺ y`.
    below: Vec<ElementSet>,
}

impl Poset {
    /// Closes `relations` (pairs `a ≺ b`) transitively; cycles are rejected.
    pub fn new(n: usize, relations: &[(usize, usize)]) -> Result<Self> {
        check_sparse(n)?;
        let mut below = vec![ElementSet::EMPTY; n + 1];
        for &(a, b) in relations {
            if a == 0 || b == 0 || a > n || b > n {
                return Err(Error::NotPartialOrder(format!(
                    "{a} < {b} is outside [{n}]"
                )));
            }
            below[b] = below[b].with(a);
        }
        // Warshall closure over bitsets.
        for k in 1..=n {
            for y in 1..=n {
                if below[y].contains(k) {
                    below[y] = below[y].union(below[k]);
                }
            }
        }
        if let Some(y) = (1..=n).find(|&y| below[y].contains(y)) {
            return Err(Error::NotPartialOrder(format!(
                "element {y} lies on a cycle"
            )));
        }
        Ok(Poset { n, below })
    }

    pub fn antichain(n: usize) -> Result<Self> {
        Poset::new(n, &[])
    }

    /// `1 ≺ 2 ≺ … ≺ n`.
    pub fn chain(n: usize) -> Result<Self> {
        let pairs: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        Poset::new(n, &pairs)
    }

    /// Each pair is related with probability `density`, along a random linear order.
    pub fn random(n: usize, density: f64, seed: u64) -> Result<Self> {
        let mut rng = seeded(seed);
        let order = random_permutation(&mut rng, n);
        let o = order.as_slice();
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(density.clamp(0.0, 1.0)) {
                    pairs.push((o[i], o[j]));
                }
            }
        }
        Poset::new(n, &pairs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `a ≺ b`.
    pub fn less(&self, a: usize, b: usize) -> bool {
        self.below[b].contains(a)
    }

    /// Every `x ≺ y`.
    pub fn below(&self, y: usize) -> ElementSet {
        self.below[y]
    }

    /// No element appears before one of its predecessors.
    pub fn is_linear_extension(&self, order: &[usize]) -> bool {
        let mut seen = ElementSet::EMPTY;
        order.iter().all(|&y| {
            let ok = self.below[y].is_subset(seen);
            seen = seen.with(y);
            ok
        })
    }

    /// Writes the closed relation, one `a < b` line per pair.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "n {}", self.n)?;
        for b in 1..=self.n {
            for a in self.below[b].elements() {
                writeln!(w, "{a} < {b}")?;
            }
        }
        Ok(())
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut n = None;
        let mut pairs = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            let num = |w: &str| {
                w.parse::<usize>()
                    .map_err(|_| Error::parse(i + 1, format!("bad element `{w}`")))
            };
            match (n, words.as_slice()) {
                (None, ["n", v]) => n = Some(num(v)?),
                (None, _) => return Err(Error::parse(i + 1, "expected `n <n>`")),
                (Some(_), [a, "<", b]) => pairs.push((num(a)?, num(b)?)),
                (Some(_), _) => return Err(Error::parse(i + 1, "expected `a < b`")),
            }
        }
        let n = n.ok_or_else(|| Error::parse(0, "empty poset file"))?;
        Poset::new(n, &pairs)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        Poset::read_from(text.as_bytes())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Poset::read_from(std::io::BufReader::new(std::fs::File::open(path)?))
    }
}

/// `f_j(A, y) = 1` when every predecessor of the newly placed `y` is in `A`, else `0`.
pub fn linear_extension_problem(poset: &Poset) -> Result<PermutationProblem<Counting>> {
    let below = poset.below.clone();
    PermutationProblem::new(poset.n, 1, Counting, move |prefix, tail| {
        let y = tail[0];
        if below[y].is_subset(prefix) {
            BigUint::one()
        } else {
            BigUint::zero()
        }
    })
}

/// Number of linear extensions, by dynamic programming over downsets.
pub fn count_linear_extensions(poset: &Poset) -> Result<BigUint> {
    evaluate_dp(&linear_extension_problem(poset)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setsys::Permutation;

    #[test]
    fn extremes() {
        assert_eq!(
            count_linear_extensions(&Poset::antichain(3).unwrap()).unwrap(),
            BigUint::from(6u32)
        );
        assert_eq!(
            count_linear_extensions(&Poset::chain(7).unwrap()).unwrap(),
            BigUint::one()
        );
    }

    #[test]
    fn closure_and_cycles() {
        let p = Poset::new(4, &[(1, 2), (2, 3)]).unwrap();
        assert!(p.less(1, 3) && !p.less(3, 1) && !p.less(1, 4));
        assert!(Poset::new(3, &[(1, 2), (2, 3), (3, 1)]).is_err());
        assert!(Poset::new(3, &[(2, 2)]).is_err());
        assert!(Poset::new(3, &[(1, 4)]).is_err());
    }

    #[test]
    fn file_round_trip() {
        let p = Poset::from_text("n 5\n1 < 2\n2 < 4\n3 < 4\n").unwrap();
        let mut buf = Vec::new();
        p.write_to(&mut buf).unwrap();
        assert_eq!(Poset::read_from(&buf[..]).unwrap(), p);
        for bad in ["", "1 < 2\n", "n 3\n1 > 2\n", "n 3\n1 < x\n"] {
            assert!(Poset::from_text(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn matches_enumeration() {
        for seed in 0..20 {
            let p = Poset::random(6, 0.3, seed).unwrap();
            let brute = Permutation::all(6)
                .filter(|q| p.is_linear_extension(q.as_slice()))
                .count();
            assert_eq!(count_linear_extensions(&p).unwrap(), BigUint::from(brute));
        }
    }
}
