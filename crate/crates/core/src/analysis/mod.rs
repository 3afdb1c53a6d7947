//! Closed-form bounds on `(lg S, lg P)` for the parametric constructions,
//! the chain-count lower bound, interpolation and boosting of tradeoff points,
//! and the tradeoff curves built from them.
//!
//! All formulas are evaluated without the asymptotic slack term; finite-n
//! deviation is measured separately against the constructed systems.

mod curve;
mod optimize;

use std::fmt;

use num_bigint::BigUint;

pub use curve::{
    emit_curve, jlr_comparison, jlr_params, write_curve_csv, CurveRow, JlrRow, CURVE_HEADER,
    DEFAULT_GRID,
};
pub use optimize::{optimize_params, Optimized, Theorem};

use crate::error::{Error, Result};
use crate::setsys::big_factorial;

const EPS: f64 = 1e-12;

/// Binary entropy `H(x) = −x lg x − (1−x) lg(1−x)`, with `H(0) = H(1) = 0`.
pub fn entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain {
            value: x,
            domain: "[0, 1]",
        });
    }
    Ok(h(x))
}

/// Entropy for internally computed arguments; values within `EPS` of `[0, 1]` are clamped.
pub(crate) fn h(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        debug_assert!(x > -1e-9 && x < 1.0 + 1e-9, "entropy argument {x}");
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

/// Parameters of the bound formulas; `gamma` only enters the four-block bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl BoundParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        BoundParams { alpha, beta, gamma }
    }
}

/// `(lg S, lg P)` upper bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bounds {
    pub lg_s: f64,
    pub lg_p: f64,
}

impl Bounds {
    pub fn s(&self) -> f64 {
        self.lg_s.exp2()
    }

    pub fn p(&self) -> f64 {
        self.lg_p.exp2()
    }

    /// `S · T = S² · P`
    pub fn st(&self) -> f64 {
        (2.0 * self.lg_s + self.lg_p).exp2()
    }
}

/// Bounds for the four-block construction, valid for
/// `1/4 <= β <= γ <= 1/2` and `β <= α <= 1/2`.
pub fn thm41_bounds(p: BoundParams) -> Result<Bounds> {
    let BoundParams { alpha, beta, gamma } = p;
    if !(0.25 - EPS <= beta
        && beta <= gamma + EPS
        && gamma <= 0.5 + EPS
        && beta <= alpha + EPS
        && alpha <= 0.5 + EPS)
    {
        return Err(Error::InvalidParameters(format!(
            "need 1/4 <= beta <= gamma <= 1/2 and beta <= alpha <= 1/2, got {p:?}"
        )));
    }
    let lg_s = alpha.max(0.5 * (h(2.0 * beta) + h(1.0 - 2.0 * gamma)));
    let width = 0.5 - beta;
    let band = if width < EPS {
        0.0
    } else {
        width
            * (h((gamma - beta) / width)
                + h((0.5 - gamma) / width)
                + 2.0 * h((alpha - beta) / width))
    };
    Ok(Bounds {
        lg_s,
        lg_p: 1.0 + h(2.0 * alpha) - band,
    })
}

/// Bounds for the single-block construction, valid for `0 < α <= 1`, `α/2 <= β <= α`.
pub fn thm45_bounds(alpha: f64, beta: f64) -> Result<Bounds> {
    if !(alpha > 0.0 && alpha <= 1.0 + EPS && alpha / 2.0 <= beta + EPS && beta <= alpha + EPS) {
        return Err(Error::InvalidParameters(format!(
            "need 0 < alpha <= 1 and alpha/2 <= beta <= alpha, got alpha={alpha}, beta={beta}"
        )));
    }
    let lg_s = alpha.max((1.0 - alpha) + alpha * h(beta / alpha));
    let rest = 1.0 - beta;
    let tail = if rest < EPS {
        0.0
    } else {
        rest * h((alpha - beta) / rest)
    };
    Ok(Bounds {
        lg_s,
        lg_p: h(alpha) - tail,
    })
}

/// Root `γ ∈ [β, 1/2]` of `H(2β) + H(1 − 2γ) = 2α`, by bisection to `1e-12`.
pub fn solve_gamma(alpha: f64, beta: f64) -> Result<f64> {
    if !(0.25 - EPS..=0.5 + EPS).contains(&beta) {
        return Err(Error::Domain {
            value: beta,
            domain: "beta in [1/4, 1/2]",
        });
    }
    let target = 2.0 * alpha - h(2.0 * beta);
    // H(1 − 2γ) falls from H(1 − 2β) to 0 as γ runs over [β, 1/2].
    let g = |gamma: f64| h(1.0 - 2.0 * gamma) - target;
    let (mut lo, mut hi) = (beta, 0.5);
    let (g_lo, g_hi) = (g(lo), g(hi));
    if g_hi.abs() <= EPS {
        return Ok(0.5);
    }
    if g_lo.abs() <= EPS {
        return Ok(beta);
    }
    if g_lo < 0.0 || g_hi > 0.0 {
        return Err(Error::NoRootInBracket { lo, hi });
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `max_k (k+1) / s^k` over integers `k >= 0`, with the maximizing `k`.
pub fn lower_bound_p(s: f64) -> Result<(f64, usize)> {
    if !(s > 1.0 && s <= 2.0) {
        return Err(Error::Domain {
            value: s,
            domain: "(1, 2]",
        });
    }
    // The terms are unimodal in k: the ratio of consecutive terms is (k+2)/((k+1)s).
    let mut k = 0usize;
    let mut best = 1.0;
    loop {
        let next = (k as f64 + 2.0) / s.powi(k as i32 + 1);
        if next <= best {
            return Ok((best, k));
        }
        best = next;
        k += 1;
    }
}

/// Upper bound on `C(F)` from splitting a chain at `k` evenly spaced levels:
/// `(⌈n/(k+1)⌉!)^{k+1} · |F|^k`.
pub fn chain_count_ceiling(n: usize, size: usize, k: usize) -> BigUint {
    let seg = n.div_ceil(k + 1);
    big_factorial(seg).pow(k as u32 + 1) * BigUint::from(size).pow(k as u32)
}

/// Geometric interpolation `(s1^μ s2^{1−μ}, p1^μ p2^{1−μ})`.
pub fn interpolate(s1: f64, p1: f64, s2: f64, p2: f64, mu: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&mu) {
        return Err(Error::Domain {
            value: mu,
            domain: "[0, 1]",
        });
    }
    let mix = |a: f64, b: f64| (mu * a.log2() + (1.0 - mu) * b.log2()).exp2();
    Ok((mix(s1, s2), mix(p1, p2)))
}

/// Label of a tradeoff point: the construction it came from and how many times it was boosted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Source {
    pub base: String,
    pub boosts: u32,
}

impl Source {
    pub fn new(base: impl Into<String>) -> Self {
        Source {
            base: base.into(),
            boosts: 0,
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.boosts {
            0 => f.write_str(&self.base),
            1 => write!(f, "boost({})", self.base),
            k => write!(f, "boost^{k}({})", self.base),
        }
    }
}

/// A feasible `(S, T)` pair.
#[derive(Clone, Debug, PartialEq)]
pub struct TradeoffPoint {
    pub s: f64,
    pub t: f64,
    pub product: f64,
    pub source: Source,
}

impl TradeoffPoint {
    pub fn new(s: f64, t: f64, source: Source) -> Self {
        TradeoffPoint {
            s,
            t,
            product: s * t,
            source,
        }
    }

    /// The point given by a set system bound: `T = S · P`.
    pub fn from_bounds(b: Bounds, source: &str) -> Self {
        TradeoffPoint::new(b.s(), b.s() * b.p(), Source::new(source))
    }
}

/// One level of divide and conquer on top of an existing solver: `(S, T) -> (√S, 2√T)`.
pub fn boost(pt: &TradeoffPoint) -> TradeoffPoint {
    let source = Source {
        base: pt.source.base.clone(),
        boosts: pt.source.boosts + 1,
    };
    TradeoffPoint::new(pt.s.sqrt(), 2.0 * pt.t.sqrt(), source)
}
