use std::fmt;
use std::str::FromStr;

use super::{h, solve_gamma, thm41_bounds, thm45_bounds, BoundParams, Bounds};
use crate::error::{Error, Result};

const FEAS_TOL: f64 = 1e-12;

/// Which parametric family to optimize over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Theorem {
    FourBlock,
    SingleBlock,
}

impl Theorem {
    pub fn label(self) -> &'static str {
        match self {
            Theorem::FourBlock => "thm41",
            Theorem::SingleBlock => "thm45",
        }
    }

    pub fn bounds(self, p: BoundParams) -> Result<Bounds> {
        match self {
            Theorem::FourBlock => thm41_bounds(p),
            Theorem::SingleBlock => thm45_bounds(p.alpha, p.beta),
        }
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "41" | "thm41" => Ok(Theorem::FourBlock),
            "45" | "thm45" => Ok(Theorem::SingleBlock),
            _ => Err(Error::InvalidParameters(format!(
                "unknown theorem `{s}` (expected 41 or 45)"
            ))),
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Optimized {
    pub theorem: Theorem,
    pub params: BoundParams,
    pub bounds: Bounds,
}

/// Minimizes `lg P` subject to `lg S <= target_lg_s` over the theorem's parameter region.
///
/// A grid of spacing `step` over two free coordinates is followed by a compass
/// search. For the four-block family `γ` is eliminated: the bracketed band
/// term is symmetric and concave in `γ` around `(β + 1/2)/2`, so the best
/// feasible `γ` is the larger of that midpoint and the smallest `γ` meeting
/// the size constraint. For the single-block family the coordinates are `α`
/// and `β/α`.
pub fn optimize_params(target_lg_s: f64, theorem: Theorem, step: f64) -> Result<Optimized> {
    if !(1e-4..=0.5).contains(&step) {
        return Err(Error::Domain {
            value: step,
            domain: "grid step in [1e-4, 1/2]",
        });
    }
    if !(target_lg_s > 0.0 && target_lg_s <= 1.0) {
        return Err(Error::Domain {
            value: target_lg_s,
            domain: "target lg S in (0, 1]",
        });
    }
    let eval = |u: f64, v: f64| -> Option<(BoundParams, Bounds)> {
        let params = match theorem {
            Theorem::FourBlock => thm41_params(target_lg_s, u, v)?,
            Theorem::SingleBlock => BoundParams::new(u, u * v, 0.0),
        };
        let b = theorem.bounds(params).ok()?;
        (b.lg_s <= target_lg_s + FEAS_TOL && b.lg_p.is_finite()).then_some((params, b))
    };
    let ((u_lo, u_hi), (v_lo, v_hi)) = match theorem {
        Theorem::FourBlock => ((0.25, 0.5), (0.25, 0.5)),
        Theorem::SingleBlock => ((step.min(1.0), 1.0), (0.5, 1.0)),
    };
    let ticks = |lo: f64, hi: f64| -> Vec<f64> {
        let k = ((hi - lo) / step).round().max(1.0) as usize;
        (0..=k)
            .map(|i| lo + (hi - lo) * i as f64 / k as f64)
            .collect()
    };
    let us = ticks(u_lo, u_hi);
    let vs = ticks(v_lo, v_hi);
    let mut best: Option<(f64, f64, BoundParams, Bounds)> = None;
    for &u in &us {
        for &v in &vs {
            if let Some((p, b)) = eval(u, v) {
                if best.as_ref().is_none_or(|cur| b.lg_p < cur.3.lg_p) {
                    best = Some((u, v, p, b));
                }
            }
        }
    }
    let Some((mut u, mut v, mut params, mut bounds)) = best else {
        return Err(Error::InvalidParameters(format!(
            "no {theorem} parameters reach lg S <= {target_lg_s}"
        )));
    };
    let mut delta = step;
    while delta > 1e-10 {
        let mut moved = false;
        for (du, dv) in [(delta, 0.0), (-delta, 0.0), (0.0, delta), (0.0, -delta)] {
            let (nu, nv) = ((u + du).clamp(u_lo, u_hi), (v + dv).clamp(v_lo, v_hi));
            if let Some((p, b)) = eval(nu, nv) {
                if b.lg_p < bounds.lg_p - 1e-15 {
                    (u, v, params, bounds) = (nu, nv, p, b);
                    moved = true;
                    break;
                }
            }
        }
        if !moved {
            delta /= 2.0;
        }
    }
    Ok(Optimized {
        theorem,
        params,
        bounds,
    })
}

/// Four-block parameters at `(α, β)` with the best `γ` for the size constraint.
fn thm41_params(target: f64, alpha: f64, beta: f64) -> Option<BoundParams> {
    if beta > alpha || alpha > target + FEAS_TOL {
        return None;
    }
    let budget = 2.0 * target - h(2.0 * beta);
    if budget < -FEAS_TOL {
        return None;
    }
    let gamma_min = if budget >= h(1.0 - 2.0 * beta) {
        beta
    } else {
        solve_gamma(target, beta).ok()?
    };
    let gamma = gamma_min.max(0.5 * (beta + 0.5)).min(0.5);
    Some(BoundParams::new(alpha, beta, gamma))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_reference_points() {
        let o = optimize_params(0.5, Theorem::FourBlock, 0.01).unwrap();
        assert!((o.bounds.lg_p - 1.785975f64.log2()).abs() < 1e-3);
        assert!(o.bounds.lg_s <= 0.5 + 1e-12);

        let o = optimize_params(1.7916f64.log2(), Theorem::SingleBlock, 0.01).unwrap();
        assert!((o.bounds.lg_p - 1.20375f64.log2()).abs() < 1e-3);
    }

    #[test]
    fn full_space_reaches_powerset() {
        let o = optimize_params(1.0, Theorem::SingleBlock, 0.05).unwrap();
        assert!(o.bounds.lg_p.abs() < 1e-9);
    }

    #[test]
    fn infeasible_targets_and_bad_steps() {
        assert!(optimize_params(0.1, Theorem::FourBlock, 0.01).is_err());
        assert!(optimize_params(0.3, Theorem::SingleBlock, 0.01).is_err());
        assert!(optimize_params(0.5, Theorem::FourBlock, 1e-5).is_err());
        assert!(optimize_params(1.5, Theorem::FourBlock, 0.01).is_err());
    }

    #[test]
    fn deterministic() {
        let a = optimize_params(0.47, Theorem::FourBlock, 0.02).unwrap();
        let b = optimize_params(0.47, Theorem::FourBlock, 0.02).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn theorem_names() {
        assert_eq!("41".parse::<Theorem>().unwrap(), Theorem::FourBlock);
        assert_eq!("thm45".parse::<Theorem>().unwrap(), Theorem::SingleBlock);
        assert!("42".parse::<Theorem>().is_err());
    }
}
