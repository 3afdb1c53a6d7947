use std::io::Write;

use super::{
    lower_bound_p, optimize_params, solve_gamma, thm41_bounds, BoundParams, Source, Theorem,
};
use crate::constructions::{koivisto_parviainen, theorem41_system, tower_of_cubes, Thm41Params};
use crate::error::Result;

pub const DEFAULT_GRID: usize = 512;
pub const CURVE_HEADER: &str = "x_lgS,S,T_upper,ST_upper,T_lower,ST_lower,source";

/// Grid spacing for the per-point parameter search before refinement.
const SEARCH_STEP: f64 = 0.01;

/// One sample of the tradeoff curves at `x = lg S`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveRow {
    pub x: f64,
    pub s: f64,
    /// Best time base from set systems, interpolation and boosting.
    pub t_upper: f64,
    pub st_upper: f64,
    /// `S · P` for the best set system of normalized size at most `S`, before boosting.
    pub t_set_system: Option<f64>,
    pub t_lower: f64,
    pub st_lower: f64,
    pub upper_source: Source,
    /// The `k` attaining the chain-count lower bound.
    pub lower_k: usize,
}

impl CurveRow {
    pub fn source_label(&self) -> String {
        format!("{}|lower:k={}", self.upper_source, self.lower_k)
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{:.6},{:.9},{:.9},{:.9},{:.9},{:.9},{}",
            self.x,
            self.s,
            self.t_upper,
            self.st_upper,
            self.t_lower,
            self.st_lower,
            self.source_label()
        )
    }
}

#[derive(Clone, Debug)]
struct Anchor {
    x: f64,
    lg_p: f64,
    label: String,
}

/// Fixed set-system points: the full powerset and the 13×2 tower.
fn fixed_anchors() -> Vec<Anchor> {
    let kp = koivisto_parviainen().metrics().expect("n = 26");
    vec![
        Anchor {
            x: 1.0,
            lg_p: 0.0,
            label: "st4".into(),
        },
        Anchor {
            x: kp.lg_s(),
            lg_p: kp.lg_p(),
            label: "kp".into(),
        },
    ]
}

fn optimized_anchors(xs: &[f64], threads: usize) -> Vec<Anchor> {
    let work = |x: f64| -> Vec<Anchor> {
        [Theorem::FourBlock, Theorem::SingleBlock]
            .into_iter()
            .filter_map(|th| optimize_params(x, th, SEARCH_STEP).ok())
            .map(|o| Anchor {
                x: o.bounds.lg_s.min(x),
                lg_p: o.bounds.lg_p,
                label: o.theorem.label().into(),
            })
            .collect()
    };
    let threads = threads.max(1);
    if threads == 1 {
        return xs.iter().flat_map(|&x| work(x)).collect();
    }
    let chunk = xs.len().div_ceil(threads);
    let parts: Vec<Vec<Anchor>> = std::thread::scope(|scope| {
        let handles: Vec<_> = xs
            .chunks(chunk.max(1))
            .map(|part| scope.spawn(move || part.iter().flat_map(|&x| work(x)).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("curve worker panicked"))
            .collect()
    });
    parts.into_iter().flatten().collect()
}

/// Lower convex hull in the `(lg S, lg P)` plane.
fn lower_hull(mut pts: Vec<Anchor>) -> Vec<Anchor> {
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.lg_p.total_cmp(&b.lg_p)));
    pts.dedup_by(|later, kept| later.x == kept.x);
    let mut hull: Vec<Anchor> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (o, a) = (&hull[hull.len() - 2], &hull[hull.len() - 1]);
            let cross = (a.x - o.x) * (p.lg_p - o.lg_p) - (a.lg_p - o.lg_p) * (p.x - o.x);
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

fn hull_at(hull: &[Anchor], x: f64) -> Option<(f64, String)> {
    let first = hull.first()?;
    if x < first.x {
        return None;
    }
    let i = hull.partition_point(|v| v.x <= x);
    let a = &hull[i - 1];
    if a.x == x {
        return Some((a.lg_p, a.label.clone()));
    }
    let b = hull.get(i)?;
    let mu = (x - a.x) / (b.x - a.x);
    let label = if a.label == b.label {
        a.label.clone()
    } else {
        format!("interp({}/{})", a.label, b.label)
    };
    Some((a.lg_p + mu * (b.lg_p - a.lg_p), label))
}

/// Tradeoff curves on `x = i / grid`, `i = 1..=grid`.
///
/// The set-system curve is the lower convex hull (interpolation) of the
/// optimized four-block and single-block points, the 13×2 tower and the
/// powerset, made monotone in `x`. Boosting is then closed over the grid:
/// `T(x) = min(T_sys(x), 2 √T(2x))`.
pub fn emit_curve(grid: usize, threads: usize) -> Result<Vec<CurveRow>> {
    if grid == 0 {
        return Err(crate::error::Error::InvalidParameters(
            "grid must be positive".into(),
        ));
    }
    let xs: Vec<f64> = (1..=grid).map(|i| i as f64 / grid as f64).collect();
    let mut anchors = fixed_anchors();
    anchors.extend(optimized_anchors(&xs, threads));
    let hull = lower_hull(anchors);

    let mut sys: Vec<Option<(f64, String)>> = xs.iter().map(|&x| hull_at(&hull, x)).collect();
    for i in 1..grid {
        if let (Some(prev), Some(cur)) = (sys[i - 1].clone(), sys[i].as_ref()) {
            if prev.0 < cur.0 {
                sys[i] = Some(prev);
            }
        }
    }
    let t_sys: Vec<Option<(f64, Source)>> = xs
        .iter()
        .zip(&sys)
        .map(|(&x, s)| {
            s.as_ref()
                .map(|(lg_p, label)| ((x + lg_p).exp2(), Source::new(label.clone())))
        })
        .collect();

    let mut upper: Vec<Option<(f64, Source)>> = vec![None; grid];
    for i in (1..=grid).rev() {
        let mut best = t_sys[i - 1].clone();
        if 2 * i <= grid {
            if let Some((t, src)) = &upper[2 * i - 1] {
                let boosted = 2.0 * t.sqrt();
                if best.as_ref().is_none_or(|b| boosted < b.0) && src.boosts < 40 {
                    best = Some((
                        boosted,
                        Source {
                            base: src.base.clone(),
                            boosts: src.boosts + 1,
                        },
                    ));
                }
            }
        }
        upper[i - 1] = best;
    }

    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let s = x.exp2();
            let (t_upper, upper_source) = upper[i]
                .clone()
                .expect("every grid point reaches x > 1/2 by doubling");
            let (p_low, lower_k) = lower_bound_p(s)?;
            Ok(CurveRow {
                x,
                s,
                t_upper,
                st_upper: s * t_upper,
                t_set_system: t_sys[i].as_ref().map(|(t, _)| *t),
                t_lower: s * p_low,
                st_lower: s * s * p_low,
                upper_source,
                lower_k,
            })
        })
        .collect()
}

pub fn write_curve_csv<W: Write>(rows: &[CurveRow], mut w: W) -> Result<()> {
    writeln!(w, "{CURVE_HEADER}")?;
    for r in rows {
        writeln!(w, "{}", r.csv_line())?;
    }
    Ok(())
}

/// Side-by-side densities of the balanced two-level tower and the four-block
/// system at the same ground size.
#[derive(Clone, Debug, PartialEq)]
pub struct JlrRow {
    pub n: usize,
    pub tower_s: f64,
    pub tower_p: f64,
    pub thm41_s: f64,
    pub thm41_p: f64,
    /// Formula value of `lg S` on the same parameters.
    pub formula_lg_s: f64,
    /// Formula value of `P` on the same parameters.
    pub formula_p: f64,
}

/// Parameters on the ray `α = 1/2, β = 0.4112, γ = γ(α, β)`.
pub fn jlr_params(n: usize) -> Result<Thm41Params> {
    let (alpha, beta) = (0.5, 0.4112);
    Ok(Thm41Params::new(n, alpha, beta, solve_gamma(alpha, beta)?))
}

pub fn jlr_comparison(ns: &[usize]) -> Result<Vec<JlrRow>> {
    ns.iter()
        .map(|&n| {
            let tower = tower_of_cubes(n / 2, 2)?.metrics()?;
            let params = jlr_params(n)?;
            let sys = theorem41_system(&params)?.metrics()?;
            let formula = thm41_bounds(BoundParams::new(params.alpha, params.beta, params.gamma))?;
            Ok(JlrRow {
                n,
                tower_s: tower.size_s,
                tower_p: tower.density_p,
                thm41_s: sys.size_s,
                thm41_p: sys.density_p,
                formula_lg_s: formula.lg_s,
                formula_p: formula.p(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grid_invariants() {
        let rows = emit_curve(64, 2).unwrap();
        assert_eq!(rows.len(), 64);
        for r in &rows {
            assert!(r.st_lower >= 3.0 - 1e-9);
            if r.t_upper > 2.0 + 1e-12 && r.t_upper < 4.0 {
                assert!(r.st_upper < 4.0, "{r:?}");
            }
            if let Some(t) = r.t_set_system {
                assert!(r.s * t >= r.st_lower - 1e-9);
            }
        }
        let half = &rows[31];
        assert_eq!(half.x, 0.5);
        assert!(half.st_upper < 3.572, "{half:?}");
        assert_eq!(rows[63].upper_source.to_string(), "st4");
        assert_eq!(rows[63].t_upper, 2.0);
    }

    #[test]
    fn thread_count_does_not_change_output() {
        assert_eq!(emit_curve(32, 1).unwrap(), emit_curve(32, 3).unwrap());
    }

    #[test]
    fn csv_layout() {
        let rows = emit_curve(8, 1).unwrap();
        let mut out = Vec::new();
        write_curve_csv(&rows, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CURVE_HEADER);
        assert_eq!(lines.len(), 9);
        assert!(lines.iter().all(|l| l.split(',').count() == 7));
    }

    #[test]
    fn hull_drops_dominated_points() {
        let a = |x: f64, y: f64, l: &str| Anchor {
            x,
            lg_p: y,
            label: l.into(),
        };
        let hull = lower_hull(vec![a(0.0, 1.0, "a"), a(0.5, 0.9, "b"), a(1.0, 0.0, "c")]);
        assert_eq!(hull.len(), 2);
        let (y, label) = hull_at(&hull, 0.5).unwrap();
        assert!((y - 0.5).abs() < 1e-12);
        assert_eq!(label, "interp(a/c)");
    }
}
