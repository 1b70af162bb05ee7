use num_complex::Complex64;
use statrs::function::beta::{beta, beta_reg};

use super::classify::classify_convergence;
use super::estimate::{Classification, Level, QuadratureSpec, Scheme, SeminormEstimate};
use crate::error::{Error, Result};
use crate::fields::{AnalyticField, Family, Field, SampledField};
use crate::index::Exponent;
use crate::quad::{integrate_pieces, integrate_tail, normalize_breakpoints, sphere_area, sum_compensated, Tolerance};

/// `‖f‖_{L^p}` from node values (or whole-line quadrature under [`Scheme::Adaptive`]).
///
/// Closed-form `(1+|x|²)^{−δ/2}` gets the exact radial tail beyond the box;
/// its `p`-th power is integrable iff `δp > N`, otherwise the value is `∞`.
pub fn lp_norm(f: &Field, p: &Exponent, quad: &QuadratureSpec) -> Result<SeminormEstimate> {
    quad.validate()?;
    if !p.is_finite() {
        let s = f.sampled_on(quad.grid)?;
        let m = s.max_abs();
        return Ok(SeminormEstimate {
            value: m,
            levels: Vec::new(),
            thresholds: quad.thresholds,
            ..SeminormEstimate::zero()
        });
    }
    let pf = p.to_f64();
    match (quad.scheme, f) {
        (Scheme::Adaptive, Field::Analytic(a)) if a.dim == 1 => lp_adaptive(a, pf, quad),
        (Scheme::Adaptive, _) => Err(Error::Precondition(
            "adaptive quadrature needs a closed-form field with N = 1".into(),
        )),
        _ => lp_grid(f, pf, quad),
    }
}

fn rational_delta(f: &Field) -> Option<f64> {
    match f.as_analytic()?.family {
        Some(Family::RationalDecay { delta }) => Some(delta),
        _ => None,
    }
}

/// `|S^{N−1}| ∫_R^∞ r^{N−1}(1+r²)^{−γ/2} dr`, finite for `γ > N`.
pub(crate) fn rational_tail(n: usize, gamma: f64, r: f64) -> f64 {
    let nf = n as f64;
    if gamma <= nf {
        return f64::INFINITY;
    }
    let (a, b) = ((gamma - nf) / 2.0, nf / 2.0);
    let t0 = 1.0 / (1.0 + r * r);
    0.5 * sphere_area(n) * beta_reg(a, b, t0) * beta(a, b)
}

fn lp_grid(f: &Field, p: f64, quad: &QuadratureSpec) -> Result<SeminormEstimate> {
    let s = f.sampled_on(quad.grid)?;
    let g = s.grid;
    let vol = g.cell_volume();
    let weights: Vec<(f64, f64)> = s
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let r = g.node(i).iter().map(|x| x * x).sum::<f64>().sqrt();
            (r, vol * v.norm().powf(p))
        })
        .collect();
    let l = g.half_width;
    let exact = rational_delta(f);
    // Under the exact tail only the ball |x| < L counts; for N = 1 the full
    // periodic sum is already the trapezoid rule on [−L, L] by symmetry.
    let inside = |r: f64| exact.is_none() || g.dim == 1 || r < l;
    let box_sum = sum_compensated(weights.iter().filter(|(r, _)| inside(*r)).map(|(_, w)| *w));
    let mut levels = Vec::with_capacity(quad.r_levels.len());
    let mut notes = Vec::new();
    for &r in &quad.r_levels {
        let v = if r < l || exact.is_none() {
            sum_compensated(weights.iter().filter(|(x, _)| *x < r && inside(*x)).map(|(_, w)| *w))
        } else {
            let delta = exact.unwrap();
            box_sum + rational_annulus(g.dim, delta * p, l, r)
        };
        levels.push(Level { r, value: v });
    }
    let (total, classification) = match exact {
        Some(delta) => {
            let t = rational_tail(g.dim, delta * p, l);
            notes.push("exact radial tail beyond the box".into());
            if t.is_finite() {
                (box_sum + t, Classification::Converged)
            } else {
                (f64::INFINITY, Classification::Diverging)
            }
        }
        None => {
            let vals: Vec<f64> = levels.iter().map(|l| l.value).collect();
            let c = if vals.len() >= 3 {
                classify_convergence(&vals, &quad.r_levels, &quad.thresholds)?
            } else {
                Classification::Converged
            };
            (box_sum, c)
        }
    };
    Ok(SeminormEstimate {
        value: total.powf(1.0 / p),
        stderr: 0.0,
        classification,
        levels,
        thresholds: quad.thresholds,
        notes,
    })
}

/// `|S^{N−1}| ∫_a^b r^{N−1}(1+r²)^{−γ/2} dr`.
fn rational_annulus(n: usize, gamma: f64, a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let ta = rational_tail(n, gamma, a);
    if ta.is_finite() {
        return ta - rational_tail(n, gamma, b);
    }
    let nf = n as f64;
    let r = crate::quad::integrate_log(
        |r| r.powf(nf - 1.0) * (1.0 + r * r).powf(-gamma / 2.0),
        a,
        b,
        Tolerance::new(0.0, 1e-12),
    );
    sphere_area(n) * r.value
}

/// Breakpoints inside `[a, b]`: the endpoints plus the field's feature points.
pub(crate) fn pieces_in(features: &[f64], a: f64, b: f64) -> Vec<f64> {
    let mut pts = vec![a, b];
    pts.extend(features.iter().copied().filter(|x| *x > a && *x < b));
    normalize_breakpoints(pts)
}

fn lp_adaptive(f: &AnalyticField, p: f64, quad: &QuadratureSpec) -> Result<SeminormEstimate> {
    let tol = Tolerance::new(0.0, 1e-11);
    let features = f.feature_points(0);
    let mut h = |x: f64| f.eval(&[x]).norm().powf(p);
    let radii = &quad.r_levels;
    let mut acc = integrate_pieces(&mut h, &pieces_in(&features, -radii[0], radii[0]), tol).value;
    let mut levels = vec![Level { r: radii[0], value: acc }];
    for w in radii.windows(2) {
        let right = integrate_pieces(&mut h, &pieces_in(&features, w[0], w[1]), tol).value;
        let left = integrate_pieces(&mut h, &pieces_in(&features, -w[1], -w[0]), tol).value;
        acc += right + left;
        levels.push(Level { r: w[1], value: acc });
    }
    let last = *radii.last().unwrap();
    let exact = match f.family {
        Some(Family::RationalDecay { delta }) => Some(delta * p > 1.0),
        _ => None,
    };
    let vals: Vec<f64> = levels.iter().map(|l| l.value).collect();
    let classification = match exact {
        Some(true) => Classification::Converged,
        Some(false) => Classification::Diverging,
        None if vals.len() >= 3 => classify_convergence(&vals, radii, &quad.thresholds)?,
        None => Classification::Converged,
    };
    let total = if classification == Classification::Diverging {
        f64::INFINITY
    } else {
        let right = integrate_tail(&mut h, last, tol).value;
        let left = integrate_tail(|x| f.eval(&[-x]).norm().powf(p), last, tol).value;
        acc + right + left
    };
    Ok(SeminormEstimate {
        value: total.powf(1.0 / p),
        stderr: 0.0,
        classification,
        levels,
        thresholds: quad.thresholds,
        notes: Vec::new(),
    })
}

/// Plain `h^N Σ |f|^p` on a sampled field, no tails: the building block of the
/// evolution reports.
pub fn grid_lp(f: &SampledField, p: f64) -> f64 {
    let vol = f.grid.cell_volume();
    if p.is_infinite() {
        return f.max_abs();
    }
    let s = sum_compensated(f.values.iter().map(|v| vol * pow_abs(*v, p)));
    s.powf(1.0 / p)
}

pub(crate) fn pow_abs(v: Complex64, p: f64) -> f64 {
    if p == 2.0 {
        v.norm_sqr()
    } else {
        v.norm().powf(p)
    }
}
