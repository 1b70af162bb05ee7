use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::classify::classify_convergence;
use super::estimate::{Classification, Level, QuadratureSpec, Scheme, SeminormEstimate};
use super::lp::pow_abs;
use crate::error::{Error, Result};
use crate::fields::{AnalyticField, Family, Field, MultiIndex, SampledField};
use crate::quad::{
    geometric_breakpoints, integrate, integrate_log, integrate_pieces, integrate_real_line, integrate_tail,
    normalize_breakpoints, power_weight_linear, sphere_area, sum_compensated, Tolerance,
};

fn check_sp(s: f64, p: f64) -> Result<()> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Precondition(format!("0 < s < 1 (s = {s})")));
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::Precondition(format!("finite p ≥ 1 (p = {p})")));
    }
    Ok(())
}

/// `[f]_{s,p} = (∬ |f(x)−f(y)|^p / |x−y|^{N+sp} dx dy)^{1/p}`.
///
/// Levels are the double integral restricted to `|x − y| < R`.
pub fn gagliardo_full(f: &Field, s: f64, p: f64, quad: &QuadratureSpec) -> Result<SeminormEstimate> {
    check_sp(s, p)?;
    quad.validate()?;
    match quad.scheme {
        Scheme::Adaptive => match f {
            Field::Analytic(a) if a.dim == 1 => adaptive(a, s, p, quad),
            _ => Err(Error::Precondition(
                "adaptive quadrature needs a closed-form field with N = 1".into(),
            )),
        },
        Scheme::Tensor if f.dim() != 1 => Err(Error::InvalidParameter(
            "the tensor rule covers N = 1 only; use MonteCarlo".into(),
        )),
        Scheme::Tensor => tensor(&f.sampled_on(quad.grid)?, s, p, quad),
        Scheme::MonteCarlo => monte_carlo(&f.sampled_on(quad.grid)?, s, p, quad),
    }
}

/// `(Σ_j ∬ |f(x)−f(x+a e_j)|^p / |a|^{1+sp} dx da)^{1/p}` on the grid.
pub fn gagliardo_directional(f: &Field, s: f64, p: f64, quad: &QuadratureSpec) -> Result<SeminormEstimate> {
    check_sp(s, p)?;
    quad.validate()?;
    let u = f.sampled_on(quad.grid)?;
    let g = u.grid;
    let l = g.half_width;
    let h_min = quad.h_min();
    if !(h_min < l) {
        return Err(Error::InvalidParameter("h_min must be below the box half-width".into()));
    }
    let dft = u.dft();
    let count = 256;
    let mut offsets = vec![0.0];
    offsets.extend((0..count).map(|i| h_min * (l / h_min).powf(i as f64 / (count - 1) as f64)));
    let coarse: Vec<f64> = offsets.iter().copied().step_by(2).collect();
    let mut rules = Vec::new();
    let mut rules_coarse = Vec::new();
    for axis in 0..g.dim {
        let grad = SampledField::derivative_from_dft(g, &dft, &MultiIndex::axis(g.dim, axis, 1));
        let g0 = lp_pow(&grad, p);
        let d: Vec<f64> = offsets[1..]
            .par_iter()
            .map(|&a| {
                let mut shift = [0.0; 3];
                shift[axis] = a;
                shift_difference(&u, &dft, &shift[..g.dim], p)
            })
            .collect();
        let mut vals = vec![g0];
        vals.extend(d.iter().zip(&offsets[1..]).map(|(d, a)| d / a.powf(p)));
        let tail_mass = *d.last().unwrap();
        let vc: Vec<f64> = vals.iter().copied().step_by(2).collect();
        rules.push(OffsetRule::new(offsets.clone(), vals, p - 1.0 - s * p, s * p, tail_mass));
        rules_coarse.push(OffsetRule::new(coarse.clone(), vc, p - 1.0 - s * p, s * p, tail_mass));
    }
    // Both signs of a.
    let total = |rs: &[OffsetRule]| 2.0 * sum_compensated(rs.iter().map(|r| r.total()));
    let fine = total(&rules);
    let rough = total(&rules_coarse);
    let levels: Vec<Level> = quad
        .r_levels
        .iter()
        .map(|&r| Level {
            r,
            value: 2.0 * sum_compensated(rules.iter().map(|rule| rule.up_to(r))),
        })
        .collect();
    finish(fine, (fine - rough).abs() / 3.0, levels, p, quad, vec![format!("{count} geometric offsets per axis")])
}

/// Product rule for `∫_0^∞ g(a) a^e da` with `g` piecewise linear on `nodes`
/// (first node 0) and `g(a) = tail_mass / a^p` beyond the last node, i.e. the
/// difference integral saturated at its last sampled value.
struct OffsetRule {
    nodes: Vec<f64>,
    cumulative: Vec<f64>,
    vals: Vec<f64>,
    e: f64,
    sp: f64,
    tail_mass: f64,
}

impl OffsetRule {
    fn new(nodes: Vec<f64>, vals: Vec<f64>, e: f64, sp: f64, tail_mass: f64) -> Self {
        let mut cumulative = vec![0.0];
        let mut acc = 0.0;
        for i in 1..nodes.len() {
            let (wl, wh) = power_weight_linear(nodes[i - 1], nodes[i], e);
            acc += wl * vals[i - 1] + wh * vals[i];
            cumulative.push(acc);
        }
        OffsetRule { nodes, cumulative, vals, e, sp, tail_mass }
    }

    fn last(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    fn total(&self) -> f64 {
        self.cumulative.last().unwrap() + self.tail_mass * self.last().powf(-self.sp) / self.sp
    }

    fn up_to(&self, r: f64) -> f64 {
        let end = self.last();
        if r >= end {
            return self.cumulative.last().unwrap()
                + self.tail_mass * (end.powf(-self.sp) - r.powf(-self.sp)) / self.sp;
        }
        let i = self.nodes.partition_point(|&a| a <= r);
        let (a0, a1) = (self.nodes[i - 1], self.nodes[i]);
        if r == a0 {
            return self.cumulative[i - 1];
        }
        let t = (r - a0) / (a1 - a0);
        let gr = self.vals[i - 1] * (1.0 - t) + self.vals[i] * t;
        let (wl, wh) = power_weight_linear(a0, r, self.e);
        self.cumulative[i - 1] + wl * self.vals[i - 1] + wh * gr
    }
}

fn lp_pow(f: &SampledField, p: f64) -> f64 {
    let vol = f.grid.cell_volume();
    sum_compensated(f.values.iter().map(|v| vol * pow_abs(*v, p)))
}

/// `∫ |f(x+z) − f(x)|^p dx` by a spectral shift (periodic box).
fn shift_difference(u: &SampledField, dft: &[Complex64], z: &[f64], p: f64) -> f64 {
    let g = u.grid;
    if p == 2.0 {
        // Parseval: Σ|g|² = M⁻¹ Σ|G|², with |e^{iω·z} − 1|² = 4 sin²(ω·z/2).
        let m = g.len() as f64;
        let vol = g.cell_volume();
        let terms = dft.iter().enumerate().map(|(i, v)| {
            let w = g.freq_vec(i);
            let phase: f64 = (0..g.dim).map(|a| w[a] * z[a]).sum();
            let sn = (0.5 * phase).sin();
            4.0 * sn * sn * v.norm_sqr()
        });
        return vol / m * sum_compensated(terms);
    }
    let shifted = SampledField::multiplier_from_dft(g, dft, |w| {
        let phase: f64 = w.iter().zip(z).map(|(a, b)| a * b).sum();
        Complex64::from_polar(1.0, phase)
    });
    let vol = g.cell_volume();
    sum_compensated(
        shifted
            .values
            .iter()
            .zip(&u.values)
            .map(|(a, b)| vol * pow_abs(a - b, p)),
    )
}

fn finish(
    total: f64,
    err: f64,
    levels: Vec<Level>,
    p: f64,
    quad: &QuadratureSpec,
    notes: Vec<String>,
) -> Result<SeminormEstimate> {
    let vals: Vec<f64> = levels.iter().map(|l| l.value).collect();
    let classification = if vals.len() >= 3 {
        classify_convergence(&vals, &quad.r_levels, &quad.thresholds)?
    } else {
        Classification::Converged
    };
    let value = if classification == Classification::Diverging {
        f64::INFINITY
    } else {
        total.powf(1.0 / p)
    };
    let stderr = if total > 0.0 { err / (p * total.powf(1.0 - 1.0 / p)) } else { 0.0 };
    Ok(SeminormEstimate {
        value,
        stderr,
        classification,
        levels,
        thresholds: quad.thresholds,
        notes,
    })
}

/// Lattice offsets `a = m h`, `0 ≤ m ≤ n/2`, with periodic differences; the
/// limit `g(0) = ‖f′‖_p^p` closes the rule at the diagonal.
fn tensor(u: &SampledField, s: f64, p: f64, quad: &QuadratureSpec) -> Result<SeminormEstimate> {
    let g = u.grid;
    let n = g.points;
    let h = g.spacing();
    let half = n / 2;
    let d: Vec<f64> = (1..=half)
        .into_par_iter()
        .map(|m| {
            let terms = (0..n).map(|j| pow_abs(u.values[(j + m) % n] - u.values[j], p));
            h * sum_compensated(terms)
        })
        .collect();
    let g0 = lp_pow(&u.derivative(&MultiIndex::axis(1, 0, 1))?, p);
    let nodes: Vec<f64> = (0..=half).map(|m| m as f64 * h).collect();
    let mut vals = vec![g0];
    vals.extend(d.iter().zip(&nodes[1..]).map(|(d, a)| d / a.powf(p)));
    let tail_mass = d[half - 1];
    let e = p - 1.0 - s * p;
    let rule = OffsetRule::new(nodes.clone(), vals.clone(), e, s * p, tail_mass);
    let fine = 2.0 * rule.total();
    let err = if quad.richardson_levels >= 2 {
        let coarse = OffsetRule::new(
            nodes.iter().copied().step_by(2).collect(),
            vals.iter().copied().step_by(2).collect(),
            e,
            s * p,
            tail_mass,
        );
        (fine - 2.0 * coarse.total()).abs() / 3.0
    } else {
        0.0
    };
    let levels = quad
        .r_levels
        .iter()
        .map(|&r| Level { r, value: 2.0 * rule.up_to(r) })
        .collect();
    finish(fine, err, levels, p, quad, Vec::new())
}

/// Offsets `z = rθ` with `r ∝ r^{γ−1}` on `(0, L]`, `γ = p(1−s)`, `θ` uniform on
/// the sphere. The weight `D(rθ)/r^p` stays bounded at the diagonal; below
/// `h_min` it is replaced by its limit `‖θ·∇f‖_p^p`. Beyond `L` the
/// difference integral is held at its value at `|z| = L`.
fn monte_carlo(u: &SampledField, s: f64, p: f64, quad: &QuadratureSpec) -> Result<SeminormEstimate> {
    let g = u.grid;
    let dim = g.dim;
    let l = g.half_width;
    let gamma = p * (1.0 - s);
    let h_min = quad.h_min();
    let dft = u.dft();
    let grads: Vec<SampledField> = (0..dim)
        .map(|a| SampledField::derivative_from_dft(g, &dft, &MultiIndex::axis(dim, a, 1)))
        .collect();
    let sample = |i: usize| -> (f64, f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(quad.seed);
        rng.set_stream(i as u64);
        let uu: f64 = rng.random::<f64>();
        let r = l * (1.0 - uu).powf(1.0 / gamma);
        let theta = random_direction(&mut rng, dim);
        let y = if r < h_min || r == 0.0 {
            directional_gradient(&grads, &theta, p)
        } else {
            let z: Vec<f64> = theta.iter().map(|t| t * r).collect();
            shift_difference(u, &dft, &z, p) / r.powf(p)
        };
        (r, y)
    };
    let samples: Vec<(f64, f64)> = (0..quad.mc_samples).into_par_iter().map(sample).collect();
    let area = sphere_area(dim);
    let scale = area * l.powf(gamma) / gamma;
    let m = samples.len() as f64;
    let mean = sum_compensated(samples.iter().map(|(_, y)| *y)) / m;
    let var = sum_compensated(samples.iter().map(|(_, y)| (y - mean).powi(2))) / (m - 1.0);
    let tail_mass = sum_compensated((0..dim).map(|a| {
        let mut z = [0.0; 3];
        z[a] = l;
        shift_difference(u, &dft, &z[..dim], p)
    })) / dim as f64;
    let sp = s * p;
    let near = scale * mean;
    let tail = area * tail_mass * l.powf(-sp) / sp;
    let levels = quad
        .r_levels
        .iter()
        .map(|&rad| {
            let value = if rad >= l {
                near + area * tail_mass * (l.powf(-sp) - rad.powf(-sp)) / sp
            } else {
                scale * sum_compensated(samples.iter().filter(|(r, _)| *r < rad).map(|(_, y)| *y)) / m
            };
            Level { r: rad, value }
        })
        .collect();
    let err = scale * (var / m).sqrt();
    finish(
        near + tail,
        err,
        levels,
        p,
        quad,
        vec![format!("{} samples, seed {}", quad.mc_samples, quad.seed)],
    )
}

fn random_direction(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    if dim == 1 {
        return vec![if rng.random::<bool>() { 1.0 } else { -1.0 }];
    }
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-12 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

fn directional_gradient(grads: &[SampledField], theta: &[f64], p: f64) -> f64 {
    let g = grads[0].grid;
    let vol = g.cell_volume();
    sum_compensated((0..g.len()).map(|i| {
        let v: Complex64 = grads.iter().zip(theta).map(|(d, t)| d.values[i] * t).sum();
        vol * pow_abs(v, p)
    }))
}

/// Whole-line engine for `N = 1` closed forms:
/// `[f]^p = 2∫_0^∞ a^{−1−sp} D(a) da` with `D(a) = ∫ |f(x+a) − f(x)|^p dx`.
///
/// Near `a = 0` the substitution `a = R₀ u^{1/γ}` makes the integrand smooth;
/// outer shells `[R_k, R_{k+1}]` are integrated in `ln a`. `D(a)` is split at
/// `x = −a/2` so each half only sees one peak, in local coordinates.
fn adaptive(f: &AnalyticField, s: f64, p: f64, quad: &QuadratureSpec) -> Result<SeminormEstimate> {
    let inner_tol = Tolerance::new(0.0, 1e-10);
    let outer_tol = Tolerance::new(0.0, 1e-7);
    let gamma = p * (1.0 - s);
    let mut features = f.feature_points(0);
    if features.is_empty() {
        features.push(0.0);
    }
    let mirrored: Vec<f64> = features.iter().map(|x| -x).collect();
    let delta = match f.family {
        Some(Family::RationalDecay { delta }) => Some(delta),
        _ => None,
    };
    let eval = |x: f64| f.eval(&[x]);
    // |f(x+a) − f(x)|, or its mirror image |f(−x−a) − f(−x)|.
    let diff = |x: f64, a: f64, mirror: bool| -> f64 {
        if let Some(d) = delta {
            // Even, and f(x+a)/f(x) − 1 = (1 + (2ax+a²)/(1+x²))^{−δ/2} − 1 without cancellation.
            let q = (2.0 * a * x + a * a) / (1.0 + x * x);
            let fx = (1.0 + x * x).powf(-0.5 * d);
            return (fx * (-0.5 * d * q.ln_1p()).exp_m1()).abs();
        }
        if mirror {
            (eval(-x - a) - eval(-x)).norm()
        } else {
            (eval(x + a) - eval(x)).norm()
        }
    };
    let slope = if f.supports_order(1) {
        let d = f.derivative(&MultiIndex::axis(1, 0, 1))?;
        let mut pts = Vec::new();
        for c in &features {
            pts.extend(geometric_breakpoints(*c, 1.0, 6, 6));
        }
        Some(integrate_real_line(|x| d.eval(&[x]).norm().powf(p), &normalize_breakpoints(pts), inner_tol).value)
    } else {
        None
    };
    let spread = features.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let half = |a: f64, mirror: bool| -> f64 {
        let feats = if mirror { &mirrored } else { &features };
        let lo = -0.5 * a;
        let reach = 4.0 * (a + 1.0) + 2.0 * spread;
        let coarse = reach.log2().ceil() as i32;
        let mut pts = vec![lo];
        for c in feats {
            pts.extend(geometric_breakpoints(*c, 1.0, 8, coarse));
        }
        pts.retain(|x| *x >= lo);
        let pts = normalize_breakpoints(pts);
        let hi = *pts.last().unwrap();
        let mut integrand = |x: f64| diff(x, a, mirror).powf(p);
        let body = if pts.len() >= 2 {
            integrate_pieces(&mut integrand, &pts, inner_tol).value
        } else {
            0.0
        };
        body + integrate_tail(&mut integrand, hi.max(1.0), inner_tol).value
            + if hi < 1.0 { integrate(&mut integrand, hi, 1.0, inner_tol).value } else { 0.0 }
    };
    // D(a)/a^p, with its diagonal limit below a_lin.
    let a_lin = 1e-6;
    let ratio = |a: f64| -> f64 {
        if a < a_lin {
            if let Some(sl) = slope {
                return sl;
            }
        }
        if a == 0.0 {
            return 0.0;
        }
        let d = if delta.is_some() { 2.0 * half(a, false) } else { half(a, false) + half(a, true) };
        d / a.powf(p)
    };
    let radii = &quad.r_levels;
    let r0 = radii[0];
    let kappa = 1.0 / gamma;
    let first = integrate(
        |u: f64| kappa * r0.powf(gamma) * ratio(r0 * u.powf(kappa)),
        0.0,
        1.0,
        outer_tol,
    );
    let mut acc = first.value;
    let mut err = first.error;
    let mut levels = vec![Level { r: r0, value: 2.0 * acc }];
    for w in radii.windows(2) {
        let shell = integrate_log(|a| ratio(a) * a.powf(gamma - 1.0), w[0], w[1], outer_tol);
        acc += shell.value;
        err += shell.error;
        levels.push(Level { r: w[1], value: 2.0 * acc });
    }
    let total = 2.0 * acc;
    let mut notes = Vec::new();
    // Geometric extrapolation of the remaining shells, reported as an error bar.
    let m = levels.len();
    if m >= 3 {
        let d1 = levels[m - 2].value - levels[m - 3].value;
        let d2 = levels[m - 1].value - levels[m - 2].value;
        if d2 > 0.0 && d2 < d1 {
            let q = d2 / d1;
            let rest = d2 * q / (1.0 - q);
            err += rest;
            notes.push(format!("extrapolated tail beyond R = {:e}: {rest:e}", radii[m - 1]));
        }
    }
    finish(total, 2.0 * err, levels, p, quad, notes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::GridSpec;
    use crate::norms::fourier::hs_seminorm_fourier;

    fn grid1(n: usize) -> GridSpec {
        GridSpec::new(1, 16.0, n).unwrap()
    }

    #[test]
    fn constant_fields_vanish() {
        let g = grid1(256);
        let c = Field::Sampled(SampledField::from_real_fn(g, |_| 3.0));
        let q = QuadratureSpec::tensor(g);
        assert!(gagliardo_full(&c, 0.5, 2.0, &q).unwrap().value < 1e-12);
        assert!(gagliardo_directional(&c, 0.5, 2.0, &q).unwrap().value < 1e-12);
        let ca = Field::Analytic(AnalyticField::constant(1, 2.0));
        let ad = gagliardo_full(&ca, 0.5, 2.0, &QuadratureSpec::adaptive(4)).unwrap();
        assert_eq!(ad.value, 0.0);
    }

    #[test]
    fn tensor_matches_fourier_side() {
        let g = grid1(2048);
        let f = Field::gaussian(1);
        let q = QuadratureSpec::tensor(g);
        let full = gagliardo_full(&f, 0.5, 2.0, &q).unwrap();
        let hs = hs_seminorm_fourier(&f.sampled_on(g).unwrap(), 0.5).unwrap();
        assert!((full.value / hs - 1.0).abs() < 2e-2, "{} {}", full.value, hs);
        assert!(full.level_values().windows(2).all(|w| w[1] >= w[0]));
        let dir = gagliardo_directional(&f, 0.5, 2.0, &q).unwrap();
        assert!((dir.value / full.value - 1.0).abs() < 1e-3, "{} {}", dir.value, full.value);
    }

    #[test]
    fn general_p_agrees_across_engines() {
        let g = grid1(1024);
        let f = Field::gaussian(1);
        let q = QuadratureSpec::tensor(g);
        let t = gagliardo_full(&f, 0.3, 3.0, &q).unwrap().value;
        let d = gagliardo_directional(&f, 0.3, 3.0, &q).unwrap().value;
        let a = gagliardo_full(&f, 0.3, 3.0, &QuadratureSpec::adaptive(12)).unwrap().value;
        assert!((t / a - 1.0).abs() < 1e-3, "{t} {a}");
        assert!((d / a - 1.0).abs() < 1e-3, "{d} {a}");
    }

    #[test]
    fn adaptive_matches_fourier_side() {
        let f = Field::gaussian(1);
        let a = gagliardo_full(&f, 0.5, 2.0, &QuadratureSpec::adaptive(24)).unwrap();
        let hs = hs_seminorm_fourier(&f.sampled_on(grid1(2048)).unwrap(), 0.5).unwrap();
        assert!((a.value / hs - 1.0).abs() < 1e-4, "{} {hs}", a.value);
        // Exact: [e^{−x²}]²_{1/2,2} = 2π.
        assert!((a.value / (2.0 * std::f64::consts::PI).sqrt() - 1.0).abs() < 1e-5);
        assert_eq!(a.classification, Classification::Converged);
    }

    #[test]
    fn value_shift_and_homogeneity() {
        let g = grid1(512);
        let f = Field::gaussian(1).sampled_on(g).unwrap();
        let shifted = f.add(&SampledField::from_real_fn(g, |_| 0.7));
        let q = QuadratureSpec::tensor(g);
        let a = gagliardo_full(&Field::Sampled(f.clone()), 0.4, 2.5, &q).unwrap().value;
        let b = gagliardo_full(&Field::Sampled(shifted), 0.4, 2.5, &q).unwrap().value;
        assert!((a - b).abs() < 1e-10 * a);
        let c = gagliardo_full(&Field::Sampled(f.scale(Complex64::new(-2.0, 0.0))), 0.4, 2.5, &q).unwrap().value;
        assert!((c - 2.0 * a).abs() < 1e-12 * c);
    }

    #[test]
    fn tensor_rejects_higher_dimensions() {
        let g = GridSpec::new(2, 8.0, 32).unwrap();
        let f = Field::gaussian(2);
        assert!(gagliardo_full(&f, 0.5, 2.0, &QuadratureSpec::tensor(g)).is_err());
    }

    #[test]
    fn monte_carlo_is_reproducible_and_close() {
        let g = GridSpec::new(2, 8.0, 64).unwrap();
        let f = Field::gaussian(2);
        let q = QuadratureSpec::monte_carlo(g, 10_000, 7);
        let a = gagliardo_full(&f, 0.5, 2.0, &q).unwrap();
        let b = gagliardo_full(&f, 0.5, 2.0, &q).unwrap();
        assert_eq!(a.value, b.value);
        let hs = hs_seminorm_fourier(&f.sampled_on(g).unwrap(), 0.5).unwrap();
        assert!((a.value - hs).abs() < 4.0 * a.stderr + 1e-3 * hs, "{} ± {} vs {hs}", a.value, a.stderr);
        // N = 1 Monte Carlo against the deterministic rule.
        let g1 = grid1(512);
        let f1 = Field::gaussian(1);
        let mc = gagliardo_full(&f1, 0.5, 3.0, &QuadratureSpec::monte_carlo(g1, 20_000, 1)).unwrap();
        let t = gagliardo_full(&f1, 0.5, 3.0, &QuadratureSpec::tensor(g1)).unwrap();
        assert!((mc.value - t.value).abs() < 4.0 * mc.stderr + 1e-3, "{} ± {} vs {}", mc.value, mc.stderr, t.value);
    }
}
