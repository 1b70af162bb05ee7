//! Radial profiles `G(u)`, `u = |y|²`, and the expansion of `∂^α [G(|y|²)]`
//! into monomials `y^β G^{(m)}(|y|²)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use super::grid::MultiIndex;
use crate::jet::Jet;
use crate::quad::{integrate, Tolerance};

/// Smooth transition `0 → 1` on `[0, 1]`, flat to all orders at both ends.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        1.0 / (1.0 + (1.0 / t - 1.0 / (1.0 - t)).exp())
    }
}

fn smooth_step_jet(t: &Jet) -> Jet {
    let deg = t.degree();
    let t0 = t.value();
    if t0 <= 0.0 {
        return Jet::constant(0.0, deg);
    }
    if t0 >= 1.0 {
        return Jet::constant(1.0, deg);
    }
    let arg = &t.recip() - &t.scale(-1.0).add_const(1.0).recip();
    if arg.value() > 700.0 {
        return Jet::constant(0.0, deg);
    }
    if arg.value() < -700.0 {
        return Jet::constant(1.0, deg);
    }
    arg.exp().add_const(1.0).recip()
}

/// Quintic smoothstep cutoff: 1 on `[0, 1]`, 0 on `[2, ∞)`.
pub fn spline_cutoff(w: f64) -> f64 {
    if w <= 1.0 {
        1.0
    } else if w >= 2.0 {
        0.0
    } else {
        let t = w - 1.0;
        1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Profile {
    /// `e^{−u}`
    Gaussian,
    /// `(1+u)^{−δ/2}`
    RationalDecay { delta: f64 },
    /// `(C/(1+u^{q/2}))^{(N−p)/p}`, `q = p/(p−1)`: the unit-scale p-Laplace bubble.
    PLaplace { p: f64, dim: usize },
    /// 1 on `|y| < 1/2`, 0 on `|y| > 1`, smooth in between.
    Bump,
    /// Inverse transform of the radial spectral cutoff; values only.
    FourierBump { dim: usize },
    Constant,
}

impl Profile {
    pub fn value(&self, u: f64) -> f64 {
        match self {
            Profile::Gaussian => (-u).exp(),
            Profile::RationalDecay { delta } => (1.0 + u).powf(-0.5 * delta),
            Profile::PLaplace { p, dim } => {
                let (c, q, e) = plaplace_constants(*p, *dim);
                (c / (1.0 + u.powf(0.5 * q))).powf(e)
            }
            Profile::Bump => 1.0 - smooth_step(2.0 * u.sqrt() - 1.0),
            Profile::FourierBump { dim } => fourier_bump_value(*dim, u.sqrt()),
            Profile::Constant => 1.0,
        }
    }

    /// `[G(u), G'(u), …, G^{(m)}(u)]`, or `None` if this profile has no
    /// closed-form derivatives.
    pub fn derivatives(&self, u: f64, m: usize) -> Option<Vec<f64>> {
        if m == 0 {
            return Some(vec![self.value(u)]);
        }
        let x = Jet::variable(u, m);
        let j = match self {
            Profile::Gaussian => x.scale(-1.0).exp(),
            Profile::RationalDecay { delta } => x.add_const(1.0).powf(-0.5 * delta),
            Profile::PLaplace { p, dim } => {
                let (c, q, e) = plaplace_constants(*p, *dim);
                x.powf(0.5 * q).add_const(1.0).recip().scale(c).powf(e)
            }
            Profile::Bump => {
                if u <= 0.25 {
                    Jet::constant(1.0, m)
                } else if u >= 1.0 {
                    Jet::constant(0.0, m)
                } else {
                    let t = x.sqrt().scale(2.0).add_const(-1.0);
                    smooth_step_jet(&t).scale(-1.0).add_const(1.0)
                }
            }
            Profile::Constant => Jet::constant(1.0, m),
            Profile::FourierBump { .. } => return None,
        };
        Some(j.derivatives())
    }

    /// Characteristic radii (in `|y|`) where the profile changes character.
    pub fn feature_radii(&self) -> &'static [f64] {
        match self {
            Profile::Bump => &[0.5, 1.0],
            Profile::FourierBump { .. } => &[1.0, 4.0],
            Profile::Constant => &[],
            _ => &[1.0],
        }
    }

    /// Whether the profile vanishes identically outside `|y| ≤ 1`.
    pub fn compact(&self) -> bool {
        matches!(self, Profile::Bump)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Profile::Gaussian => "gaussian",
            Profile::RationalDecay { .. } => "rational-decay",
            Profile::PLaplace { .. } => "plaplace-bubble",
            Profile::Bump => "smooth-bump",
            Profile::FourierBump { .. } => "fourier-bump",
            Profile::Constant => "constant",
        }
    }
}

/// `(C, q, (N−p)/p)` with `C = N^{1/p}((N−p)/(p−1))^{(p−1)/p}`.
fn plaplace_constants(p: f64, dim: usize) -> (f64, f64, f64) {
    let n = dim as f64;
    let c = n.powf(1.0 / p) * ((n - p) / (p - 1.0)).powf((p - 1.0) / p);
    (c, p / (p - 1.0), (n - p) / p)
}

/// `φ(r) = (2π)^{−N} ∫ B(|ω|) e^{ix·ω} dω` at `|x| = r`, by radial quadrature.
fn fourier_bump_value(dim: usize, r: f64) -> f64 {
    let tol = Tolerance::new(1e-14, 1e-12);
    let pts = [0.0, 1.0, 2.0];
    let mut f = |w: f64| -> f64 {
        let b = spline_cutoff(w);
        match dim {
            1 => b * (r * w).cos() / PI,
            2 => b * bessel_j0(r * w) * w / (2.0 * PI),
            _ => {
                let z = r * w;
                let sinc = if z.abs() < 1e-8 { 1.0 - z * z / 6.0 } else { z.sin() / z };
                b * w * w * sinc / (2.0 * PI * PI)
            }
        }
    };
    crate::quad::integrate_pieces(&mut f, &pts, tol).value
}

/// `J_0(z) = (1/π) ∫_0^π cos(z sin θ) dθ`.
fn bessel_j0(z: f64) -> f64 {
    integrate(|t: f64| (z * t.sin()).cos(), 0.0, PI, Tolerance::new(1e-15, 1e-13)).value / PI
}

/// One term `coef · y^β · G^{(m)}(|y|²)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    pub beta: Vec<u32>,
    pub m: usize,
    pub coef: f64,
}

/// Expands `∂^α [G(|y|²)]` by repeated application of
/// `∂_i (y^β G^{(m)}) = β_i y^{β−e_i} G^{(m)} + 2 y^{β+e_i} G^{(m+1)}`.
pub fn expand_radial_derivative(alpha: &MultiIndex) -> Vec<Monomial> {
    let dim = alpha.dim();
    let mut terms: BTreeMap<(Vec<u32>, usize), f64> = BTreeMap::new();
    terms.insert((vec![0; dim], 0), 1.0);
    for (i, &ai) in alpha.0.iter().enumerate() {
        for _ in 0..ai {
            let mut next: BTreeMap<(Vec<u32>, usize), f64> = BTreeMap::new();
            for ((beta, m), c) in terms {
                if beta[i] > 0 {
                    let mut b = beta.clone();
                    b[i] -= 1;
                    *next.entry((b, m)).or_default() += c * beta[i] as f64;
                }
                let mut b = beta;
                b[i] += 1;
                *next.entry((b, m + 1)).or_default() += 2.0 * c;
            }
            terms = next;
        }
    }
    terms
        .into_iter()
        .filter(|(_, c)| *c != 0.0)
        .map(|((beta, m), coef)| Monomial { beta, m, coef })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansion_second_derivative_1d() {
        // d²/dy² G(y²) = 2G' + 4y²G''
        let e = expand_radial_derivative(&MultiIndex(vec![2]));
        assert_eq!(e.len(), 2);
        assert!(e.contains(&Monomial { beta: vec![0], m: 1, coef: 2.0 }));
        assert!(e.contains(&Monomial { beta: vec![2], m: 2, coef: 4.0 }));
    }

    #[test]
    fn bump_shape() {
        let b = Profile::Bump;
        assert_eq!(b.value(0.0), 1.0);
        assert_eq!(b.value(0.2), 1.0);
        assert_eq!(b.value(1.0), 0.0);
        let mid = b.value(0.5625); // |y| = 3/4
        assert!((mid - 0.5).abs() < 1e-12);
        let d = b.derivatives(0.5625, 3).unwrap();
        assert!(d[1] < 0.0);
    }

    #[test]
    fn fourier_bump_normalization() {
        // φ(0) = (2π)^{−1} ∫ B = (1/π)(1 + ∫_1^2 (1−S)) = 1.5/π in one dimension.
        let v = Profile::FourierBump { dim: 1 }.value(0.0);
        assert!((v - 1.5 / PI).abs() < 1e-12, "{v}");
        assert!((bessel_j0(1.0) - 0.765_197_686_557_966_6).abs() < 1e-13);
    }

    #[test]
    fn plaplace_classical_case() {
        let p = Profile::PLaplace { p: 2.0, dim: 4 };
        assert!((p.value(0.0) - 2.0 * 2f64.sqrt()).abs() < 1e-14);
        let d = p.derivatives(1.0, 2).unwrap();
        let c = 2.0 * 2f64.sqrt();
        assert!((d[1] + c / 4.0).abs() < 1e-13);
        assert!((d[2] - 2.0 * c / 8.0).abs() < 1e-13);
    }
}
