use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{Field, MultiIndex};
use crate::index::Exponent;
use crate::quad::{geometric_breakpoints, integrate_real_line, normalize_breakpoints, sum_compensated, Tolerance};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// Both sides of `∫ f″|f|^{p−2}f = −(p−1)∫ |f′|²|f|^{p−2}` for a real 1-D
/// field, the right integrand taken as 0 wherever `f′ = 0`.
pub fn lp12_identity_check(f: &Field, p: &Exponent) -> Result<IdentityCheck> {
    let pf = p.to_f64();
    if !(pf > 1.0 && pf.is_finite()) {
        return Err(Error::Precondition(format!("1 < p < ∞ (p = {p})")));
    }
    if f.dim() != 1 {
        return Err(Error::InvalidParameter("the identity is one-dimensional".into()));
    }
    let left = |v: f64, d2: f64| if v == 0.0 { 0.0 } else { d2 * v.abs().powf(pf - 2.0) * v };
    let right = |v: f64, d1: f64| if d1 == 0.0 || v == 0.0 { 0.0 } else { d1 * d1 * v.abs().powf(pf - 2.0) };
    let (lhs, rhs) = match f {
        Field::Analytic(a) => {
            let d1 = a.derivative(&MultiIndex::axis(1, 0, 1))?;
            let d2 = a.derivative(&MultiIndex::axis(1, 0, 2))?;
            let mut pts = Vec::new();
            for c in a.feature_points(0) {
                pts.extend(geometric_breakpoints(c, 1.0, 6, 4));
            }
            let pts = normalize_breakpoints(pts);
            let tol = Tolerance::new(1e-15, 1e-12);
            let lhs = integrate_real_line(|x| left(a.eval(&[x]).re, d2.eval(&[x]).re), &pts, tol).value;
            let rhs = integrate_real_line(|x| right(a.eval(&[x]).re, d1.eval(&[x]).re), &pts, tol).value;
            (lhs, -(pf - 1.0) * rhs)
        }
        Field::Sampled(s) => {
            let d1 = s.derivative(&MultiIndex::axis(1, 0, 1))?;
            let d2 = s.derivative(&MultiIndex::axis(1, 0, 2))?;
            let h = s.grid.spacing();
            let lhs = sum_compensated(s.values.iter().zip(&d2.values).map(|(v, d)| left(v.re, d.re)));
            let rhs = sum_compensated(s.values.iter().zip(&d1.values).map(|(v, d)| right(v.re, d.re)));
            (h * lhs, -(pf - 1.0) * h * rhs)
        }
    };
    let scale = lhs.abs().max(rhs.abs());
    let residual = if scale == 0.0 { 0.0 } else { (lhs - rhs).abs() / scale };
    Ok(IdentityCheck { lhs, rhs, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{Family, GridSpec, SampledField};
    use crate::quad::integrate;
    use std::f64::consts::PI;

    #[test]
    fn gaussian_p2() {
        let r = lp12_identity_check(&Field::gaussian(1), &Exponent::from_int(2).unwrap()).unwrap();
        assert!((r.lhs + (PI / 2.0).sqrt()).abs() < 1e-10, "{}", r.lhs);
        assert!(r.residual < 1e-8);
    }

    #[test]
    fn gaussian_other_exponents() {
        for p in [Exponent::from_ratio(3, 2).unwrap(), Exponent::from_int(3).unwrap()] {
            let r = lp12_identity_check(&Field::gaussian(1), &p).unwrap();
            assert!(r.residual < 1e-6, "p={p}: {r:?}");
            // Independent value of the right side: (p−1)∫ 4x² e^{−px²}.
            let pf = p.to_f64();
            let expect = (pf - 1.0) * 4.0 * integrate(|x| x * x * (-pf * x * x).exp(), -12.0, 12.0, Tolerance::new(1e-15, 1e-13)).value;
            assert!((r.rhs + expect).abs() < 1e-9 * expect, "{} {expect}", r.rhs);
        }
    }

    #[test]
    fn sech_on_grid() {
        let g = GridSpec::new(1, 40.0, 4096).unwrap();
        let f = SampledField::from_real_fn(g, |x| 1.0 / x[0].cosh());
        for p in [Exponent::from_ratio(3, 2).unwrap(), Exponent::from_int(2).unwrap(), Exponent::from_int(3).unwrap()] {
            let r = lp12_identity_check(&Field::Sampled(f.clone()), &p).unwrap();
            assert!(r.residual < 1e-6, "p={p}: {r:?}");
        }
    }

    #[test]
    fn analytic_families() {
        let fams = [
            Family::RationalDecay { delta: 1.5 },
            Family::Gaussian { sigma: 0.7, center: vec![0.3] },
            Family::SmoothBump { radius: 2.0 },
        ];
        for fam in fams {
            let f = Field::analytic(1, fam.clone()).unwrap();
            for p in [Exponent::from_ratio(3, 2).unwrap(), Exponent::from_int(2).unwrap(), Exponent::from_int(3).unwrap()] {
                let r = lp12_identity_check(&f, &p).unwrap();
                assert!(r.residual < 1e-6, "{fam:?} p={p}: {r:?}");
            }
        }
    }
}
