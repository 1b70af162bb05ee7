use super::{evaluate, Field};
use crate::error::{Error, Result};

/// `|Δ_p u(x) + u(x)^{p*−1}|`, `p* = Np/(N−p)`, by fourth-order central differences.
///
/// For `p = 2` this is the five-point Laplacian per axis; otherwise the flux
/// `|∇u|^{p−2}∇u` is differenced at `x ± h e_i`, `x ± 2h e_i` with gradients
/// themselves from fourth-order stencils.
pub fn plaplace_residual(u: &Field, p: f64, x: &[f64], fd_step: f64) -> Result<f64> {
    let n = x.len();
    let nf = n as f64;
    if !(p > 1.0 && p < nf) {
        return Err(Error::Precondition(format!("1 < p < N (p = {p}, N = {n})")));
    }
    if !(fd_step > 0.0) {
        return Err(Error::InvalidParameter("fd_step must be positive".into()));
    }
    if let Field::Sampled(s) = u {
        let reach = if p == 2.0 { 2.0 } else { 4.0 } * fd_step;
        let l = s.grid.half_width;
        if x.iter().any(|xi| xi.abs() + reach > l) {
            return Err(Error::Precondition(format!(
                "stencil of reach {reach} around {x:?} leaves the grid"
            )));
        }
    }
    let f = |y: &[f64]| -> Result<f64> { Ok(evaluate(u, y)?.re) };
    let shifted = |y: &[f64], i: usize, d: f64| -> Vec<f64> {
        let mut z = y.to_vec();
        z[i] += d;
        z
    };
    let h = fd_step;
    let div = if p == 2.0 {
        let f0 = f(x)?;
        let mut lap = 0.0;
        for i in 0..n {
            let fp1 = f(&shifted(x, i, h))?;
            let fm1 = f(&shifted(x, i, -h))?;
            let fp2 = f(&shifted(x, i, 2.0 * h))?;
            let fm2 = f(&shifted(x, i, -2.0 * h))?;
            lap += (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
        }
        lap
    } else {
        let grad = |y: &[f64]| -> Result<Vec<f64>> {
            (0..n)
                .map(|j| {
                    Ok((-f(&shifted(y, j, 2.0 * h))? + 8.0 * f(&shifted(y, j, h))?
                        - 8.0 * f(&shifted(y, j, -h))?
                        + f(&shifted(y, j, -2.0 * h))?)
                        / (12.0 * h))
                })
                .collect()
        };
        let flux = |y: &[f64], i: usize| -> Result<f64> {
            let g = grad(y)?;
            let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            Ok(if norm == 0.0 { 0.0 } else { norm.powf(p - 2.0) * g[i] })
        };
        let mut d = 0.0;
        for i in 0..n {
            d += (-flux(&shifted(x, i, 2.0 * h), i)? + 8.0 * flux(&shifted(x, i, h), i)?
                - 8.0 * flux(&shifted(x, i, -h), i)?
                + flux(&shifted(x, i, -2.0 * h), i)?)
                / (12.0 * h);
        }
        d
    };
    let u0 = f(x)?;
    let pstar = nf * p / (nf - p);
    let r = (div + u0.abs().powf(pstar - 2.0) * u0).abs();
    if !r.is_finite() {
        return Err(Error::Precondition(format!("residual not finite at {x:?}")));
    }
    Ok(r)
}
