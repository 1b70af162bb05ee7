use super::estimate::{Classification, ConvergenceThresholds};
use crate::error::{Error, Result};

/// Decides whether a sequence of truncated integrals `I_k = ∫_{|a|<R_k}` is settling.
///
/// With `ΔI_k = I_{k+1} − I_k` and the last two increments `d₁, d₂`:
/// * Diverging if `d₂ > 0` and `d₂ ≥ d₁` (increments not shrinking);
/// * Converged if the increment density `ΔI/ΔR` falls by at least
///   `decay_factor` per doubling of the radius (or `d₂ = 0`), and `d₂/I_last < relative_tail`;
/// * Inconclusive otherwise.
pub fn classify_convergence(levels: &[f64], radii: &[f64], th: &ConvergenceThresholds) -> Result<Classification> {
    if levels.len() < 3 || levels.len() != radii.len() {
        return Err(Error::InvalidParameter(
            "classification needs ≥ 3 levels with matching radii".into(),
        ));
    }
    let m = levels.len();
    if levels[m - 1].is_infinite() {
        return Ok(Classification::Diverging);
    }
    let d1 = levels[m - 2] - levels[m - 3];
    let d2 = levels[m - 1] - levels[m - 2];
    if d2 > 0.0 && d2 >= d1 {
        return Ok(Classification::Diverging);
    }
    let last = levels[m - 1];
    let small_tail = last > 0.0 && d2 / last < th.relative_tail || d2 <= 0.0;
    if d2 <= 0.0 {
        return Ok(Classification::Converged);
    }
    let rho1 = d1 / (radii[m - 2] - radii[m - 3]);
    let rho2 = d2 / (radii[m - 1] - radii[m - 2]);
    let mid1 = 0.5 * (radii[m - 2] + radii[m - 3]);
    let mid2 = 0.5 * (radii[m - 1] + radii[m - 2]);
    let doublings = (mid2 / mid1).log2();
    let per_doubling = (rho1 / rho2).powf(1.0 / doublings);
    if per_doubling >= th.decay_factor && small_tail {
        Ok(Classification::Converged)
    } else {
        Ok(Classification::Inconclusive)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn radii(n: i32) -> Vec<f64> {
        (1..=n).map(|k| 2f64.powi(k)).collect()
    }

    #[test]
    fn examples() {
        let th = ConvergenceThresholds::default();
        let geometric: Vec<f64> = (1..=10).map(|k| 1.0 - 2f64.powi(-k)).collect();
        assert_eq!(classify_convergence(&geometric, &radii(10), &th).unwrap(), Classification::Converged);
        let linear: Vec<f64> = (1..=10).map(|k| k as f64).collect();
        assert_eq!(classify_convergence(&linear, &radii(10), &th).unwrap(), Classification::Diverging);
        let harmonic: Vec<f64> = (1..=10).map(|k| 1.0 - 1.0 / k as f64).collect();
        assert_eq!(
            classify_convergence(&harmonic, &radii(10), &th).unwrap(),
            Classification::Inconclusive
        );
        assert!(classify_convergence(&[1.0, 2.0], &[1.0, 2.0], &th).is_err());
    }

    #[test]
    fn saturated_levels_converge() {
        let th = ConvergenceThresholds::default();
        let flat = [1.0, 2.0, 2.0, 2.0];
        assert_eq!(
            classify_convergence(&flat, &[1.0, 2.0, 4.0, 8.0], &th).unwrap(),
            Classification::Converged
        );
    }
}
