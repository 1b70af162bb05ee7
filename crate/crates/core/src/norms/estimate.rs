use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fields::GridSpec;

/// Serializes non-finite reals as the strings `"inf"`, `"-inf"`, `"nan"` (JSON has no literal for them).
pub fn ser_f64<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if v.is_nan() {
        s.serialize_str("nan")
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    /// Deterministic grid rules (lattice offsets); `N = 1` for the full double integral.
    Tensor,
    /// Importance-sampled offsets on the grid, any `N`.
    MonteCarlo,
    /// Nested adaptive quadrature on the whole line for closed-form fields, `N = 1`.
    Adaptive,
}

/// Calibration constants of [`classify_convergence`](super::classify_convergence).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceThresholds {
    /// Required decay of the increment density per doubling of the radius.
    pub decay_factor: f64,
    /// Required bound on `ΔI_last / I_last`.
    pub relative_tail: f64,
}

impl Default for ConvergenceThresholds {
    fn default() -> Self {
        ConvergenceThresholds {
            decay_factor: 2.0,
            relative_tail: 1e-2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub scheme: Scheme,
    pub mc_samples: usize,
    pub seed: u64,
    /// Truncation radii for the offset (or space) variable, strictly increasing.
    pub r_levels: Vec<f64>,
    /// Inner cutoff for `|x − y|`; defaults to the grid spacing.
    pub h_min: Option<f64>,
    /// With ≥ 2, a half-resolution pass provides the discretization error estimate.
    pub richardson_levels: usize,
    /// Grid used to sample closed-form fields for the grid-based schemes.
    pub grid: GridSpec,
    pub thresholds: ConvergenceThresholds,
}

impl QuadratureSpec {
    pub fn tensor(grid: GridSpec) -> Self {
        QuadratureSpec {
            scheme: Scheme::Tensor,
            mc_samples: 10_000,
            seed: 0,
            r_levels: (1..=10).map(|k| 2f64.powi(k)).collect(),
            h_min: None,
            richardson_levels: 2,
            grid,
            thresholds: ConvergenceThresholds::default(),
        }
    }

    pub fn monte_carlo(grid: GridSpec, samples: usize, seed: u64) -> Self {
        QuadratureSpec {
            scheme: Scheme::MonteCarlo,
            mc_samples: samples,
            seed,
            ..Self::tensor(grid)
        }
    }

    /// Whole-line adaptive quadrature with radii `2^k`, `k = 0..=max_pow`.
    pub fn adaptive(max_pow: i32) -> Self {
        QuadratureSpec {
            scheme: Scheme::Adaptive,
            r_levels: (0..=max_pow).map(|k| 2f64.powi(k)).collect(),
            ..Self::tensor(GridSpec::new(1, 16.0, 1024).expect("valid grid"))
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.r_levels.len() < 2 {
            return Err(Error::InvalidParameter("r_levels needs at least 2 levels".into()));
        }
        if self.r_levels[0] <= 0.0 || self.r_levels.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter("r_levels must be positive and strictly increasing".into()));
        }
        if self.scheme == Scheme::MonteCarlo && self.mc_samples < 10_000 {
            return Err(Error::InvalidParameter("mc_samples must be ≥ 10^4".into()));
        }
        if let Some(h) = self.h_min {
            if !(h > 0.0) {
                return Err(Error::InvalidParameter("h_min must be positive".into()));
            }
        }
        Ok(())
    }

    pub fn h_min(&self) -> f64 {
        self.h_min.unwrap_or_else(|| self.grid.spacing())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    Converged,
    Diverging,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Level {
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(serialize_with = "ser_f64")]
    pub value: f64,
}

/// A numerical (semi)norm value. `levels` hold partial integrals of the
/// `p`-th power up to each radius; `value` is the `p`-th root of the total.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeminormEstimate {
    #[serde(serialize_with = "ser_f64")]
    pub value: f64,
    #[serde(serialize_with = "ser_f64")]
    pub stderr: f64,
    pub classification: Classification,
    pub levels: Vec<Level>,
    pub thresholds: ConvergenceThresholds,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl SeminormEstimate {
    pub fn zero() -> Self {
        SeminormEstimate {
            value: 0.0,
            stderr: 0.0,
            classification: Classification::Converged,
            levels: Vec::new(),
            thresholds: ConvergenceThresholds::default(),
            notes: Vec::new(),
        }
    }

    pub fn level_values(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.value).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}
