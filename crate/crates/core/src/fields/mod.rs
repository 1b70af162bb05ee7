//! Functions on ℝ^N: closed-form families and grid samples.

pub mod analytic;
pub mod fft;
pub mod grid;
pub mod io;
pub mod plaplace;
pub mod profile;
pub mod sampled;

use num_complex::Complex64;

pub use analytic::{AnalyticField, Family, MAX_ANALYTIC_ORDER};
pub use grid::{GridSpec, MultiIndex};
pub use plaplace::plaplace_residual;
pub use profile::{smooth_step, spline_cutoff};
pub use sampled::{SampledField, Spectrum};

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub enum Field {
    Analytic(AnalyticField),
    Sampled(SampledField),
}

impl Field {
    pub fn analytic(dim: usize, family: Family) -> Result<Field> {
        Ok(Field::Analytic(AnalyticField::new(dim, family)?))
    }

    pub fn gaussian(dim: usize) -> Field {
        Field::Analytic(
            AnalyticField::new(dim, Family::Gaussian { sigma: 1.0, center: vec![0.0; dim] })
                .expect("valid parameters"),
        )
    }

    pub fn dim(&self) -> usize {
        match self {
            Field::Analytic(a) => a.dim,
            Field::Sampled(s) => s.grid.dim,
        }
    }

    /// Samples analytic fields on `grid`; sampled fields must already live on it.
    pub fn sampled_on(&self, grid: GridSpec) -> Result<SampledField> {
        match self {
            Field::Analytic(a) => SampledField::sample(a, grid),
            Field::Sampled(s) if s.grid == grid => Ok(s.clone()),
            Field::Sampled(s) => Err(Error::InvalidParameter(format!(
                "field sampled on {} but {} requested",
                s.grid, grid
            ))),
        }
    }

    pub fn as_analytic(&self) -> Option<&AnalyticField> {
        match self {
            Field::Analytic(a) => Some(a),
            Field::Sampled(_) => None,
        }
    }

    pub fn scale(&self, c: f64) -> Field {
        let c = Complex64::new(c, 0.0);
        match self {
            Field::Analytic(a) => Field::Analytic(a.scale(c)),
            Field::Sampled(s) => Field::Sampled(s.scale(c)),
        }
    }

    /// `x ↦ f(x/λ)`; analytic fields only, since samples do not dilate onto the same grid.
    pub fn dilate(&self, lambda: f64) -> Result<Field> {
        match self {
            Field::Analytic(a) => Ok(Field::Analytic(a.dilate(lambda))),
            Field::Sampled(_) => Err(Error::InvalidParameter("dilation needs an analytic field".into())),
        }
    }
}

pub fn evaluate(f: &Field, x: &[f64]) -> Result<Complex64> {
    if x.len() != f.dim() {
        return Err(Error::InvalidParameter("point dimension mismatch".into()));
    }
    match f {
        Field::Analytic(a) => Ok(a.eval(x)),
        Field::Sampled(s) => s.eval(x),
    }
}

pub fn partial_derivative(f: &Field, alpha: &MultiIndex) -> Result<Field> {
    match f {
        Field::Analytic(a) => Ok(Field::Analytic(a.derivative(alpha)?)),
        Field::Sampled(s) => Ok(Field::Sampled(s.derivative(alpha)?)),
    }
}

/// Sampled mollification; analytic fields are sampled on `grid` first.
pub fn mollify(f: &Field, lambda: f64, grid: GridSpec) -> Result<SampledField> {
    f.sampled_on(grid)?.mollify(lambda)
}

/// `ψ(x/n)·f` with `ψ` = 1 on `|x| < 1`, 0 on `|x| > 2`.
pub fn truncate(f: &Field, n: f64) -> Field {
    match f {
        Field::Analytic(a) => {
            let cut = AnalyticField::new(a.dim, Family::SmoothBump { radius: 2.0 * n })
                .expect("positive radius");
            Field::Analytic(cut.mul(a))
        }
        Field::Sampled(s) => Field::Sampled(s.truncate(n)),
    }
}

pub fn fourier(f: &SampledField) -> Spectrum {
    f.fourier()
}

pub fn inverse(s: &Spectrum) -> SampledField {
    s.inverse()
}
