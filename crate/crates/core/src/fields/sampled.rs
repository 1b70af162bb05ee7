//! Grid-sampled fields and their spectral operations.

use num_complex::Complex64;
use rayon::prelude::*;

use super::analytic::AnalyticField;
use super::fft::fft_nd;
use super::grid::{GridSpec, MultiIndex};
use super::profile::Profile;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct SampledField {
    pub grid: GridSpec,
    pub values: Vec<Complex64>,
}

/// A spectrum on the dual grid `(π/L)·{−n/2, …, n/2−1}^N`, stored in centered
/// (shifted) order, with the continuum normalization `f̂(ω) = ∫ f(x) e^{−ix·ω} dx`.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub grid: GridSpec,
    pub values: Vec<Complex64>,
}

impl SampledField {
    pub fn new(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidParameter("non-finite sample".into()));
        }
        Ok(SampledField { grid, values })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        SampledField {
            grid,
            values: vec![Complex64::default(); grid.len()],
        }
    }

    pub fn from_fn<F>(grid: GridSpec, f: F) -> Self
    where
        F: Fn(&[f64]) -> Complex64 + Sync,
    {
        let values = (0..grid.len())
            .into_par_iter()
            .map(|i| f(&grid.node(i)))
            .collect();
        SampledField { grid, values }
    }

    pub fn from_real_fn<F>(grid: GridSpec, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn sample(f: &AnalyticField, grid: GridSpec) -> Result<Self> {
        if f.dim != grid.dim {
            return Err(Error::InvalidParameter("field and grid dimensions differ".into()));
        }
        let s = Self::from_fn(grid, |x| f.eval(x));
        Self::new(s.grid, s.values)
    }

    /// Multilinear interpolation; periodic across the last cell, so the domain is `[−L, L]^N`.
    pub fn eval(&self, x: &[f64]) -> Result<Complex64> {
        let g = &self.grid;
        if x.len() != g.dim {
            return Err(Error::InvalidParameter("point dimension mismatch".into()));
        }
        let h = g.spacing();
        let mut lo = [0usize; 3];
        let mut hi = [0usize; 3];
        let mut frac = [0.0f64; 3];
        for a in 0..g.dim {
            if !(x[a] >= -g.half_width && x[a] <= g.half_width) {
                return Err(Error::OutOfDomain(x.to_vec()));
            }
            let t = (x[a] + g.half_width) / h;
            let j = (t.floor() as usize).min(g.points);
            frac[a] = t - j as f64;
            lo[a] = j % g.points;
            hi[a] = (j + 1) % g.points;
        }
        let mut acc = Complex64::default();
        for corner in 0..(1usize << g.dim) {
            let mut w = 1.0;
            let mut ix = [0usize; 3];
            for a in 0..g.dim {
                if corner >> a & 1 == 1 {
                    w *= frac[a];
                    ix[a] = hi[a];
                } else {
                    w *= 1.0 - frac[a];
                    ix[a] = lo[a];
                }
            }
            if w != 0.0 {
                acc += self.values[g.flatten(&ix[..g.dim])] * w;
            }
        }
        Ok(acc)
    }

    /// Raw DFT in natural bin order.
    pub fn dft(&self) -> Vec<Complex64> {
        let mut d = self.values.clone();
        fft_nd(&mut d, &self.grid, false);
        d
    }

    pub fn from_dft(grid: GridSpec, mut dft: Vec<Complex64>) -> Self {
        fft_nd(&mut dft, &grid, true);
        SampledField { grid, values: dft }
    }

    /// Multiplies the spectrum by `m(ω)` and transforms back.
    pub fn apply_multiplier<M>(&self, m: M) -> SampledField
    where
        M: Fn(&[f64]) -> Complex64,
    {
        let mut d = self.dft();
        for (i, v) in d.iter_mut().enumerate() {
            let w = self.grid.freq_vec(i);
            *v *= m(&w[..self.grid.dim]);
        }
        Self::from_dft(self.grid, d)
    }

    /// Like [`apply_multiplier`](Self::apply_multiplier) but starting from a precomputed DFT.
    pub fn multiplier_from_dft<M>(grid: GridSpec, dft: &[Complex64], m: M) -> SampledField
    where
        M: Fn(&[f64]) -> Complex64,
    {
        let d = dft
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let w = grid.freq_vec(i);
                v * m(&w[..grid.dim])
            })
            .collect();
        Self::from_dft(grid, d)
    }

    /// Spectral derivative: multiply by `(iω)^α`; the Nyquist bin is zeroed on
    /// axes differentiated an odd number of times, keeping real data real.
    pub fn derivative(&self, alpha: &MultiIndex) -> Result<SampledField> {
        if alpha.dim() != self.grid.dim {
            return Err(Error::InvalidParameter("multi-index dimension mismatch".into()));
        }
        if alpha.is_zero() {
            return Ok(self.clone());
        }
        let dft = self.dft();
        Ok(Self::derivative_from_dft(self.grid, &dft, alpha))
    }

    pub fn derivative_from_dft(grid: GridSpec, dft: &[Complex64], alpha: &MultiIndex) -> SampledField {
        let mut d = dft.to_vec();
        for (i, v) in d.iter_mut().enumerate() {
            let ix = grid.unflatten(i);
            let mut m = Complex64::new(1.0, 0.0);
            for a in 0..grid.dim {
                let k = alpha.0[a];
                if k == 0 {
                    continue;
                }
                if k % 2 == 1 && grid.is_nyquist(ix[a]) {
                    m = Complex64::default();
                    break;
                }
                m *= Complex64::new(0.0, grid.freq(ix[a])).powu(k as u32);
            }
            *v *= m;
        }
        Self::from_dft(grid, d)
    }

    /// Convolution with `φ_λ = λ^{−N} φ(·/λ)`, `φ` the smooth bump of radius 1,
    /// normalized so the discrete kernel integrates to exactly one.
    pub fn mollify(&self, lambda: f64) -> Result<SampledField> {
        let g = self.grid;
        let h = g.spacing();
        if !(lambda >= h) {
            return Err(Error::Precondition(format!(
                "mollifier radius λ = {lambda} ≥ grid spacing h = {h}"
            )));
        }
        let bump = Profile::Bump;
        let mut kernel: Vec<Complex64> = (0..g.len())
            .map(|i| {
                let ix = g.unflatten(i);
                let r2: f64 = (0..g.dim)
                    .map(|a| {
                        let d = g.signed_bin(ix[a]) as f64 * h / lambda;
                        d * d
                    })
                    .sum();
                Complex64::new(bump.value(r2), 0.0)
            })
            .collect();
        let mass: f64 = kernel.iter().map(|v| v.re).sum();
        for v in kernel.iter_mut() {
            *v /= mass;
        }
        fft_nd(&mut kernel, &g, false);
        let mut d = self.dft();
        for (v, k) in d.iter_mut().zip(&kernel) {
            *v *= k;
        }
        Ok(Self::from_dft(g, d))
    }

    /// Pointwise product with `ψ(x/n)`, `ψ` = 1 on `|x| < 1`, 0 on `|x| > 2`.
    pub fn truncate(&self, n: f64) -> SampledField {
        let bump = Profile::Bump;
        let g = self.grid;
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let r2: f64 = g.node(i).iter().map(|x| (x / (2.0 * n)).powi(2)).sum();
                v * bump.value(r2)
            })
            .collect();
        SampledField { grid: g, values }
    }

    pub fn fourier(&self) -> Spectrum {
        let g = self.grid;
        let d = self.dft();
        let half = g.points / 2;
        let vol = g.cell_volume();
        let mut out = vec![Complex64::default(); g.len()];
        for (i, v) in d.iter().enumerate() {
            let ix = g.unflatten(i);
            let mut c = [0usize; 3];
            let mut sign = 1.0;
            for a in 0..g.dim {
                let k = g.signed_bin(ix[a]);
                c[a] = (k + half as i64) as usize;
                if k.rem_euclid(2) == 1 {
                    sign = -sign;
                }
            }
            out[g.flatten(&c[..g.dim])] = v * (vol * sign);
        }
        Spectrum { grid: g, values: out }
    }

    pub fn scale(&self, c: Complex64) -> SampledField {
        SampledField {
            grid: self.grid,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, o: &SampledField) -> SampledField {
        SampledField {
            grid: self.grid,
            values: self.values.iter().zip(&o.values).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &SampledField) -> SampledField {
        SampledField {
            grid: self.grid,
            values: self.values.iter().zip(&o.values).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest `|f|` at nodes with `|x|_∞ ≥ r`: the wrap-around budget diagnostic.
    pub fn max_abs_outside(&self, r: f64) -> f64 {
        let g = self.grid;
        self.values
            .iter()
            .enumerate()
            .filter(|(i, _)| g.node(*i).iter().any(|x| x.abs() >= r))
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max)
    }

    /// Embeds the samples in a box `factor` times wider (same spacing), zero
    /// outside: refines the frequency lattice by `factor`.
    pub fn zero_padded(&self, factor: usize) -> Result<SampledField> {
        let g = self.grid;
        if factor <= 1 {
            return Ok(self.clone());
        }
        let big = GridSpec::new(g.dim, g.half_width * factor as f64, g.points * factor)?;
        let off = (factor - 1) * g.points / 2;
        let mut values = vec![Complex64::default(); big.len()];
        for (i, v) in self.values.iter().enumerate() {
            let ix = g.unflatten(i);
            let mut t = [0usize; 3];
            for a in 0..g.dim {
                t[a] = ix[a] + off;
            }
            values[big.flatten(&t[..g.dim])] = *v;
        }
        Ok(SampledField { grid: big, values })
    }

    /// Translation by whole grid cells (periodic).
    pub fn roll(&self, cells: &[i64]) -> SampledField {
        let g = self.grid;
        let n = g.points as i64;
        let mut out = vec![Complex64::default(); g.len()];
        for (i, v) in self.values.iter().enumerate() {
            let ix = g.unflatten(i);
            let mut t = [0usize; 3];
            for a in 0..g.dim {
                t[a] = (ix[a] as i64 + cells[a]).rem_euclid(n) as usize;
            }
            out[g.flatten(&t[..g.dim])] = *v;
        }
        SampledField { grid: g, values: out }
    }
}

impl Spectrum {
    /// Angular frequency vector at a centered index.
    pub fn freq(&self, idx: usize) -> Vec<f64> {
        let g = self.grid;
        let ix = g.unflatten(idx);
        (0..g.dim)
            .map(|a| (ix[a] as f64 - (g.points / 2) as f64) * g.dual_spacing())
            .collect()
    }

    pub fn inverse(&self) -> SampledField {
        let g = self.grid;
        let half = g.points as i64 / 2;
        let vol = g.cell_volume();
        let mut d = vec![Complex64::default(); g.len()];
        for (i, v) in self.values.iter().enumerate() {
            let ix = g.unflatten(i);
            let mut b = [0usize; 3];
            let mut sign = 1.0;
            for a in 0..g.dim {
                let k = ix[a] as i64 - half;
                b[a] = k.rem_euclid(g.points as i64) as usize;
                if k.rem_euclid(2) == 1 {
                    sign = -sign;
                }
            }
            d[g.flatten(&b[..g.dim])] = v * (sign / vol);
        }
        SampledField::from_dft(g, d)
    }
}
