use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{field_echo, write_report_csv};
use crate::error::{Error, Result};
use crate::fields::{smooth_step, spline_cutoff, Field, GridSpec, SampledField};

fn symbol(w: &[f64], a: f64) -> f64 {
    let r2: f64 = w.iter().map(|x| x * x).sum();
    if r2 == 0.0 {
        0.0
    } else if a == 2.0 {
        r2
    } else {
        r2.powf(a / 2.0)
    }
}

fn check_a(a: f64) -> Result<()> {
    if a > 1.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("a > 1 (a = {a})")))
    }
}

/// `e^{it(−Δ)^{a/2}} f`: the spectrum times `e^{it|ω|^a}`.
pub fn schrodinger_propagate(f: &SampledField, t: f64, a: f64) -> Result<SampledField> {
    check_a(a)?;
    if t == 0.0 {
        return Ok(f.clone());
    }
    Ok(f.apply_multiplier(|w| Complex64::from_polar(1.0, t * symbol(w, a))))
}

/// `(f₁, f₂)` with `f̂₁ = B(|ω|) f̂` (1 on `|ω| ≤ 1`, 0 on `|ω| ≥ 2`) and `f̂₂ = (1 − B) f̂`.
pub fn lowhigh_split(f: &SampledField) -> (SampledField, SampledField) {
    let (low, high) = lowhigh_split_dft(f);
    (SampledField::from_dft(f.grid, low), SampledField::from_dft(f.grid, high))
}

/// The DFTs of the two pieces, before transforming back.
pub fn lowhigh_split_dft(f: &SampledField) -> (Vec<Complex64>, Vec<Complex64>) {
    let g = f.grid;
    let d = f.dft();
    let mut low = Vec::with_capacity(d.len());
    let mut high = Vec::with_capacity(d.len());
    for (i, v) in d.iter().enumerate() {
        let w = g.freq_vec(i);
        let b = spline_cutoff(w[..g.dim].iter().map(|x| x * x).sum::<f64>().sqrt());
        low.push(v * b);
        high.push(v * (1.0 - b));
    }
    (low, high)
}

/// The radial cutoff `φ₀`: 1 on `[0, 1]`, 0 on `[2, ∞)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutoffShape {
    /// Quintic smoothstep.
    Spline,
    /// `1 − smooth_step(r − 1)`, flat to all orders at both ends.
    Alt,
}

impl CutoffShape {
    pub fn eval(self, r: f64) -> f64 {
        match self {
            CutoffShape::Spline => spline_cutoff(r),
            CutoffShape::Alt => 1.0 - smooth_step(r - 1.0),
        }
    }
}

/// `e^{it|ω|²}(1 − φ₀(|ω|/ε))` applied to `f`: the propagator with the
/// frequencies below `ε` removed.
pub fn regularized_propagate(f: &SampledField, t: f64, eps: f64, shape: CutoffShape) -> Result<SampledField> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter(format!("ε = {eps} must be positive")));
    }
    Ok(f.apply_multiplier(|w| {
        let r2: f64 = w.iter().map(|x| x * x).sum();
        Complex64::from_polar(1.0 - shape.eval(r2.sqrt() / eps), t * r2)
    }))
}

#[derive(Clone, Debug)]
pub struct SchrodingerRunConfig {
    pub grid: GridSpec,
    pub initial: Field,
    pub a: f64,
    /// Positive, strictly decreasing.
    pub times: Vec<f64>,
    /// Cut-offs for the regularized operator (`a = 2` only); empty skips the sweep.
    pub epsilon_list: Vec<f64>,
    pub probes: Vec<Vec<f64>>,
}

impl SchrodingerRunConfig {
    pub fn validate(&self) -> Result<()> {
        check_a(self.a)?;
        if self.times.is_empty() || self.times.iter().any(|t| !(*t > 0.0)) || self.times.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(Error::InvalidParameter("times must be positive and strictly decreasing".into()));
        }
        if self.probes.is_empty() || self.probes.iter().any(|p| p.len() != self.grid.dim) {
            return Err(Error::InvalidParameter(format!("need ≥ 1 probe point of dimension {}", self.grid.dim)));
        }
        if self.epsilon_list.iter().any(|e| !(*e > 0.0)) {
            return Err(Error::InvalidParameter("ε values must be positive".into()));
        }
        if !self.epsilon_list.is_empty() && self.a != 2.0 {
            return Err(Error::InvalidParameter("the ε-regularized operator is defined for a = 2".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SchrodingerRow {
    pub t: f64,
    /// `max_x |u(t,x) − f(x)|` over the probes.
    pub err_f: f64,
    pub err_f1: f64,
    pub err_f2: f64,
    /// `|‖u(t)‖₂/‖f‖₂ − 1|`
    pub mass_drift: f64,
}

/// Regularized values at the first (largest) time for a decreasing ε list.
#[derive(Clone, Debug, Serialize)]
pub struct EpsilonSweep {
    pub t: f64,
    pub eps: Vec<f64>,
    /// `max_x |u_{ε_{k+1}} − u_{ε_k}|` with the spline cutoff.
    pub cauchy: Vec<f64>,
    /// `max_x |u_ε^{spline} − u_ε^{alt}|` per ε.
    pub shape_gap: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SchrodingerSummary {
    /// Probe error non-increasing as `t ↓ 0`, up to `1e−12`.
    pub monotone_trend: bool,
    pub final_error: f64,
    pub max_mass_drift: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SchrodingerReport {
    pub config_echo: serde_json::Value,
    /// `t = 0` first, then the configured times.
    pub rows: Vec<SchrodingerRow>,
    pub eps_sweep: Option<EpsilonSweep>,
    pub summary: SchrodingerSummary,
}

fn probe_max(f: &SampledField, probes: &[Vec<f64>]) -> Result<f64> {
    let mut m: f64 = 0.0;
    for x in probes {
        m = m.max(f.eval(x)?.norm());
    }
    Ok(m)
}

fn l2(f: &SampledField) -> f64 {
    let s: f64 = f.values.iter().map(|v| v.norm_sqr()).sum();
    (s * f.grid.cell_volume()).sqrt()
}

/// Probe errors of `e^{it(−Δ)^{a/2}}` for the data and its low/high pieces as `t → 0`.
pub fn convergence_experiment(cfg: &SchrodingerRunConfig) -> Result<SchrodingerReport> {
    cfg.validate()?;
    let f = cfg.initial.sampled_on(cfg.grid)?;
    let (f1, f2) = lowhigh_split(&f);
    let mass0 = l2(&f);
    let mut times = vec![0.0];
    times.extend(&cfg.times);
    let rows: Vec<SchrodingerRow> = times
        .par_iter()
        .map(|&t| -> Result<SchrodingerRow> {
            let err = |g: &SampledField| -> Result<f64> {
                probe_max(&schrodinger_propagate(g, t, cfg.a)?.sub(g), &cfg.probes)
            };
            let u = schrodinger_propagate(&f, t, cfg.a)?;
            Ok(SchrodingerRow {
                t,
                err_f: probe_max(&u.sub(&f), &cfg.probes)?,
                err_f1: err(&f1)?,
                err_f2: err(&f2)?,
                mass_drift: if mass0 > 0.0 { (l2(&u) / mass0 - 1.0).abs() } else { 0.0 },
            })
        })
        .collect::<Result<_>>()?;

    let eps_sweep = if cfg.epsilon_list.is_empty() {
        None
    } else {
        let mut eps = cfg.epsilon_list.clone();
        eps.sort_by(|a, b| b.total_cmp(a));
        let t = cfg.times[0];
        let spline: Vec<SampledField> = eps
            .par_iter()
            .map(|&e| regularized_propagate(&f, t, e, CutoffShape::Spline))
            .collect::<Result<_>>()?;
        let alt: Vec<SampledField> = eps
            .par_iter()
            .map(|&e| regularized_propagate(&f, t, e, CutoffShape::Alt))
            .collect::<Result<_>>()?;
        let cauchy = spline
            .windows(2)
            .map(|w| probe_max(&w[1].sub(&w[0]), &cfg.probes))
            .collect::<Result<_>>()?;
        let shape_gap = spline
            .iter()
            .zip(&alt)
            .map(|(s, a)| probe_max(&s.sub(a), &cfg.probes))
            .collect::<Result<_>>()?;
        Some(EpsilonSweep { t, eps, cauchy, shape_gap })
    };

    let positive = &rows[1..];
    let summary = SchrodingerSummary {
        monotone_trend: positive.windows(2).all(|w| w[1].err_f <= w[0].err_f + 1e-12),
        final_error: positive.last().map(|r| r.err_f).unwrap_or(0.0),
        max_mass_drift: rows.iter().map(|r| r.mass_drift).fold(0.0, f64::max),
    };
    let config_echo = serde_json::json!({
        "grid": cfg.grid,
        "initial": field_echo(&cfg.initial),
        "a": cfg.a,
        "times": cfg.times,
        "epsilon_list": cfg.epsilon_list,
        "probes": cfg.probes,
    });
    Ok(SchrodingerReport { config_echo, rows, eps_sweep, summary })
}

impl SchrodingerReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let columns: Vec<String> = ["t", "err_f", "err_f1", "err_f2", "mass_drift"].map(String::from).to_vec();
        let docs = [
            "t: time (0 first, then decreasing)",
            "err_f: max over probes of |u(t,x) - f(x)|",
            "err_f1: same for the low-frequency piece f1",
            "err_f2: same for the high-frequency piece f2",
            "mass_drift: | ||u(t)||_2 / ||f||_2 - 1 |",
        ]
        .map(String::from);
        let rows: Vec<Vec<f64>> = self
            .rows
            .iter()
            .map(|r| vec![r.t, r.err_f, r.err_f1, r.err_f2, r.mass_drift])
            .collect();
        write_report_csv(w, &docs, &self.config_echo, &columns, &rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::new(1, 16.0, 1024).unwrap()
    }

    /// Spectrum `B(2|ω|)·ĝ`: supported in `|ω| < 1` exactly on the grid.
    fn band_limited(g: GridSpec) -> SampledField {
        let d = Field::gaussian(1).sampled_on(g).unwrap().dft();
        SampledField::multiplier_from_dft(g, &d, |w| Complex64::new(spline_cutoff(2.0 * w[0].abs()), 0.0))
    }

    #[test]
    fn complex_gaussian_closed_form() {
        let f = Field::gaussian(1).sampled_on(grid()).unwrap();
        let u = schrodinger_propagate(&f, 0.25, 2.0).unwrap();
        let exact = 0.5 * Complex64::new(0.25, -0.25).powf(-0.5);
        assert!((u.values[512] - exact).norm() < 1e-5);
        assert!((u.values[512].norm() - 0.5 * (1.0f64 / 16.0 + 1.0 / 16.0).powf(-0.25)).abs() < 1e-5);
        assert!((l2(&u) / l2(&f) - 1.0).abs() < 1e-12);
        assert_eq!(schrodinger_propagate(&f, 0.0, 2.0).unwrap(), f);
        assert!(schrodinger_propagate(&f, 0.1, 1.0).is_err());
    }

    #[test]
    fn semigroup_fractional() {
        let f = Field::gaussian(1).sampled_on(grid()).unwrap();
        let a = schrodinger_propagate(&schrodinger_propagate(&f, 0.1, 1.5).unwrap(), 0.2, 1.5).unwrap();
        let b = schrodinger_propagate(&f, 0.3, 1.5).unwrap();
        assert!(a.sub(&b).max_abs() < 1e-12);
    }

    #[test]
    fn split_pieces() {
        let g = grid();
        let f = Field::gaussian(1).sampled_on(g).unwrap();
        let (f1, f2) = lowhigh_split(&f);
        assert!(f1.add(&f2).sub(&f).max_abs() < 1e-14);
        let (_, high) = lowhigh_split_dft(&f);
        for (i, v) in high.iter().enumerate() {
            if g.freq_vec(i)[0].abs() <= 1.0 {
                assert_eq!(*v, Complex64::new(0.0, 0.0));
            }
        }
        let b = band_limited(g);
        let (b1, b2) = lowhigh_split(&b);
        assert!(b1.sub(&b).max_abs() < 1e-12 && b2.max_abs() < 1e-12);
    }

    #[test]
    fn regularized_matches_plain_without_dc() {
        let g = grid();
        let f = Field::gaussian(1).sampled_on(g).unwrap();
        let no_dc = f.apply_multiplier(|w| Complex64::new(if w[0] == 0.0 { 0.0 } else { 1.0 }, 0.0));
        let eps = 0.4 * g.dual_spacing();
        let a = regularized_propagate(&no_dc, 0.3, eps, CutoffShape::Spline).unwrap();
        let b = schrodinger_propagate(&no_dc, 0.3, 2.0).unwrap();
        assert!(a.sub(&b).max_abs() < 1e-12);
    }

    #[test]
    fn band_limited_convergence() {
        let g = grid();
        let times = super::super::geometric_times(1e-1, 1e-4, 7).unwrap();
        let cfg = SchrodingerRunConfig {
            grid: g,
            initial: Field::Sampled(band_limited(g)),
            a: 2.0,
            times,
            epsilon_list: vec![0.05, 0.025, 0.0125],
            probes: vec![vec![0.0], vec![0.5], vec![-1.25]],
        };
        let r = convergence_experiment(&cfg).unwrap();
        assert_eq!(r.rows[0].err_f, 0.0);
        assert!(r.summary.monotone_trend);
        assert!(r.summary.final_error < 1e-3);
        assert!(r.summary.max_mass_drift < 1e-12);
        let sw = r.eps_sweep.unwrap();
        assert!(sw.cauchy.iter().all(|c| *c < 1e-6), "{:?}", sw.cauchy);
        let v: serde_json::Value = serde_json::from_str(&r_json(&cfg)).unwrap();
        assert!(v["rows"].as_array().unwrap().len() == 8);
    }

    fn r_json(cfg: &SchrodingerRunConfig) -> String {
        convergence_experiment(cfg).unwrap().to_json()
    }
}
