use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{field_echo, write_report_csv, TimeIntegral};
use crate::error::{Error, Result};
use crate::fields::{Field, GridSpec, MultiIndex, SampledField};
use crate::index::exponent::to_f64;
use crate::index::{fmt_rational, heat_estimate_params, ExponentVector, HeatEstimateParams, SmoothnessIndex};
use crate::norms::{gagliardo_full, grid_lp, hs_seminorm_fourier, QuadratureSpec};

/// `u(t) = e^{tΔ} f`: the spectrum times `e^{−t|ω|²}`.
pub fn heat_propagate(f: &SampledField, t: f64) -> Result<SampledField> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("time t = {t} must be ≥ 0")));
    }
    if t == 0.0 {
        return Ok(f.clone());
    }
    Ok(f.apply_multiplier(|w| Complex64::new((-t * w.iter().map(|x| x * x).sum::<f64>()).exp(), 0.0)))
}

fn heat_dft(grid: GridSpec, dft: &[Complex64], t: f64) -> Vec<Complex64> {
    dft.iter()
        .enumerate()
        .map(|(i, v)| {
            let w = grid.freq_vec(i);
            let w2: f64 = w[..grid.dim].iter().map(|x| x * x).sum();
            v * (-t * w2).exp()
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct HeatRunConfig {
    pub grid: GridSpec,
    pub initial: Field,
    pub s: SmoothnessIndex,
    pub pvec: ExponentVector,
    /// Positive, strictly increasing.
    pub times: Vec<f64>,
    /// Horizons for the time-integrated quantities; each ≤ the last time.
    pub t_list: Vec<f64>,
    /// Time-integrability exponent, `0 < q < 2/(2+ϱ)`; half the supremum when absent.
    pub q: Option<f64>,
    /// Used for Gagliardo terms with `p ≠ 2` (at `p = 2` the Fourier-side formula is exact).
    pub quad: QuadratureSpec,
    /// Slack on the constant-one monotonicity flags.
    pub monotone_tol: f64,
    /// Allowed `max |u₀|` outside `|x|_∞ < L/2`.
    pub wrap_budget: f64,
}

impl HeatRunConfig {
    pub fn new(grid: GridSpec, initial: Field, s: SmoothnessIndex, pvec: ExponentVector, times: Vec<f64>) -> Self {
        let t_list = times.last().map(|t| vec![*t]).unwrap_or_default();
        let quad = if grid.dim == 1 {
            QuadratureSpec::tensor(grid)
        } else {
            QuadratureSpec::monte_carlo(grid, 10_000, 0)
        };
        HeatRunConfig {
            grid,
            initial,
            s,
            pvec,
            times,
            t_list,
            q: None,
            quad,
            monotone_tol: 1e-3,
            wrap_budget: 1e-10,
        }
    }

    pub fn validate(&self) -> Result<HeatEstimateParams> {
        if self.times.is_empty() || self.times[0] <= 0.0 || self.times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter("times must be positive and strictly increasing".into()));
        }
        let last = *self.times.last().unwrap();
        if self.t_list.iter().any(|t| !(*t > 0.0 && *t <= last)) {
            return Err(Error::InvalidParameter(format!("T_list entries must lie in (0, {last}]")));
        }
        if self.initial.dim() != self.grid.dim {
            return Err(Error::InvalidParameter("initial data dimension differs from the grid".into()));
        }
        let params = heat_estimate_params(self.grid.dim, &self.s, &self.pvec)?;
        if let Some(q) = self.q {
            let sup = to_f64(&params.q_sup());
            if !(q > 0.0 && q < sup) {
                return Err(Error::InvalidParameter(format!("q = {q} must lie in (0, {sup})")));
            }
        }
        Ok(params)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HeatRow {
    pub t: f64,
    /// Column name → value, in [`HeatReport::columns`] order.
    pub values: Vec<f64>,
    pub monotone: Vec<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HeatSummary {
    pub all_monotone: bool,
    /// `max_t ‖∂^α u(t)‖ / ‖∂^α u₀‖` over all derivative columns.
    pub max_ratio: f64,
    pub l2_nonincreasing: bool,
    pub weighted_applicable: bool,
    pub varrho: String,
    pub sigma: String,
    pub q: f64,
    pub q_sup: String,
    pub integrals: Vec<TimeIntegral>,
    pub wrap_max: f64,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HeatReport {
    pub config_echo: serde_json::Value,
    pub columns: Vec<String>,
    /// One line per column describing it (CSV header comments).
    pub column_docs: Vec<String>,
    pub monotone_columns: Vec<String>,
    pub rows: Vec<HeatRow>,
    pub summary: HeatSummary,
}

/// One norm `W_σ^{e⃗}` on a time slice: its parts and the sum.
struct NormParts {
    labels: Vec<String>,
    values: Vec<f64>,
}

impl NormParts {
    fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

struct Slice<'a> {
    grid: GridSpec,
    dft: Vec<Complex64>,
    cache: BTreeMap<Vec<usize>, SampledField>,
    quad: &'a QuadratureSpec,
}

impl Slice<'_> {
    fn derivative(&mut self, alpha: &MultiIndex) -> SampledField {
        let (g, d) = (self.grid, &self.dft);
        self.cache
            .entry(alpha.0.clone())
            .or_insert_with(|| {
                if alpha.is_zero() {
                    SampledField::from_dft(g, d.clone())
                } else {
                    SampledField::derivative_from_dft(g, d, alpha)
                }
            })
            .clone()
    }

    /// `Σ_{|α|≤⌊σ⌋} ‖∂^α u‖_{e_{|α|}} + Σ_{|α|=⌊σ⌋} [∂^α u]_{ν, e_last}`.
    fn norm(&mut self, floor: usize, nu: Option<f64>, exps: &[f64], tag: &str) -> Result<NormParts> {
        let dim = self.grid.dim;
        let mut labels = Vec::new();
        let mut values = Vec::new();
        for order in 0..=floor {
            for alpha in MultiIndex::all_of_order(dim, order) {
                let d = self.derivative(&alpha);
                labels.push(format!("{tag}L{}_{}", exps[order], alpha_label(&alpha)));
                values.push(grid_lp(&d, exps[order]));
            }
        }
        if let Some(nu) = nu {
            let p = *exps.last().unwrap();
            for alpha in MultiIndex::all_of_order(dim, floor) {
                let d = self.derivative(&alpha);
                let v = if p == 2.0 {
                    hs_seminorm_fourier(&d, nu)?
                } else {
                    gagliardo_full(&Field::Sampled(d), nu, p, self.quad)?.value
                };
                labels.push(format!("{tag}G{nu}_{}", alpha_label(&alpha)));
                values.push(v);
            }
        }
        Ok(NormParts { labels, values })
    }
}

fn alpha_label(alpha: &MultiIndex) -> String {
    let s: Vec<String> = alpha.0.iter().map(|k| k.to_string()).collect();
    format!("d{}", s.join(""))
}

struct SliceResult {
    t: f64,
    ws: NormParts,
    ws1: f64,
    ws2: f64,
    l2: f64,
}

/// Measures every quantity in the energy estimates along the heat flow of
/// `cfg.initial`. Rows start with `t = 0`.
pub fn heat_energy_experiment(cfg: &HeatRunConfig) -> Result<HeatReport> {
    let params = cfg.validate()?;
    let g = cfg.grid;
    let u0 = cfg.initial.sampled_on(g)?;
    if let Field::Analytic(a) = &cfg.initial {
        let need = cfg.s.floor() + 3;
        if !a.supports_order(need) {
            return Err(Error::UnsupportedDerivative {
                family: "initial data".into(),
                order: need,
            });
        }
    }
    let mut warnings = Vec::new();
    let wrap_max = u0.max_abs_outside(g.half_width / 2.0);
    if wrap_max > cfg.wrap_budget {
        warnings.push(format!(
            "initial data reach {wrap_max:e} outside |x| < L/2 (budget {:e}): wrap-around error not controlled",
            cfg.wrap_budget
        ));
    }
    let dft0 = u0.dft();
    let floor = cfg.s.floor();
    let nu = (!cfg.s.is_integer()).then(|| cfg.s.to_f64() - floor as f64);
    let p: Vec<f64> = cfg.pvec.to_f64();
    let mut r: Vec<f64> = params.r_vec.to_f64();
    r.push(2.0);
    let r1 = r.clone();
    r.push(2.0);
    let r2 = r;
    let q = cfg.q.unwrap_or_else(|| 0.5 * to_f64(&params.q_sup()));
    let varrho = to_f64(&params.varrho);

    let mut times = vec![0.0];
    times.extend(&cfg.times);
    let slices: Vec<SliceResult> = times
        .par_iter()
        .map(|&t| -> Result<SliceResult> {
            let mut sl = Slice {
                grid: g,
                dft: heat_dft(g, &dft0, t),
                cache: BTreeMap::new(),
                quad: &cfg.quad,
            };
            let ws = sl.norm(floor, nu, &p, "")?;
            let ws1 = sl.norm(floor + 1, nu, &r1, "+1")?.total();
            let ws2 = sl.norm(floor + 2, nu, &r2, "+2")?.total();
            // L² straight from the spectrum, summed in a fixed order: exactly non-increasing in t.
            let mut l2 = 0.0;
            for v in &sl.dft {
                l2 += v.norm_sqr();
            }
            let l2 = (g.cell_volume() / g.len() as f64 * l2).sqrt();
            Ok(SliceResult { t, ws, ws1, ws2, l2 })
        })
        .collect::<Result<_>>()?;

    let n_deriv = slices[0].ws.labels.iter().filter(|l| l.starts_with('L')).count();
    let reference: Vec<f64> = slices[0].ws.values[..n_deriv].to_vec();
    let monotone_columns: Vec<String> = slices[0].ws.labels[..n_deriv].to_vec();

    let mut columns: Vec<String> = vec!["t".into()];
    let mut column_docs = vec!["t: time".to_string()];
    for l in &slices[0].ws.labels {
        columns.push(l.clone());
        column_docs.push(if l.starts_with('L') {
            format!("{l}: L^p norm of the derivative d(α) of u(t)")
        } else {
            format!("{l}: Gagliardo seminorm of d(α)u(t) at order ν")
        });
    }
    for (c, d) in [
        ("W_s", "full W_s^p norm of u(t)"),
        ("W_s+1", "W_{s+1}^{(r,2)} norm"),
        ("W_s+2", "W_{s+2}^{(r,2,2)} norm"),
        ("L2", "‖u(t)‖_2 from the spectrum"),
        ("int_weighted_s+1", "trapezoid ∫_0^t τ^ϱ ‖u(τ)‖²_{W_{s+1}} dτ"),
        ("int_weighted_s+2", "trapezoid ∫_0^t τ^{1+ϱ} ‖u(τ)‖²_{W_{s+2}} dτ"),
        ("int_q_s+2", "trapezoid ∫_0^t ‖u(τ)‖^q_{W_{s+2}} dτ"),
    ] {
        columns.push(c.into());
        column_docs.push(format!("{c}: {d}"));
    }
    for m in &monotone_columns {
        columns.push(format!("mono_{m}"));
        column_docs.push(format!("mono_{m}: 1 if {m}(t) ≤ {m}(0)·(1+{})", cfg.monotone_tol));
    }

    let weight = |t: f64, e: f64| if t == 0.0 { if e == 0.0 { 1.0 } else { 0.0 } } else { t.powf(e) };
    let y_b: Vec<f64> = slices.iter().map(|s| weight(s.t, varrho) * s.ws1 * s.ws1).collect();
    let y_c: Vec<f64> = slices.iter().map(|s| weight(s.t, 1.0 + varrho) * s.ws2 * s.ws2).collect();
    let y_q: Vec<f64> = slices.iter().map(|s| s.ws2.powf(q)).collect();
    let cum = |y: &[f64]| {
        let mut out = vec![0.0];
        for i in 1..y.len() {
            out.push(out[i - 1] + 0.5 * (times[i] - times[i - 1]) * (y[i] + y[i - 1]));
        }
        out
    };
    let (cb, cc, cq) = (cum(&y_b), cum(&y_c), cum(&y_q));

    let mut rows = Vec::new();
    let mut all_monotone = true;
    let mut max_ratio: f64 = 0.0;
    for (i, s) in slices.iter().enumerate() {
        let mut values = s.ws.values.clone();
        values.extend([s.ws.total(), s.ws1, s.ws2, s.l2, cb[i], cc[i], cq[i]]);
        let monotone: Vec<bool> = (0..n_deriv)
            .map(|j| {
                let (v, r0) = (s.ws.values[j], reference[j]);
                if r0 > 0.0 {
                    max_ratio = max_ratio.max(v / r0);
                }
                v <= r0 * (1.0 + cfg.monotone_tol)
            })
            .collect();
        all_monotone &= monotone.iter().all(|m| *m);
        values.extend(monotone.iter().map(|m| if *m { 1.0 } else { 0.0 }));
        rows.push(HeatRow { t: s.t, values, monotone });
    }
    let l2_nonincreasing = slices.windows(2).all(|w| w[1].l2 <= w[0].l2);

    let at = |c: &[f64], y: &[f64], horizon: f64| {
        let i = times.partition_point(|&t| t < horizon);
        if times[i] == horizon {
            return c[i];
        }
        let (t0, t1) = (times[i - 1], times[i]);
        let frac = (horizon - t0) / (t1 - t0);
        let yh = y[i - 1] + frac * (y[i] - y[i - 1]);
        c[i - 1] + 0.5 * (horizon - t0) * (y[i - 1] + yh)
    };
    let integrals = cfg
        .t_list
        .iter()
        .map(|&big_t| TimeIntegral {
            horizon: big_t,
            weighted_s1: at(&cb, &y_b, big_t),
            weighted_s2: at(&cc, &y_c, big_t),
            q_power_s2: at(&cq, &y_q, big_t),
        })
        .collect();
    if !params.weighted_applicable {
        warnings.push("p_⌊s⌋ or p_⌈s⌉ exceeds 2: the weighted estimates are reported but not claimed".into());
    }

    let config_echo = serde_json::json!({
        "grid": g,
        "initial": field_echo(&cfg.initial),
        "s": cfg.s.to_string(),
        "p": cfg.pvec.to_string(),
        "times": cfg.times,
        "T_list": cfg.t_list,
        "q": q,
        "quad": cfg.quad,
        "monotone_tol": cfg.monotone_tol,
        "wrap_budget": cfg.wrap_budget,
    });
    Ok(HeatReport {
        config_echo,
        columns,
        column_docs,
        monotone_columns,
        rows,
        summary: HeatSummary {
            all_monotone,
            max_ratio,
            l2_nonincreasing,
            weighted_applicable: params.weighted_applicable,
            varrho: fmt_rational(&params.varrho),
            sigma: fmt_rational(&params.sigma),
            q,
            q_sup: fmt_rational(&params.q_sup()),
            integrals,
            wrap_max,
            warnings,
        },
    })
}

impl HeatReport {
    pub fn to_json(&self) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut m = serde_json::Map::new();
                m.insert("t".into(), serde_json::json!(r.t));
                for (c, v) in self.columns[1..].iter().zip(&r.values) {
                    m.insert(c.clone(), serde_json::json!(v));
                }
                serde_json::Value::Object(m)
            })
            .collect();
        let env = serde_json::json!({
            "config_echo": self.config_echo,
            "columns": self.columns,
            "rows": rows,
            "summary": self.summary,
        });
        serde_json::to_string_pretty(&env).expect("serializable")
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let rows: Vec<Vec<f64>> = self
            .rows
            .iter()
            .map(|r| {
                let mut v = vec![r.t];
                v.extend(&r.values);
                v
            })
            .collect();
        write_report_csv(w, &self.column_docs, &self.config_echo, &self.columns, &rows)
    }
}
