//! Heat and fractional Schrödinger propagators on the periodic grid, and the
//! experiments run on top of them.

pub mod heat;
pub mod lemma;
pub mod schrodinger;

use serde::Serialize;

pub use heat::{heat_energy_experiment, heat_propagate, HeatReport, HeatRow, HeatRunConfig, HeatSummary};
pub use lemma::{lp12_identity_check, IdentityCheck};
pub use schrodinger::{
    convergence_experiment, lowhigh_split, lowhigh_split_dft, regularized_propagate, schrodinger_propagate, CutoffShape,
    EpsilonSweep, SchrodingerReport, SchrodingerRow, SchrodingerRunConfig,
};

use crate::error::{Error, Result};
use crate::fields::Field;

/// Time-integrated quantities up to one horizon.
#[derive(Clone, Debug, Serialize)]
pub struct TimeIntegral {
    #[serde(rename = "T")]
    pub horizon: f64,
    /// `∫_0^T t^ϱ ‖u‖²_{W_{s+1}} dt`
    pub weighted_s1: f64,
    /// `∫_0^T t^{1+ϱ} ‖u‖²_{W_{s+2}} dt`
    pub weighted_s2: f64,
    /// `∫_0^T ‖u‖^q_{W_{s+2}} dt`
    pub q_power_s2: f64,
}

/// `count` points from `start` to `end` (inclusive), equally spaced in log scale.
pub fn geometric_times(start: f64, end: f64, count: usize) -> Result<Vec<f64>> {
    if !(start > 0.0 && end > 0.0 && start.is_finite() && end.is_finite()) || count < 2 {
        return Err(Error::InvalidParameter(format!(
            "geometric sequence needs positive endpoints and ≥ 2 points ({start}, {end}, {count})"
        )));
    }
    let ratio = (end / start).ln() / (count - 1) as f64;
    let mut v: Vec<f64> = (0..count).map(|k| start * (ratio * k as f64).exp()).collect();
    v[count - 1] = end;
    Ok(v)
}

pub(crate) fn field_echo(f: &Field) -> serde_json::Value {
    match f {
        Field::Analytic(a) => match &a.family {
            Some(fam) => serde_json::json!({ "kind": "analytic", "dim": a.dim, "family": fam }),
            None => serde_json::json!({ "kind": "analytic", "dim": a.dim, "terms": a.terms.len() }),
        },
        Field::Sampled(s) => serde_json::json!({ "kind": "sampled", "grid": s.grid }),
    }
}

/// CSV with `#` comment lines (config echo, then one per column) before the header.
pub(crate) fn write_report_csv<W: std::io::Write>(
    mut w: W,
    docs: &[String],
    echo: &serde_json::Value,
    columns: &[String],
    rows: &[Vec<f64>],
) -> Result<()> {
    writeln!(w, "# config: {echo}")?;
    for d in docs {
        writeln!(w, "# {d}")?;
    }
    let mut out = csv::Writer::from_writer(w);
    let csv_err = |e: csv::Error| Error::Format(e.to_string());
    out.write_record(columns).map_err(csv_err)?;
    for r in rows {
        out.write_record(r.iter().map(|v| format!("{v:e}"))).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_endpoints() {
        let t = geometric_times(1e-1, 1e-4, 4).unwrap();
        assert_eq!(t[0], 1e-1);
        assert_eq!(t[3], 1e-4);
        assert!((t[1] - 1e-2).abs() < 1e-15);
        assert!(geometric_times(0.0, 1.0, 3).is_err());
    }
}
