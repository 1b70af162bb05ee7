use std::f64::consts::PI;

use nusob_core::evolution::*;
use nusob_core::fields::{Field, GridSpec, SampledField};
use nusob_core::norms::hs_constant_inverse_closed;
use nusob_core::quad::{integrate, integrate_log, integrate_pieces, Tolerance};
use nusob_core::{ExponentVector, SmoothnessIndex};
use num_complex::Complex64;
use proptest::prelude::*;

fn tol() -> Tolerance {
    Tolerance::new(1e-14, 1e-11)
}

/// `u(t,x) = (1+4t)^{−1/2} e^{−x²/(1+4t)}` and its first two derivatives' L² norms,
/// plus `[u′]_{1/2,2}` from `û = √π e^{−(1+4t)ω²/4}`.
fn gaussian_columns(t: f64) -> (f64, f64, f64, f64) {
    let a = 1.0 + 4.0 * t;
    let u = |x: f64| (-x * x / a).exp() / a.sqrt();
    let du = |x: f64| -2.0 * x / a * u(x);
    let d2u = |x: f64| (4.0 * x * x / (a * a) - 2.0 / a) * u(x);
    let pts: Vec<f64> = (-8..=8).map(|k| k as f64 * 5.0).collect();
    let l2 = |g: &dyn Fn(f64) -> f64| integrate_pieces(&mut |x| g(x).powi(2), &pts, tol()).value.sqrt();
    let hat2 = |w: f64| PI * (-a * w * w / 2.0).exp();
    // [∂u]² = C⁻¹(2π)⁻¹ ∫ |ω|^{2s} ω² |û|², s = 1/2, over ℝ (twice the half line).
    let semi = (hs_constant_inverse_closed(1, 0.5) / PI * integrate_log(|w| w * w * w * hat2(w), 1e-12, 60.0, tol()).value).sqrt();
    (l2(&u), l2(&du), l2(&d2u), semi)
}

#[test]
fn heat_columns_match_closed_form_gaussian() {
    let g = GridSpec::new(1, 16.0, 1024).unwrap();
    let s = SmoothnessIndex::from_ratio(1, 2).unwrap();
    let pv = ExponentVector::from_ints(&[2, 2]).unwrap();
    let times = geometric_times(1e-3, 1.0, 49).unwrap();
    let mut cfg = HeatRunConfig::new(g, Field::gaussian(1), s, pv, times.clone());
    cfg.t_list = vec![0.25, 1.0];
    let r = heat_energy_experiment(&cfg).unwrap();
    assert!(r.summary.all_monotone && r.summary.l2_nonincreasing);
    assert!(r.summary.warnings.is_empty(), "{:?}", r.summary.warnings);
    let col = |name: &str| r.columns.iter().position(|c| c == name).unwrap() - 1;
    for row in &r.rows {
        let (l2, d1, _, semi_d1) = gaussian_columns(row.t);
        assert!((row.values[col("L2")] / l2 - 1.0).abs() < 1e-10);
        // W_{1/2}^{(2,2)} = ‖u‖₂ + [u]_{1/2,2}; W_{3/2}^{(2,2,2)} = ‖u‖₂ + ‖u′‖₂ + [u′]_{1/2,2}.
        assert!((row.values[col("W_s+1")] - (l2 + d1 + semi_d1)).abs() < 1e-6 * (l2 + d1 + semi_d1), "t={}", row.t);
    }
    // ϱ = 0 here: ∫_0^T ‖u‖²_{W_{s+1}} dt by dense quadrature.
    for ti in &r.summary.integrals {
        let exact = integrate(
            |t| {
                let (l2, d1, _, sd) = gaussian_columns(t);
                (l2 + d1 + sd).powi(2)
            },
            0.0,
            ti.horizon,
            Tolerance::new(1e-10, 1e-8),
        )
        .value;
        assert!((ti.weighted_s1 / exact - 1.0).abs() < 5e-3, "T={}: {} vs {exact}", ti.horizon, ti.weighted_s1);
    }
    let (a, b) = (&r.summary.integrals[0], &r.summary.integrals[1]);
    assert!(b.weighted_s1 > a.weighted_s1 && b.weighted_s1 / a.weighted_s1 < 4.0);
    assert!(b.q_power_s2 / a.q_power_s2 < 4.0);
}

#[test]
fn heat_report_serializes() {
    let g = GridSpec::new(1, 16.0, 512).unwrap();
    let s = SmoothnessIndex::from_ratio(4, 3).unwrap();
    let pv = "2,3/2,3".parse().unwrap();
    let cfg = HeatRunConfig::new(g, Field::gaussian(1), s, pv, geometric_times(1e-2, 0.5, 5).unwrap());
    let r = heat_energy_experiment(&cfg).unwrap();
    assert!(r.summary.all_monotone, "max ratio {}", r.summary.max_ratio);
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    for key in ["config_echo", "rows", "summary"] {
        assert!(v.get(key).is_some());
    }
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);
    let mut buf = Vec::new();
    r.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.lines().next().unwrap().starts_with("# config:"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 7);
}

#[test]
fn heat_rejects_bad_configs() {
    let g = GridSpec::new(1, 16.0, 256).unwrap();
    let s = SmoothnessIndex::from_ratio(1, 2).unwrap();
    let pv = ExponentVector::from_ints(&[2, 2]).unwrap();
    let cfg = HeatRunConfig::new(g, Field::gaussian(1), s.clone(), pv.clone(), vec![0.2, 0.1]);
    assert!(heat_energy_experiment(&cfg).is_err());
    let mut cfg = HeatRunConfig::new(g, Field::gaussian(1), s, pv, vec![0.1, 0.2]);
    cfg.q = Some(5.0);
    assert!(heat_energy_experiment(&cfg).is_err());
}

#[test]
fn gaussian_probe_error_follows_closed_form() {
    let g = GridSpec::new(1, 16.0, 1024).unwrap();
    let times = geometric_times(1e-1, 1e-4, 7).unwrap();
    let cfg = SchrodingerRunConfig {
        grid: g,
        initial: Field::gaussian(1),
        a: 2.0,
        times: times.clone(),
        epsilon_list: vec![],
        probes: vec![vec![0.0]],
    };
    let r = convergence_experiment(&cfg).unwrap();
    for row in &r.rows[1..] {
        let exact = (0.5 * Complex64::new(0.25, -row.t).powf(-0.5) - 1.0).norm();
        assert!((row.err_f - exact).abs() < 1e-6, "t={}: {} vs {exact}", row.t, row.err_f);
    }
    assert!(r.summary.monotone_trend);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn propagator_laws(c in proptest::collection::vec(-1.0f64..1.0, 3), t1 in 0.0f64..0.5, t2 in 0.0f64..0.5) {
        let g = GridSpec::new(1, 12.0, 256).unwrap();
        let f = SampledField::from_real_fn(g, |x| c.iter().enumerate().map(|(k, a)| a * (-(x[0] - k as f64).powi(2)).exp()).sum());
        let l2 = |h: &SampledField| h.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let u = schrodinger_propagate(&f, t1, 1.5).unwrap();
        prop_assert!((l2(&u) - l2(&f)).abs() <= 1e-12 * (1.0 + l2(&f)));
        let uu = schrodinger_propagate(&u, t2, 1.5).unwrap();
        prop_assert!(uu.sub(&schrodinger_propagate(&f, t1 + t2, 1.5).unwrap()).max_abs() < 1e-12);
        let h = heat_propagate(&f, t1).unwrap();
        prop_assert!(l2(&h) <= l2(&f) * (1.0 + 1e-14));
        prop_assert!(heat_propagate(&h, t2).unwrap().sub(&heat_propagate(&f, t1 + t2).unwrap()).max_abs() < 1e-12);
        let (f1, f2) = lowhigh_split(&f);
        prop_assert!(f1.add(&f2).sub(&f).max_abs() < 1e-14);
    }
}
