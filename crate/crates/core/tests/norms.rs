use std::f64::consts::PI;

use nusob_core::fields::{Family, Field, GridSpec, SampledField};
use nusob_core::norms::*;
use nusob_core::quad::{integrate, integrate_log, Tolerance};
use nusob_core::{Exponent, SmoothnessIndex};
use num_complex::Complex64;
use proptest::prelude::*;

/// `K_ν(x) = ∫_0^∞ e^{−x cosh t} cosh(νt) dt`.
fn bessel_k(nu: f64, x: f64) -> f64 {
    let end = (60.0 / x).max(1.0).acosh() + 1.0;
    integrate(|t| (-x * t.cosh()).exp() * (nu * t).cosh(), 0.0, end, Tolerance::new(0.0, 1e-12)).value
}

/// Fourier transform of `(1+x²)^{−δ/2}`: `2√π (|ω|/2)^ν K_ν(|ω|) / Γ(δ/2)`, `ν = (δ−1)/2`.
fn rational_hat(delta: f64, w: f64) -> f64 {
    let nu = (delta - 1.0) / 2.0;
    2.0 * PI.sqrt() * (w / 2.0).powf(nu) * bessel_k(nu, w) / statrs::function::gamma::gamma(delta / 2.0)
}

#[test]
fn heavy_tail_seminorm_matches_bessel_oracle() {
    // [f]² = C⁻¹ (2π)⁻¹ ∫ |ω|^{2s} |f̂|², a Fourier-side quantity computed from the closed-form transform.
    for (delta, s) in [(0.3, 0.4), (0.6, 0.5)] {
        let f = Field::analytic(1, Family::RationalDecay { delta }).unwrap();
        let est = gagliardo_full(&f, s, 2.0, &QuadratureSpec::adaptive(48)).unwrap();
        let spectral = integrate_log(
            |w| w.powf(2.0 * s) * rational_hat(delta, w).powi(2),
            1e-14,
            80.0,
            Tolerance::new(0.0, 1e-10),
        )
        .value;
        let oracle = (hs_constant_inverse_closed(1, s) / PI * spectral).sqrt();
        assert_eq!(est.classification, Classification::Converged);
        assert!((est.value / oracle - 1.0).abs() < 2e-3, "δ={delta} s={s}: {} vs {oracle}", est.value);
    }
}

#[test]
fn membership_cells_classify() {
    // (δ, s) with p₁ = 2, N = 1: finite iff 2(δ + s) > 1.
    let cells = [
        (0.3, 0.4, true),
        (0.4, 0.3, true),
        (0.2, 0.5, true),
        (0.1, 0.7, true),
        (0.1, 0.3, false),
        (0.2, 0.2, false),
        (0.3, 0.1, false),
    ];
    for (delta, s, finite) in cells {
        let f = Field::analytic(1, Family::RationalDecay { delta }).unwrap();
        let est = gagliardo_full(&f, s, 2.0, &QuadratureSpec::adaptive(40)).unwrap();
        let want = if finite { Classification::Converged } else { Classification::Diverging };
        assert_eq!(est.classification, want, "δ={delta} s={s}");
        assert!(est.level_values().windows(2).all(|w| w[1] >= w[0]));
    }
}

#[test]
fn directional_ratio_is_grid_stable_in_two_dimensions() {
    let f = Field::gaussian(2);
    let ratio = |n: usize| {
        let g = GridSpec::new(2, 8.0, n).unwrap();
        let full = gagliardo_full(&f, 0.5, 2.0, &QuadratureSpec::monte_carlo(g, 10_000, 3)).unwrap();
        let dir = gagliardo_directional(&f, 0.5, 2.0, &QuadratureSpec::tensor(g)).unwrap();
        full.value / dir.value
    };
    let (a, b) = (ratio(32), ratio(64));
    assert!((a / b - 1.0).abs() < 0.05, "{a} {b}");
}

#[test]
fn estimate_json_shape() {
    let g = GridSpec::new(1, 8.0, 256).unwrap();
    let e = gagliardo_full(&Field::gaussian(1), 0.5, 2.0, &QuadratureSpec::tensor(g)).unwrap();
    let v: serde_json::Value = serde_json::from_str(&e.to_json()).unwrap();
    for key in ["value", "stderr", "classification", "levels", "thresholds"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert!(v["levels"].as_array().unwrap().iter().all(|l| l["R"].is_number() && l["value"].is_number()));
}

#[test]
fn nonuniform_divergence_propagates() {
    let f = Field::analytic(1, Family::RationalDecay { delta: 0.1 }).unwrap();
    let s = SmoothnessIndex::from_ratio(3, 10).unwrap();
    let pv = "20,2".parse().unwrap();
    let r = nonuniform_norm(&f, &s, &pv, &QuadratureSpec::adaptive(40)).unwrap();
    assert_eq!(r.classification, Classification::Diverging);
}

fn random_field(g: GridSpec, c: &[f64]) -> SampledField {
    SampledField::from_real_fn(g, |x| {
        c.iter()
            .enumerate()
            .map(|(k, a)| a * (-(x[0] - k as f64 + 1.5).powi(2) * (1.0 + k as f64 * 0.5)).exp())
            .sum()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lp_triangle_and_homogeneity(
        a in proptest::collection::vec(-2.0f64..2.0, 4),
        b in proptest::collection::vec(-2.0f64..2.0, 4),
        c in -5.0f64..5.0,
        p in 1.0f64..6.0,
    ) {
        let g = GridSpec::new(1, 8.0, 128).unwrap();
        let q = QuadratureSpec::tensor(g);
        let e = Exponent::new(nusob_core::index::exponent::rat((p * 64.0).round() as i64, 64)).unwrap();
        let (f, h) = (random_field(g, &a), random_field(g, &b));
        let nf = lp_norm(&Field::Sampled(f.clone()), &e, &q).unwrap().value;
        let nh = lp_norm(&Field::Sampled(h.clone()), &e, &q).unwrap().value;
        let sum = lp_norm(&Field::Sampled(f.add(&h)), &e, &q).unwrap().value;
        prop_assert!(sum <= nf + nh + 1e-10);
        let scaled = lp_norm(&Field::Sampled(f.scale(Complex64::new(c, 0.0))), &e, &q).unwrap().value;
        prop_assert!((scaled - c.abs() * nf).abs() <= 1e-12 * (1.0 + scaled));
    }

    #[test]
    fn seminorms_are_homogeneous_and_translation_invariant(
        a in proptest::collection::vec(-2.0f64..2.0, 4),
        c in 0.1f64..5.0,
        shift in -20i64..20,
        s in 0.1f64..0.9,
    ) {
        let g = GridSpec::new(1, 8.0, 128).unwrap();
        let q = QuadratureSpec::tensor(g);
        let f = random_field(g, &a);
        let base = gagliardo_full(&Field::Sampled(f.clone()), s, 2.0, &q).unwrap();
        let scaled = gagliardo_full(&Field::Sampled(f.scale(Complex64::new(-c, 0.0))), s, 2.0, &q).unwrap();
        prop_assert!((scaled.value - c * base.value).abs() <= 1e-12 * (1.0 + scaled.value));
        let moved = gagliardo_full(&Field::Sampled(f.roll(&[shift])), s, 2.0, &q).unwrap();
        prop_assert!((moved.value - base.value).abs() < 1e-10 * (1.0 + base.value));
        let dir = gagliardo_directional(&Field::Sampled(f.clone()), s, 2.0, &q).unwrap();
        let dir_moved = gagliardo_directional(&Field::Sampled(f.roll(&[shift])), s, 2.0, &q).unwrap();
        prop_assert!((dir.value - dir_moved.value).abs() < 1e-10 * (1.0 + dir.value));
        prop_assert!(base.level_values().windows(2).all(|w| w[1] >= w[0]));
    }
}
