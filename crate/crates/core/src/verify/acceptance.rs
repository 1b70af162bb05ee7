use std::f64::consts::PI;

use num_complex::Complex64;

use super::checks::{check_constant_one_inequality, check_sobolev_ratio_dilation, membership_concordance, random_bumps, MembershipCell};
use super::{Check, CheckOutcome};
use crate::error::Result;
use crate::evolution::{
    convergence_experiment, geometric_times, heat_energy_experiment, heat_propagate, lp12_identity_check,
    regularized_propagate, schrodinger_propagate, CutoffShape, HeatRunConfig, SchrodingerRunConfig,
};
use crate::fields::{plaplace_residual, spline_cutoff, Family, Field, GridSpec, SampledField};
use crate::index::exponent::{int, rat};
use crate::index::*;
use crate::norms::{gagliardo_full, hs_seminorm_fourier, QuadratureSpec};

fn guarded(name: &str, tol: f64, body: impl FnOnce(&mut CheckOutcome) -> Result<()>) -> CheckOutcome {
    let mut out = CheckOutcome::new(name, tol);
    match body(&mut out) {
        Ok(()) => out,
        Err(e) => CheckOutcome::from_error(name, e),
    }
}

fn e(n: i64) -> Exponent {
    Exponent::from_int(n).expect("finite")
}

fn er(a: i64, b: i64) -> Exponent {
    Exponent::from_ratio(a, b).expect("finite")
}

fn sm(a: i64, b: i64) -> SmoothnessIndex {
    SmoothnessIndex::from_ratio(a, b).expect("positive")
}

fn pv(entries: &[(i64, i64)]) -> ExponentVector {
    ExponentVector::from_ratios(entries).expect("valid")
}

fn range(v: &EmbeddingVerdict) -> Option<(Rational, Option<Rational>)> {
    v.lq_range.as_ref().map(|r| (r.lo.clone(), r.hi.clone()))
}

fn c01() -> CheckOutcome {
    guarded("c01_index_table", 0.0, |out| {
        let mut cases: Vec<(&str, bool)> = Vec::new();
        cases.push(("conjugate(4,2,1)=4", sobolev_conjugate(4, &e(2), 1)?.finite() == Some(&int(4))));
        cases.push(("conjugate(3,3/2,1)=3", sobolev_conjugate(3, &er(3, 2), 1)?.finite() == Some(&int(3))));
        cases.push(("conjugate(3,2,2) rejected", sobolev_conjugate(3, &e(2), 2).is_err()));
        let v = integer_embedding_verdict(3, 1, &pv(&[(2, 1), (2, 1)]))?;
        cases.push(("integer subcritical [2,6]", v.case == EmbeddingCase::Subcritical && range(&v) == Some((int(2), Some(int(6))))));
        let v = integer_embedding_verdict(2, 1, &pv(&[(4, 1), (2, 1)]))?;
        cases.push(("integer critical [4,inf)", v.case == EmbeddingCase::Critical && range(&v) == Some((int(4), None))));
        let v = integer_embedding_verdict(3, 2, &pv(&[(1, 1), (1, 1), (2, 1)]))?;
        cases.push((
            "integer supercritical C^{0,1/2}",
            v.case == EmbeddingCase::Supercritical
                && v.holder == Some(Holder { n: 0, lambda: rat(1, 2), lambda_open: false }),
        ));
        let c = corollary_chain(4, 1, &pv(&[(10, 1), (2, 1)]))?;
        cases.push(("chain (4,2)", c[0] == pv(&[(4, 1), (2, 1)])));
        let c = corollary_chain(6, 2, &pv(&[(20, 1), (5, 1), (2, 1)]))?;
        cases.push(("chain (6,3,2)", c[0] == pv(&[(6, 1), (3, 1), (2, 1)])));
        let v = fractional_embedding_verdict(2, &sm(1, 2), &e(2), &e(2))?;
        cases.push(("fractional q in [2,4]", range(&v) == Some((int(2), Some(int(4))))));
        let v = fractional_embedding_verdict(1, &sm(3, 4), &e(1), &e(2))?;
        cases.push(("fractional holder 1/4", v.holder.as_ref().map(|h| h.lambda.clone()) == Some(rat(1, 4))));
        let v = fractional_embedding_verdict(2, &sm(1, 2), &e(5), &e(2))?;
        cases.push(("fractional p0>p1 unknown", v.case == EmbeddingCase::Unknown));
        cases.push(("beta(3/2,3/2)=5/4", beta_s(&sm(3, 2), &er(3, 2))? == rat(5, 4)));
        cases.push(("beta(2,3/2)=2", beta_s(&sm(2, 1), &er(3, 2))? == int(2)));
        cases.push(("beta(1/2,2)=1/2", beta_s(&sm(1, 2), &e(2))? == rat(1, 2)));
        let v = schrodinger_criterion(1, &sm(1, 4), &pv(&[(4, 1), (2, 1)]), &int(2))?;
        cases.push(("schrodinger standard", v.verdict == ConvergenceVerdict::ConvergesStandard));
        let v = schrodinger_criterion(1, &sm(1, 1), &pv(&[(4, 1), (2, 1)]), &int(2))?;
        cases.push(("schrodinger principal value", v.verdict == ConvergenceVerdict::ConvergesPrincipalValue));
        let v = schrodinger_criterion(1, &sm(1, 2), &pv(&[(4, 1), (3, 2)]), &int(2))?;
        cases.push(("schrodinger criterion fails -> unknown", v.verdict == ConvergenceVerdict::Unknown));
        cases.push(("decay membership member", example_membership(2, &sm(1, 2), &e(4), &e(2), &rat(4, 5))? == Membership::Member));
        cases.push(("decay membership not member", example_membership(1, &sm(3, 10), &e(20), &e(2), &rat(1, 10))? == Membership::NotMember));
        cases.push((
            "decay membership precondition fail",
            example_membership(2, &sm(1, 2), &e(2), &e(2), &rat(4, 5))? == Membership::PreconditionFail,
        ));
        let bad: Vec<&str> = cases.iter().filter(|c| !c.1).map(|c| c.0).collect();
        out.measure("cases", cases.len() as f64);
        for b in &bad {
            out.note(format!("mismatch: {b}"));
        }
        out.require("mismatches", bad.len() as f64, bad.is_empty());
        Ok(())
    })
}

fn c02() -> CheckOutcome {
    guarded("c02_bootstrap_recursion", 0.0, |out| {
        let inputs: [(usize, Exponent, Exponent); 10] = [
            (3, e(10), er(3, 2)),
            (4, e(100), e(2)),
            (3, e(4), er(3, 2)),
            (5, e(50), e(2)),
            (4, e(8), er(3, 2)),
            (6, e(20), e(3)),
            (3, e(100), er(6, 5)),
            (10, e(1000), e(5)),
            (2, e(100), er(5, 4)),
            (7, e(30), e(2)),
        ];
        let mut bad = 0.0;
        for (i, (n, p0, p1)) in inputs.iter().enumerate() {
            let t = bootstrap_recursion(*n, p0, p1, 400)?;
            let decreasing = std::iter::once(p0.finite().expect("finite").clone())
                .chain(t.steps.iter().map(|s| s.q.clone()))
                .collect::<Vec<_>>()
                .windows(2)
                .all(|w| w[1] < w[0]);
            let p1r = p1.finite().expect("finite");
            let fixed = p1r.recip() == t.fixed_point.recip() + rat(1, *n as i64);
            let conj = sobolev_conjugate(*n, p1, 1)?.finite() == Some(&t.fixed_point);
            if !(decreasing && fixed && conj && t.converged) {
                bad += 1.0;
                out.note(format!("case {i}: decreasing={decreasing} fixed={fixed} conjugate={conj} converged={}", t.converged));
            }
        }
        out.require("failing_cases", bad, bad == 0.0);
        Ok(())
    })
}

fn c03() -> CheckOutcome {
    guarded("c03_heat_gaussian_oracle", 1e-6, |out| {
        let g = GridSpec::new(1, 16.0, 1024)?;
        let u0 = Field::gaussian(1).sampled_on(g)?;
        let mut worst: f64 = 0.0;
        for t in [0.1, 0.5, 1.0] {
            let u = heat_propagate(&u0, t)?;
            let a = 1.0 + 4.0 * t;
            let exact = SampledField::from_real_fn(g, |x| (-x[0] * x[0] / a).exp() / a.sqrt());
            let err = u.sub(&exact).max_abs() / exact.max_abs();
            out.measure(format!("rel_max_error_t{t}"), err);
            worst = worst.max(err);
        }
        out.require("rel_max_error", worst, worst < 1e-6);
        Ok(())
    })
}

fn c04() -> CheckOutcome {
    guarded("c04_heat_monotonicity", 1e-3, |out| {
        let times = geometric_times(1e-3, 1.0, 24)?;
        for (n, grid) in [(1, GridSpec::new(1, 16.0, 512)?), (2, GridSpec::new(2, 12.0, 128)?)] {
            let cfg = HeatRunConfig::new(grid, Field::gaussian(n), sm(3, 2), pv(&[(4, 1), (2, 1), (2, 1)]), times.clone());
            let r = heat_energy_experiment(&cfg)?;
            out.measure(format!("max_ratio_n{n}"), r.summary.max_ratio);
            out.require(
                format!("all_monotone_n{n}"),
                f64::from(u8::from(r.summary.all_monotone)),
                r.summary.all_monotone,
            );
            out.require(
                format!("l2_nonincreasing_n{n}"),
                f64::from(u8::from(r.summary.l2_nonincreasing)),
                r.summary.l2_nonincreasing,
            );
            for w in &r.summary.warnings {
                out.note(format!("N={n}: {w}"));
            }
        }
        Ok(())
    })
}

fn c05() -> CheckOutcome {
    guarded("c05_lp_identity", 1e-6, |out| {
        let f = Field::gaussian(1);
        for (label, p) in [("3/2", er(3, 2)), ("2", e(2)), ("3", e(3))] {
            let r = lp12_identity_check(&f, &p)?;
            out.require(format!("residual_p{label}"), r.residual, r.residual < 1e-6);
            if label == "2" {
                let d = (r.lhs + (PI / 2.0).sqrt()).abs();
                out.require("p2_lhs_error", d, d < 1e-6);
            }
        }
        Ok(())
    })
}

fn c06() -> CheckOutcome {
    guarded("c06_gagliardo_fourier", 2e-2, |out| {
        let g = GridSpec::new(1, 16.0, 2048)?;
        let f = Field::gaussian(1);
        let u = f.sampled_on(g)?;
        for s in [0.25, 0.5, 0.75] {
            let full = gagliardo_full(&f, s, 2.0, &QuadratureSpec::tensor(g))?.value;
            let four = hs_seminorm_fourier(&u, s)?;
            let d = (full / four - 1.0).abs();
            out.require(format!("rel_diff_s{s}"), d, d < 2e-2);
        }
        Ok(())
    })
}

fn c07() -> CheckOutcome {
    let g = match GridSpec::new(2, 8.0, 256) {
        Ok(g) => g,
        Err(e) => return CheckOutcome::from_error("c07_constant_one_inequality", e),
    };
    let mut fields = random_bumps(2, 6, 7);
    for (sigma, c) in [(1.0, [0.0, 0.0]), (0.5, [1.0, -1.0]), (1.5, [0.0, 0.5]), (0.8, [-1.5, 1.0])] {
        fields.push(Field::analytic(2, Family::Gaussian { sigma, center: c.to_vec() }).expect("valid"));
    }
    let main = check_constant_one_inequality("c07", &fields, g, 1.0, 1e-2);
    let control = check_constant_one_inequality("c07_control", &fields, g, 0.5, 1e-2);
    let mut out = CheckOutcome::new("c07_constant_one_inequality", 1e-2);
    out.require("max_ratio", main.measured["max_ratio"], main.passed());
    let cmax = control.measured["max_ratio"];
    // The control must be violated by at least one field.
    out.require("control_max_ratio", cmax, !control.passed());
    if control.passed() {
        out.note("|f(x)| ≤ ½∫|∂_j f| dx_j along each axis, so the 1/(2N) form also holds for every field");
    }
    out
}

fn c08() -> CheckOutcome {
    let cells = [
        MembershipCell::n1(30, 40),
        MembershipCell::n1(40, 30),
        MembershipCell::n1(20, 50),
        MembershipCell::n1(10, 70),
        MembershipCell::n1(10, 30),
        MembershipCell::n1(20, 20),
        MembershipCell::n1(30, 10),
        MembershipCell::n1(15, 25),
    ];
    let mut out = membership_concordance("c08_membership_concordance", &cells, 0.1, &QuadratureSpec::adaptive(40));
    out.name = "c08_membership_concordance".into();
    let skipped = out.measured.get("skipped").copied().unwrap_or(0.0);
    out.require("skipped_cells", skipped, skipped == 0.0);
    out
}

fn band_limited(g: GridSpec) -> Result<SampledField> {
    let d = Field::gaussian(1).sampled_on(g)?.dft();
    Ok(SampledField::multiplier_from_dft(g, &d, |w| {
        Complex64::new(spline_cutoff(2.0 * w[0].abs()), 0.0)
    }))
}

fn c09() -> CheckOutcome {
    guarded("c09_schrodinger", 1e-3, |out| {
        let g = GridSpec::new(1, 16.0, 1024)?;
        let cfg = SchrodingerRunConfig {
            grid: g,
            initial: Field::Sampled(band_limited(g)?),
            a: 2.0,
            times: geometric_times(1e-1, 1e-4, 13)?,
            epsilon_list: vec![],
            probes: vec![vec![0.0], vec![0.75], vec![-2.5], vec![4.0]],
        };
        let r = convergence_experiment(&cfg)?;
        out.require("max_mass_drift", r.summary.max_mass_drift, r.summary.max_mass_drift < 1e-12);
        out.require("final_error", r.summary.final_error, r.summary.final_error < 1e-3);
        out.require("monotone_trend", f64::from(u8::from(r.summary.monotone_trend)), r.summary.monotone_trend);
        let u = schrodinger_propagate(&Field::gaussian(1).sampled_on(g)?, 0.25, 2.0)?;
        let exact = 0.5 * (1.0f64 / 16.0 + 1.0 / 16.0).powf(-0.25);
        let d = (u.eval(&[0.0])?.norm() - exact).abs();
        out.require("gaussian_modulus_error", d, d < 1e-5);
        Ok(())
    })
}

fn c10() -> CheckOutcome {
    guarded("c10_regularized_limit", 1e-6, |out| {
        let g = GridSpec::new(1, 16.0, 1024)?;
        let f = Field::gaussian(1).sampled_on(g)?;
        let t = 0.1;
        let eps: Vec<f64> = (1..=5).map(|k| 0.1 * 0.5f64.powi(k)).collect();
        let sweep = |shape| -> Result<Vec<SampledField>> { eps.iter().map(|&e| regularized_propagate(&f, t, e, shape)).collect() };
        let spline = sweep(CutoffShape::Spline)?;
        let alt = sweep(CutoffShape::Alt)?;
        let cauchy = spline.windows(2).map(|w| w[1].sub(&w[0]).max_abs()).fold(0.0, f64::max);
        out.require("max_cauchy_difference", cauchy, cauchy < 1e-6);
        let gap = spline.last().unwrap().sub(alt.last().unwrap()).max_abs();
        out.require("shape_gap", gap, gap < 1e-6);
        out.measure("dual_spacing", g.dual_spacing());
        if 2.0 * eps[0] < g.dual_spacing() {
            out.note("every ε in the sweep lies below half the dual spacing: the discrete multipliers coincide");
        }
        Ok(())
    })
}

fn c11() -> CheckOutcome {
    let g = match GridSpec::new(2, 12.0, 256) {
        Ok(g) => g,
        Err(e) => return CheckOutcome::from_error("c11_sobolev_dilation", e),
    };
    let p1 = er(3, 2);
    let f = Field::gaussian(2);
    let inv = check_sobolev_ratio_dilation("c11", &f, &p1, None, g);
    let ctl = check_sobolev_ratio_dilation("c11_control", &f, &p1, Some(2.0), g);
    let mut out = CheckOutcome::new("c11_sobolev_dilation", 1e-2);
    out.require("variation_at_q_star", inv.measured.get("variation").copied().unwrap_or(f64::NAN), inv.passed());
    out.require("control_variation_q2", ctl.measured.get("variation").copied().unwrap_or(f64::NAN), ctl.passed());
    out
}

fn c12() -> CheckOutcome {
    guarded("c12_plaplace_bubble", 1e-4, |out| {
        let fam = Family::PLaplaceBubble { lambda: 1.0, x0: vec![0.0; 4], p: 2.0 };
        let u = Field::analytic(4, fam)?;
        let a = u.as_analytic().expect("analytic").clone();
        let perturbed = Field::Analytic(a.scale(Complex64::new(1.1, 0.0)));
        let points: Vec<Vec<f64>> = (0..10)
            .map(|k| {
                let r = 0.15 * k as f64;
                let th = 0.7 * k as f64;
                vec![r * th.cos(), r * th.sin(), 0.3 * r, -0.2 * r]
            })
            .collect();
        let mut worst: f64 = 0.0;
        let mut control: f64 = 0.0;
        for x in &points {
            worst = worst.max(plaplace_residual(&u, 2.0, x, 1e-2)?);
            control = control.max(plaplace_residual(&perturbed, 2.0, x, 1e-2)?);
        }
        out.require("max_residual", worst, worst < 1e-4);
        out.require("control_residual", control, control > 0.1);
        Ok(())
    })
}

pub fn acceptance_checks() -> Vec<Check> {
    vec![
        Check { name: "c01_index_table", description: "20 exact index-calculus cases", run: c01 },
        Check { name: "c02_bootstrap_recursion", description: "bootstrap recursion on 10 inputs", run: c02 },
        Check { name: "c03_heat_gaussian_oracle", description: "heat flow of a Gaussian vs closed form", run: c03 },
        Check { name: "c04_heat_monotonicity", description: "derivative norms non-increasing along the heat flow", run: c04 },
        Check { name: "c05_lp_identity", description: "integration-by-parts identity with |f|^{p-2}", run: c05 },
        Check { name: "c06_gagliardo_fourier", description: "Gagliardo double integral vs Fourier side", run: c06 },
        Check { name: "c07_constant_one_inequality", description: "constant-1/N inequality and its 1/(2N) control", run: c07 },
        Check { name: "c08_membership_concordance", description: "8-cell membership grid", run: c08 },
        Check { name: "c09_schrodinger", description: "mass conservation and t→0 convergence", run: c09 },
        Check { name: "c10_regularized_limit", description: "ε→0 stability of the regularized propagator", run: c10 },
        Check { name: "c11_sobolev_dilation", description: "dilation invariance at the conjugate exponent", run: c11 },
        Check { name: "c12_plaplace_bubble", description: "critical p-Laplace bubble residual", run: c12 },
    ]
}
