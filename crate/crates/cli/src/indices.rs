use std::fmt::Write as _;

use anyhow::{bail, Result};
use clap::Subcommand;
use nusob_core::index::exponent::to_f64;
use nusob_core::index::{
    self, beta_s, bootstrap_recursion, example_membership, fmt_rational, fractional_density_criterion,
    fractional_embedding_verdict, heat_estimate_params, integer_embedding_verdict, membership_margin, parse_rational,
    schrodinger_criterion, sobolev_conjugate, special_density_criterion, EmbeddingVerdict, Holder, LqRange, Trace,
};
use nusob_core::{Exponent, ExponentVector, Rational, SmoothnessIndex};
use serde_json::{json, Value};

use crate::output::Context;
use crate::Format;

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Subcommand, Debug)]
pub enum IndicesCmd {
    /// Sobolev conjugate Np/(N − kp).
    Conjugate {
        #[arg(short = 'N', long = "N")]
        n: usize,
        #[arg(short, long)]
        p: Exponent,
        #[arg(short, long, default_value_t = 1)]
        k: usize,
    },
    /// Integer-order embedding of W_k^{p⃗}.
    Embed {
        #[arg(short = 'N', long = "N")]
        n: usize,
        /// Defaults to len(p) − 1.
        #[arg(short, long)]
        k: Option<usize>,
        #[arg(short, long)]
        p: ExponentVector,
    },
    /// Fractional embedding of W_s^{(p0,p1)}, 0 < s < 1.
    EmbedFrac {
        #[arg(short = 'N', long = "N")]
        n: usize,
        #[arg(short, long)]
        s: SmoothnessIndex,
        /// p0,p1
        #[arg(short, long)]
        p: ExponentVector,
    },
    /// Chain criterion for density of test functions in W_k^{p⃗}.
    Density {
        #[arg(short = 'N', long = "N")]
        n: usize,
        #[arg(short, long)]
        k: Option<usize>,
        #[arg(short, long)]
        p: ExponentVector,
    },
    /// Density criterion s/N ≥ 1/p1 − 1/p0 for W_s^{(p0,p1)}.
    DensityFrac {
        #[arg(short = 'N', long = "N")]
        n: usize,
        #[arg(short, long)]
        s: SmoothnessIndex,
        #[arg(short, long)]
        p: ExponentVector,
    },
    /// Bootstrap exponent recursion from q0 = p0.
    Recursion {
        #[arg(short = 'N', long = "N")]
        n: usize,
        /// p0,p1
        #[arg(short, long)]
        p: ExponentVector,
        #[arg(long, default_value_t = 200)]
        max_steps: usize,
    },
    /// Fourier decay weight β_s.
    Beta {
        #[arg(short, long)]
        s: SmoothnessIndex,
        /// p_⌈s⌉
        #[arg(short, long)]
        p: Exponent,
    },
    /// Pointwise convergence criterion for the fractional Schrödinger group.
    SchrodingerCriterion {
        #[arg(short = 'N', long = "N")]
        n: usize,
        #[arg(short, long)]
        s: SmoothnessIndex,
        /// p⃗ with ⌈s⌉+1 entries
        #[arg(short, long)]
        p: ExponentVector,
        #[arg(short, long, value_parser = rational, default_value = "2")]
        a: Rational,
    },
    /// Membership of (1+|x|²)^{−δ/2} in W_s^{(p0,p1)}.
    Membership {
        #[arg(short = 'N', long = "N")]
        n: usize,
        #[arg(short, long)]
        s: SmoothnessIndex,
        #[arg(short, long)]
        p: ExponentVector,
        #[arg(long, value_parser = rational)]
        delta: Rational,
    },
    /// Exponents of the weighted heat-flow estimates.
    HeatParams {
        #[arg(short = 'N', long = "N")]
        n: usize,
        #[arg(short, long)]
        s: SmoothnessIndex,
        #[arg(short, long)]
        p: ExponentVector,
    },
}

impl IndicesCmd {
    pub fn name(&self) -> &'static str {
        match self {
            IndicesCmd::Conjugate { .. } => "conjugate",
            IndicesCmd::Embed { .. } => "embed",
            IndicesCmd::EmbedFrac { .. } => "embed-frac",
            IndicesCmd::Density { .. } => "density",
            IndicesCmd::DensityFrac { .. } => "density-frac",
            IndicesCmd::Recursion { .. } => "recursion",
            IndicesCmd::Beta { .. } => "beta",
            IndicesCmd::SchrodingerCriterion { .. } => "schrodinger-criterion",
            IndicesCmd::Membership { .. } => "membership",
            IndicesCmd::HeatParams { .. } => "heat-params",
        }
    }
}

/// `"5/4 (1.25)"`; integers print bare.
fn exact(r: &Rational) -> String {
    if r.is_integer() {
        fmt_rational(r)
    } else {
        format!("{} ({})", fmt_rational(r), to_f64(r))
    }
}

fn exact_json(r: &Rational) -> Value {
    json!({ "exact": fmt_rational(r), "decimal": to_f64(r) })
}

fn range_text(r: &LqRange) -> String {
    match &r.hi {
        Some(h) => format!("q∈[{},{}]", fmt_rational(&r.lo), fmt_rational(h)),
        None => format!("q∈[{},∞)", fmt_rational(&r.lo)),
    }
}

fn holder_text(h: &Holder) -> String {
    let rel = if h.lambda_open { "<" } else { "" };
    format!("C^{{{},{rel}{}}}", h.n, exact(&h.lambda))
}

fn trace_text(t: &Trace) -> String {
    t.entries()
        .iter()
        .map(|e| format!("  [{}] {}\n", if e.holds { "x" } else { " " }, e.criterion))
        .collect()
}

fn two(p: &ExponentVector) -> Result<(&Exponent, &Exponent)> {
    if p.len() != 2 {
        bail!("--p: expected two exponents p0,p1, got {}", p.len());
    }
    Ok((p.get(0), p.get(1)))
}

fn k_of(k: Option<usize>, p: &ExponentVector) -> usize {
    k.unwrap_or(p.len().saturating_sub(1))
}

fn embedding_text(v: &EmbeddingVerdict) -> String {
    let mut s = format!("{:?}", v.case).to_lowercase();
    if let Some(r) = &v.lq_range {
        write!(s, " {}", range_text(r)).unwrap();
    }
    if let Some(h) = &v.holder {
        write!(s, " ↪ {}", holder_text(h)).unwrap();
    }
    if let Some(h) = &v.corollary_holder {
        write!(s, " (also {})", holder_text(h)).unwrap();
    }
    s.push('\n');
    if let Some(LqRange { lo, hi: Some(hi) }) = &v.lq_range {
        if !lo.is_integer() || !hi.is_integer() {
            writeln!(s, "decimal: q∈[{}, {}]", to_f64(lo), to_f64(hi)).unwrap();
        }
    }
    s
}

/// Runs one subcommand; returns `(text, json)` renderings of the result.
fn evaluate(cmd: &IndicesCmd) -> Result<(String, Value)> {
    Ok(match cmd {
        IndicesCmd::Conjugate { n, p, k } => {
            let q = sobolev_conjugate(*n, p, *k)?;
            let r = q.finite().expect("conjugate is finite");
            (
                format!("{}\n", exact(r)),
                json!({ "input": { "N": n, "p": p, "k": k }, "conjugate": exact_json(r) }),
            )
        }
        IndicesCmd::Embed { n, k, p } => {
            let k = k_of(*k, p);
            let v = integer_embedding_verdict(*n, k, p)?;
            let chain = index::corollary_chain(*n, k, p).ok();
            (
                embedding_text(&v) + &trace_text(&v.trace),
                json!({ "input": { "N": n, "k": k, "p": p }, "verdict": v, "chain": chain }),
            )
        }
        IndicesCmd::EmbedFrac { n, s, p } => {
            let (p0, p1) = two(p)?;
            let v = fractional_embedding_verdict(*n, s, p0, p1)?;
            (
                embedding_text(&v) + &trace_text(&v.trace),
                json!({ "input": { "N": n, "s": s, "p": p }, "verdict": v }),
            )
        }
        IndicesCmd::Density { n, k, p } => {
            let k = k_of(*k, p);
            let v = special_density_criterion(*n, k, p)?;
            let text = format!(
                "dense: {}\nspecial criterion: {}\n{}",
                v.dense,
                if v.special_criterion { "holds" } else { "fails" },
                trace_text(&v.trace)
            );
            (text, json!({ "input": { "N": n, "k": k, "p": p }, "verdict": v }))
        }
        IndicesCmd::DensityFrac { n, s, p } => {
            let (p0, p1) = two(p)?;
            let holds = fractional_density_criterion(*n, s, p0, p1)?;
            (
                format!("s/N ≥ 1/p1 − 1/p0: {}\n", if holds { "holds" } else { "fails" }),
                json!({ "input": { "N": n, "s": s, "p": p }, "criterion": holds }),
            )
        }
        IndicesCmd::Recursion { n, p, max_steps } => {
            let (p0, p1) = two(p)?;
            let t = bootstrap_recursion(*n, p0, p1, *max_steps)?;
            let mut text = String::new();
            for (i, st) in t.steps.iter().enumerate() {
                writeln!(text, "{:>4}  r = {}  q = {}", i + 1, exact(&st.r), exact(&st.q)).unwrap();
            }
            writeln!(text, "fixed point {}; converged: {}", exact(&t.fixed_point), t.converged).unwrap();
            (text, json!({ "input": { "N": n, "p": p, "max_steps": max_steps }, "trace": t }))
        }
        IndicesCmd::Beta { s, p } => {
            let b = beta_s(s, p)?;
            (format!("{}\n", exact(&b)), json!({ "input": { "s": s, "p": p }, "beta": exact_json(&b) }))
        }
        IndicesCmd::SchrodingerCriterion { n, s, p, a } => {
            let v = schrodinger_criterion(*n, s, p, a)?;
            (
                format!("{:?}\n{}", v.verdict, trace_text(&v.trace)),
                json!({ "input": { "N": n, "s": s, "p": p, "a": fmt_rational(a) }, "verdict": v }),
            )
        }
        IndicesCmd::Membership { n, s, p, delta } => {
            let (p0, p1) = two(p)?;
            let m = example_membership(*n, s, p0, p1, delta)?;
            let margin = p1.finite().map(|p1| membership_margin(*n, s, p1, delta));
            let mut text = format!("{m:?}\n");
            if let Some(mg) = &margin {
                writeln!(text, "p1(δ+s) − N = {}", exact(mg)).unwrap();
            }
            (
                text,
                json!({
                    "input": { "N": n, "s": s, "p": p, "delta": fmt_rational(delta) },
                    "membership": m,
                    "margin": margin.as_ref().map(exact_json),
                }),
            )
        }
        IndicesCmd::HeatParams { n, s, p } => {
            let h = heat_estimate_params(*n, s, p)?;
            let text = format!(
                "p_s = {}\nsigma = {}\nvarrho = {}\nr = {}\nq_sup = {}\nweighted estimates applicable: {}\n",
                exact(&h.p_s),
                exact(&h.sigma),
                exact(&h.varrho),
                h.r_vec,
                exact(&h.q_sup()),
                h.weighted_applicable
            );
            (text, json!({ "input": { "N": n, "s": s, "p": p }, "params": h }))
        }
    })
}

pub fn run(cmd: &IndicesCmd, ctx: &Context) -> Result<u8> {
    let (text, value) = evaluate(cmd)?;
    match ctx.format(Format::Text) {
        Format::Text => ctx.emit(&text)?,
        Format::Json => ctx.emit(&ctx.json(json!({ "command": cmd.name(), "result": value })))?,
        Format::Csv => bail!("--format csv is not available for indices (use text or json)"),
    }
    Ok(0)
}
