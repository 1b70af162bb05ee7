use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Context as _, Result};
use clap::{Args, Subcommand, ValueEnum};
use nusob_core::evolution::{
    convergence_experiment, geometric_times, heat_energy_experiment, HeatRunConfig, SchrodingerRunConfig,
};
use nusob_core::fields::{io::read_binary, Family, Field, GridSpec};
use nusob_core::index::exponent::to_f64;
use nusob_core::index::parse_rational;
use nusob_core::norms::{
    gagliardo_full, hs_seminorm_fourier, lp_norm, nonuniform_norm, weighted_fourier_norm, QuadratureSpec, Scheme,
    SeminormEstimate,
};
use nusob_core::verify::{run_suite, CheckStatus, Suite, SuiteConfig};
use nusob_core::{Exponent, ExponentVector, Rational, SmoothnessIndex};
use serde_json::{json, Value};

use crate::output::Context;
use crate::Format;

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Decimal or `a/b`, read exactly and then rounded once.
fn real(s: &str) -> Result<f64, String> {
    rational(s).map(|r| to_f64(&r))
}

/// A time schedule: `geom:start:end:count` or a comma-separated list.
#[derive(Clone, Debug)]
pub struct Times(pub Vec<f64>);

fn times(s: &str) -> Result<Times, String> {
    if let Some(rest) = s.strip_prefix("geom:") {
        let parts: Vec<&str> = rest.split(':').collect();
        let [a, b, c] = parts[..] else {
            return Err("expected geom:start:end:count".into());
        };
        let count: usize = c.parse().map_err(|_| format!("bad count {c:?}"))?;
        return geometric_times(real(a)?, real(b)?, count).map(Times).map_err(|e| e.to_string());
    }
    s.split(',').map(|t| real(t.trim())).collect::<Result<Vec<_>, _>>().map(Times)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Gaussian,
    RationalDecay,
    SmoothBump,
    PLaplaceBubble,
    FourierBump,
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// Closed-form family (ignored with --input).
    #[arg(long, alias = "initial", value_enum, default_value_t = FamilyName::Gaussian)]
    pub family: FamilyName,
    #[arg(short = 'N', long = "N", default_value_t = 1)]
    pub dim: usize,
    /// Decay exponent of rational-decay.
    #[arg(long, value_parser = real)]
    pub delta: Option<f64>,
    /// Width of gaussian.
    #[arg(long, value_parser = real, default_value = "1")]
    pub sigma: f64,
    /// Support radius of smooth-bump.
    #[arg(long, value_parser = real, default_value = "2")]
    pub radius: f64,
    /// Scale of p-laplace-bubble.
    #[arg(long, value_parser = real, default_value = "1")]
    pub lambda: f64,
    /// Exponent of p-laplace-bubble.
    #[arg(long = "bubble-p", value_parser = real, default_value = "2")]
    pub bubble_p: f64,
    /// Sampled field in the binary container format; fixes the grid.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

impl FieldArgs {
    pub fn build(&self) -> Result<Field> {
        if let Some(p) = &self.input {
            let f = std::fs::File::open(p).with_context(|| format!("--input: cannot open {}", p.display()))?;
            let s = read_binary(std::io::BufReader::new(f)).with_context(|| format!("--input: {}", p.display()))?;
            return Ok(Field::Sampled(s));
        }
        let n = self.dim;
        let family = match self.family {
            FamilyName::Gaussian => Family::Gaussian { sigma: self.sigma, center: vec![0.0; n] },
            FamilyName::RationalDecay => Family::RationalDecay {
                delta: self.delta.context("--delta is required for rational-decay")?,
            },
            FamilyName::SmoothBump => Family::SmoothBump { radius: self.radius },
            FamilyName::PLaplaceBubble => Family::PLaplaceBubble {
                lambda: self.lambda,
                x0: vec![0.0; n],
                p: self.bubble_p,
            },
            FamilyName::FourierBump => Family::FourierBump,
        };
        Ok(Field::analytic(n, family)?)
    }
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    /// Half-width of the box [−L, L]^N.
    #[arg(long = "L", value_parser = real)]
    pub half_width: Option<f64>,
    /// Points per axis (power of two).
    #[arg(short = 'n', long = "n")]
    pub points: Option<usize>,
}

impl GridArgs {
    /// A sampled field dictates its own grid; otherwise defaults depend on `N`.
    fn resolve(&self, f: &Field) -> Result<GridSpec> {
        if let Field::Sampled(s) = f {
            return Ok(s.grid);
        }
        let (l, n) = match f.dim() {
            1 => (16.0, 1024),
            2 => (12.0, 128),
            _ => (8.0, 32),
        };
        Ok(GridSpec::new(
            f.dim(),
            self.half_width.unwrap_or(l),
            self.points.unwrap_or(n),
        )?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SchemeName {
    Tensor,
    MonteCarlo,
    Adaptive,
}

#[derive(Args, Debug, Clone)]
pub struct QuadArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    /// Defaults to adaptive for closed-form fields in N = 1, tensor for other
    /// N = 1 fields, monte-carlo otherwise.
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeName>,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Largest truncation radius 2^k of the adaptive scheme.
    #[arg(long, default_value_t = 40)]
    pub max_pow: i32,
}

impl QuadArgs {
    fn build(&self, f: &Field, seed: u64) -> Result<QuadratureSpec> {
        let grid = self.grid.resolve(f)?;
        let scheme = self.scheme.unwrap_or(match (f.dim(), f) {
            (1, Field::Analytic(_)) => SchemeName::Adaptive,
            (1, _) => SchemeName::Tensor,
            _ => SchemeName::MonteCarlo,
        });
        Ok(match scheme {
            SchemeName::Tensor => QuadratureSpec::tensor(grid),
            SchemeName::MonteCarlo => QuadratureSpec::monte_carlo(grid, self.samples, seed),
            SchemeName::Adaptive => QuadratureSpec { grid, ..QuadratureSpec::adaptive(self.max_pow) },
        })
    }
}

#[derive(Subcommand, Debug)]
pub enum NormCmd {
    /// ‖f‖_p.
    Lp {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(short, long)]
        p: Exponent,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Gagliardo seminorm [f]_{s,p}, 0 < s < 1.
    Gagliardo {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(short, long)]
        s: SmoothnessIndex,
        #[arg(short, long)]
        p: Exponent,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// [f]_{s,2} from the spectrum, or with --beta the weighted norm ‖|ω|^β f̂‖_{p}.
    Fourier {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(short, long)]
        s: Option<SmoothnessIndex>,
        #[arg(long, value_parser = rational)]
        beta: Option<Rational>,
        /// Dual exponent p′ of the weighted norm.
        #[arg(short, long, default_value = "2")]
        p: Exponent,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Full nonuniform norm ‖f‖_{W_s^{p⃗}}.
    Nonuniform {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(short, long)]
        s: SmoothnessIndex,
        #[arg(short, long)]
        p: ExponentVector,
        #[command(flatten)]
        quad: QuadArgs,
    },
}

impl NormCmd {
    pub fn name(&self) -> &'static str {
        match self {
            NormCmd::Lp { .. } => "lp",
            NormCmd::Gagliardo { .. } => "gagliardo",
            NormCmd::Fourier { .. } => "fourier",
            NormCmd::Nonuniform { .. } => "nonuniform",
        }
    }
}

fn scheme_name(s: Scheme) -> &'static str {
    match s {
        Scheme::Tensor => "tensor",
        Scheme::MonteCarlo => "monte-carlo",
        Scheme::Adaptive => "adaptive",
    }
}

fn levels_csv(ctx: &Context, est: &SeminormEstimate) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["R", "level"])?;
    for l in &est.levels {
        w.write_record([format!("{:e}", l.r), format!("{:e}", l.value)])?;
    }
    let body = String::from_utf8(w.into_inner()?)?;
    Ok(format!(
        "{}# value = {:e}, classification = {:?}\n{body}",
        ctx.csv_header(),
        est.value,
        est.classification
    ))
}

pub fn norm(cmd: &NormCmd, ctx: &Context) -> Result<u8> {
    let (field, quad_args) = match cmd {
        NormCmd::Lp { field, quad, .. }
        | NormCmd::Gagliardo { field, quad, .. }
        | NormCmd::Fourier { field, quad, .. }
        | NormCmd::Nonuniform { field, quad, .. } => (field, quad),
    };
    let f = field.build()?;
    let quad = quad_args.build(&f, ctx.seed)?;
    let echo = json!({ "scheme": scheme_name(quad.scheme), "grid": quad.grid.to_string() });
    let (result, estimate): (Value, Option<SeminormEstimate>) = match cmd {
        NormCmd::Lp { p, .. } => {
            let e = lp_norm(&f, p, &quad)?;
            (serde_json::to_value(&e)?, Some(e))
        }
        NormCmd::Gagliardo { s, p, .. } => {
            let e = gagliardo_full(&f, s.to_f64(), p.to_f64(), &quad)?;
            (serde_json::to_value(&e)?, Some(e))
        }
        NormCmd::Fourier { s, beta, p, .. } => match (beta, s) {
            (Some(b), _) => {
                let e = weighted_fourier_norm(&f, b, p, &quad)?;
                (serde_json::to_value(&e)?, Some(e))
            }
            (None, Some(s)) => {
                let v = hs_seminorm_fourier(&f.sampled_on(quad.grid)?, s.to_f64())?;
                (json!({ "value": v }), None)
            }
            (None, None) => bail!("fourier needs --s (H^s seminorm) or --beta (weighted norm)"),
        },
        NormCmd::Nonuniform { s, p, .. } => (serde_json::to_value(nonuniform_norm(&f, s, p, &quad)?)?, None),
    };
    match ctx.format(Format::Json) {
        Format::Json => ctx.emit(&ctx.json(json!({ "command": cmd.name(), "quadrature": echo, "result": result })))?,
        Format::Csv => match &estimate {
            Some(e) => ctx.emit(&levels_csv(ctx, e)?)?,
            None => bail!("--format csv needs a leveled estimate; use json for this norm"),
        },
        Format::Text => {
            let v = result.get("value").cloned().unwrap_or(Value::Null);
            let cls = result.get("classification").and_then(|c| c.as_str()).unwrap_or("-");
            ctx.emit(&format!("{v} {cls}\n"))?
        }
    }
    Ok(0)
}

#[derive(Args, Debug)]
pub struct HeatArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(short, long)]
    pub s: SmoothnessIndex,
    /// p⃗ with ⌈s⌉+1 entries.
    #[arg(short, long)]
    pub p: ExponentVector,
    /// `geom:start:end:count` or a comma-separated increasing list.
    #[arg(long, value_parser = times)]
    pub times: Times,
    /// Horizons T of the time integrals (default: the last time).
    #[arg(long, value_delimiter = ',', value_parser = real)]
    pub t_list: Vec<f64>,
    /// Time-integrability exponent of the q-power integral.
    #[arg(long, value_parser = real)]
    pub q: Option<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
}

pub fn heat(a: &HeatArgs, ctx: &Context) -> Result<u8> {
    let f = a.field.build()?;
    let grid = a.grid.resolve(&f)?;
    let mut cfg = HeatRunConfig::new(grid, f, a.s.clone(), a.p.clone(), a.times.0.clone());
    if !a.t_list.is_empty() {
        cfg.t_list = a.t_list.clone();
    }
    cfg.q = a.q;
    if grid.dim > 1 {
        cfg.quad = QuadratureSpec::monte_carlo(grid, a.samples, ctx.seed);
    }
    let r = heat_energy_experiment(&cfg)?;
    for w in &r.summary.warnings {
        eprintln!("warning: {w}");
    }
    match ctx.format(Format::Csv) {
        Format::Json => {
            let v: Value = serde_json::from_str(&r.to_json())?;
            ctx.emit(&ctx.json(v))?
        }
        _ => {
            let mut buf = ctx.csv_header().into_bytes();
            r.write_csv(&mut buf)?;
            ctx.emit(&String::from_utf8(buf)?)?
        }
    }
    Ok(0)
}

#[derive(Args, Debug)]
pub struct SchrodingerArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Order of the dispersion |ω|^a.
    #[arg(short, long, value_parser = real, default_value = "2")]
    pub a: f64,
    /// Decreasing schedule, e.g. `geom:1e-1:1e-4:7`.
    #[arg(long, value_parser = times)]
    pub times: Times,
    /// Regularization parameters for the ε-sweep (a = 2 only).
    #[arg(long, value_delimiter = ',', value_parser = real)]
    pub eps: Vec<f64>,
    /// Probe points `x;y;…`, coordinates comma-separated (default: the origin).
    #[arg(long)]
    pub probes: Option<String>,
    #[command(flatten)]
    pub grid: GridArgs,
}

fn probes(s: &str) -> Result<Vec<Vec<f64>>> {
    s.split(';')
        .map(|p| {
            p.split(',')
                .map(|c| real(c.trim()).map_err(|e| anyhow::anyhow!("--probes: {e}")))
                .collect()
        })
        .collect()
}

pub fn schrodinger(a: &SchrodingerArgs, ctx: &Context) -> Result<u8> {
    let f = a.field.build()?;
    let grid = a.grid.resolve(&f)?;
    let probes = match &a.probes {
        Some(p) => probes(p)?,
        None => vec![vec![0.0; f.dim()]],
    };
    let cfg = SchrodingerRunConfig {
        grid,
        initial: f,
        a: a.a,
        times: a.times.0.clone(),
        epsilon_list: a.eps.clone(),
        probes,
    };
    let r = convergence_experiment(&cfg)?;
    match ctx.format(Format::Csv) {
        Format::Json => {
            let v: Value = serde_json::from_str(&r.to_json())?;
            ctx.emit(&ctx.json(v))?
        }
        _ => {
            let mut buf = ctx.csv_header().into_bytes();
            r.write_csv(&mut buf)?;
            ctx.emit(&String::from_utf8(buf)?)?
        }
    }
    Ok(0)
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// acceptance, properties, all or empty.
    #[arg(long, default_value = "acceptance")]
    pub suite: Suite,
    /// Run only checks whose name contains one of these (comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub filter: Vec<String>,
}

pub fn verify(a: &VerifyArgs, ctx: &Context) -> Result<u8> {
    let report = run_suite(&SuiteConfig {
        suite: Some(a.suite),
        filter: a.filter.clone(),
    });
    match ctx.format(Format::Text) {
        Format::Json => {
            let v: Value = serde_json::from_str(&report.to_json())?;
            ctx.emit(&ctx.json(v))?
        }
        Format::Csv => bail!("--format csv is not available for verify (use text or json)"),
        Format::Text => {
            let mut s = String::new();
            for o in &report.outcomes {
                let tag = match o.status {
                    CheckStatus::Pass => "PASS",
                    CheckStatus::Fail => "FAIL",
                    CheckStatus::Skip => "SKIP",
                };
                let m: Vec<String> = o.measured.iter().map(|(k, v)| format!("{k}={v:.3e}")).collect();
                writeln!(s, "{tag} {} {}", o.name, m.join(" ")).unwrap();
                for n in &o.notes {
                    writeln!(s, "     {n}").unwrap();
                }
            }
            let t = report.summary;
            writeln!(s, "pass {} fail {} skip {}", t.pass, t.fail, t.skip).unwrap();
            ctx.emit(&s)?
        }
    }
    Ok(report.exit_code() as u8)
}
