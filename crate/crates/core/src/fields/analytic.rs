//! Closed-form fields: finite sums of products of translated, dilated radial
//! profiles, closed under differentiation, dilation and cut-off.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::MultiIndex;
use super::profile::{expand_radial_derivative, Monomial, Profile};
use crate::error::{Error, Result};

/// Highest derivative order the analytic path will expand.
pub const MAX_ANALYTIC_ORDER: usize = 6;

/// The named families.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    /// `(1+|x|²)^{−δ/2}`
    RationalDecay { delta: f64 },
    /// `e^{−|x−c|²/σ²}`
    Gaussian { sigma: f64, center: Vec<f64> },
    /// Positive entire solution of the critical p-Laplace equation, concentrated at `x0` with scale `λ`.
    PLaplaceBubble { lambda: f64, x0: Vec<f64>, p: f64 },
    /// Smooth, 1 on `|x| < R/2`, 0 on `|x| > R`.
    SmoothBump { radius: f64 },
    /// `φ` with `φ̂(ω) = B(|ω|)`, the fixed low-frequency cutoff.
    FourierBump,
}

#[derive(Clone, Debug)]
pub struct Factor {
    pub profile: Profile,
    pub center: Vec<f64>,
    pub scale: f64,
    pub deriv: MultiIndex,
    expansion: Arc<Vec<Monomial>>,
    max_m: usize,
}

impl Factor {
    fn new(profile: Profile, center: Vec<f64>, scale: f64, deriv: MultiIndex) -> Self {
        let expansion = expand_radial_derivative(&deriv);
        let max_m = expansion.iter().map(|t| t.m).max().unwrap_or(0);
        Factor {
            profile,
            center,
            scale,
            deriv,
            expansion: Arc::new(expansion),
            max_m,
        }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        let y: Vec<f64> = x
            .iter()
            .zip(&self.center)
            .map(|(xi, ci)| (xi - ci) / self.scale)
            .collect();
        let u: f64 = y.iter().map(|v| v * v).sum();
        if self.deriv.is_zero() {
            return self.profile.value(u);
        }
        let g = self
            .profile
            .derivatives(u, self.max_m)
            .expect("derivative availability checked at construction");
        let mut acc = 0.0;
        for t in self.expansion.iter() {
            let mut mono = t.coef * g[t.m];
            for (yi, &b) in y.iter().zip(&t.beta) {
                mono *= yi.powi(b as i32);
            }
            acc += mono;
        }
        acc * self.scale.powi(-(self.deriv.order() as i32))
    }

    fn with_deriv(&self, extra: &MultiIndex) -> Result<Option<Factor>> {
        if extra.is_zero() {
            return Ok(Some(self.clone()));
        }
        if self.profile == Profile::Constant {
            return Ok(None);
        }
        let d = self.deriv.plus(extra);
        if matches!(self.profile, Profile::FourierBump { .. }) || d.order() > MAX_ANALYTIC_ORDER {
            return Err(Error::UnsupportedDerivative {
                family: self.profile.name().into(),
                order: d.order(),
            });
        }
        Ok(Some(Factor::new(self.profile.clone(), self.center.clone(), self.scale, d)))
    }
}

#[derive(Clone, Debug)]
pub struct Term {
    pub coef: Complex64,
    pub factors: Vec<Factor>,
}

#[derive(Clone, Debug)]
pub struct AnalyticField {
    pub dim: usize,
    pub terms: Vec<Term>,
    /// The named family this field still is exactly, if any.
    pub family: Option<Family>,
}

impl AnalyticField {
    pub fn new(dim: usize, family: Family) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be ≥ 1".into()));
        }
        let origin = vec![0.0; dim];
        let bad = |m: &str| Err(Error::InvalidParameter(m.into()));
        let (profile, center, scale, coef) = match &family {
            Family::RationalDecay { delta } => {
                if !(*delta > 0.0) {
                    return bad("δ > 0");
                }
                (Profile::RationalDecay { delta: *delta }, origin, 1.0, 1.0)
            }
            Family::Gaussian { sigma, center } => {
                if !(*sigma > 0.0) {
                    return bad("σ > 0");
                }
                if center.len() != dim {
                    return bad("center dimension mismatch");
                }
                (Profile::Gaussian, center.clone(), *sigma, 1.0)
            }
            Family::PLaplaceBubble { lambda, x0, p } => {
                let n = dim as f64;
                if !(*lambda > 0.0) || !(*p > 1.0 && *p < n) {
                    return bad("λ > 0 and 1 < p < N");
                }
                if x0.len() != dim {
                    return bad("x0 dimension mismatch");
                }
                // U_λ(x) = λ^{−(N−p)/p} U_1((x − x0)/λ)
                let coef = lambda.powf(-(n - *p) / *p);
                (Profile::PLaplace { p: *p, dim }, x0.clone(), *lambda, coef)
            }
            Family::SmoothBump { radius } => {
                if !(*radius > 0.0) {
                    return bad("R > 0");
                }
                (Profile::Bump, origin, *radius, 1.0)
            }
            Family::FourierBump => {
                if dim > 3 {
                    return bad("Fourier bump needs N ≤ 3");
                }
                (Profile::FourierBump { dim }, origin, 1.0, 1.0)
            }
        };
        Ok(AnalyticField {
            dim,
            terms: vec![Term {
                coef: Complex64::new(coef, 0.0),
                factors: vec![Factor::new(profile, center, scale, MultiIndex::zero(dim))],
            }],
            family: Some(family),
        })
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        AnalyticField {
            dim,
            terms: vec![Term {
                coef: Complex64::new(c, 0.0),
                factors: vec![Factor::new(Profile::Constant, vec![0.0; dim], 1.0, MultiIndex::zero(dim))],
            }],
            family: None,
        }
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        self.terms
            .iter()
            .map(|t| t.coef * t.factors.iter().map(|f| f.eval(x)).product::<f64>())
            .sum()
    }

    /// `∂^α` by the Leibniz rule over each product.
    pub fn derivative(&self, alpha: &MultiIndex) -> Result<AnalyticField> {
        if alpha.dim() != self.dim {
            return Err(Error::InvalidParameter("multi-index dimension mismatch".into()));
        }
        if alpha.is_zero() {
            return Ok(self.clone());
        }
        let mut terms = Vec::new();
        for t in &self.terms {
            for split in leibniz_splits(alpha, t.factors.len()) {
                let mut fs = Vec::with_capacity(t.factors.len());
                let mut vanished = false;
                for (f, (d, _)) in t.factors.iter().zip(&split.0) {
                    match f.with_deriv(d)? {
                        Some(g) => fs.push(g),
                        None => {
                            vanished = true;
                            break;
                        }
                    }
                }
                if !vanished {
                    terms.push(Term {
                        coef: t.coef * split.1,
                        factors: fs,
                    });
                }
            }
        }
        Ok(AnalyticField {
            dim: self.dim,
            terms,
            family: None,
        })
    }

    /// `x ↦ f(x/λ)`.
    pub fn dilate(&self, lambda: f64) -> AnalyticField {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut coef = t.coef;
                let factors = t
                    .factors
                    .iter()
                    .map(|f| {
                        coef *= lambda.powi(f.deriv.order() as i32);
                        Factor::new(
                            f.profile.clone(),
                            f.center.iter().map(|c| c * lambda).collect(),
                            f.scale * lambda,
                            f.deriv.clone(),
                        )
                    })
                    .collect();
                Term { coef, factors }
            })
            .collect();
        AnalyticField {
            dim: self.dim,
            terms,
            family: None,
        }
    }

    /// `x ↦ f(x − v)`.
    pub fn translate(&self, v: &[f64]) -> AnalyticField {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                coef: t.coef,
                factors: t
                    .factors
                    .iter()
                    .map(|f| {
                        let mut g = f.clone();
                        g.center = f.center.iter().zip(v).map(|(c, d)| c + d).collect();
                        g
                    })
                    .collect(),
            })
            .collect();
        AnalyticField {
            dim: self.dim,
            terms,
            family: None,
        }
    }

    pub fn scale(&self, c: Complex64) -> AnalyticField {
        AnalyticField {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coef: t.coef * c,
                    factors: t.factors.clone(),
                })
                .collect(),
            family: None,
        }
    }

    pub fn add(&self, o: &AnalyticField) -> AnalyticField {
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        AnalyticField {
            dim: self.dim,
            terms,
            family: None,
        }
    }

    pub fn mul(&self, o: &AnalyticField) -> AnalyticField {
        let mut terms = Vec::new();
        for a in &self.terms {
            for b in &o.terms {
                let mut factors = a.factors.clone();
                factors.extend(b.factors.iter().cloned());
                terms.push(Term {
                    coef: a.coef * b.coef,
                    factors,
                });
            }
        }
        AnalyticField {
            dim: self.dim,
            terms,
            family: None,
        }
    }

    /// Points along each axis where the field has structure: centers, and
    /// centers ± scale × the profile's feature radii.
    pub fn feature_points(&self, axis: usize) -> Vec<f64> {
        let mut pts = Vec::new();
        for t in &self.terms {
            for f in &t.factors {
                if f.profile == Profile::Constant {
                    continue;
                }
                let c = f.center[axis];
                pts.push(c);
                for r in f.profile.feature_radii() {
                    pts.push(c - r * f.scale);
                    pts.push(c + r * f.scale);
                }
            }
        }
        pts
    }

    /// Radius outside of which every term vanishes identically, if one exists.
    pub fn support_radius(&self) -> Option<f64> {
        let mut r: f64 = 0.0;
        for t in &self.terms {
            let compact = t.factors.iter().filter(|f| f.profile.compact()).map(|f| {
                let c: f64 = f.center.iter().map(|v| v * v).sum::<f64>().sqrt();
                c + f.scale
            });
            r = r.max(compact.fold(f64::INFINITY, f64::min));
        }
        r.is_finite().then_some(r)
    }

    /// Whether every derivative needed up to `order` has a closed form.
    pub fn supports_order(&self, order: usize) -> bool {
        order == 0
            || (order <= MAX_ANALYTIC_ORDER
                && self.terms.iter().all(|t| {
                    t.factors
                        .iter()
                        .all(|f| !matches!(f.profile, Profile::FourierBump { .. }))
                }))
    }
}

struct Split(Vec<(MultiIndex, f64)>, f64);

/// Distributes `α` over `k` factors: all `(β_1, …, β_k)` with `Σβ_i = α` and
/// multinomial weights.
fn leibniz_splits(alpha: &MultiIndex, k: usize) -> Vec<Split> {
    if k == 1 {
        return vec![Split(vec![(alpha.clone(), 1.0)], 1.0)];
    }
    let mut out = Vec::new();
    for (beta, w) in alpha.sub_indices() {
        let rest = alpha.minus(&beta);
        for Split(mut tail, wt) in leibniz_splits(&rest, k - 1) {
            let mut v = vec![(beta.clone(), 1.0)];
            v.append(&mut tail);
            out.push(Split(v, w * wt));
        }
    }
    out
}
