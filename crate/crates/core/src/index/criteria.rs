//! Density criteria and the power-decay membership test.

use num_traits::One;
use serde::Serialize;

use super::exponent::{fmt_rational, int, Exponent, ExponentVector, Rational, SmoothnessIndex};
use super::verdict::Trace;
use crate::error::{precondition, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityVerdict {
    /// Whether `1/p_i ≤ 1/p_{i−1} + 1/N` holds for every `1 ≤ i ≤ k`.
    pub special_criterion: bool,
    /// Test functions are dense for every finite exponent vector, regardless
    /// of the chain condition.
    pub dense: bool,
    pub trace: Trace,
}

pub fn special_density_criterion(n: usize, k: usize, pvec: &ExponentVector) -> Result<DensityVerdict> {
    if n == 0 {
        return precondition("N ≥ 1");
    }
    if pvec.len() != k + 1 {
        return precondition(format!("p⃗ has length k+1 = {}", k + 1));
    }
    let ps = pvec.finite_entries()?;
    let inv_n = int(n as i64).recip();
    let mut trace = Trace::default();
    let mut all = true;
    for i in 1..=k {
        let lhs = ps[i].recip();
        let rhs = ps[i - 1].recip() + &inv_n;
        all &= trace.check(
            format!(
                "1/p_{i} = {} ≤ 1/p_{} + 1/N = {}",
                fmt_rational(&lhs),
                i - 1,
                fmt_rational(&rhs)
            ),
            lhs <= rhs,
        );
    }
    Ok(DensityVerdict {
        special_criterion: all,
        dense: true,
        trace,
    })
}

/// `s/N ≥ 1/p_1 − 1/p_0`, evaluated exactly.
pub fn fractional_density_criterion(
    n: usize,
    s: &SmoothnessIndex,
    p0: &Exponent,
    p1: &Exponent,
) -> Result<bool> {
    if n == 0 {
        return precondition("N ≥ 1");
    }
    if s.value() >= &Rational::one() {
        return precondition("0 < s < 1");
    }
    let (Some(p0), Some(p1)) = (p0.finite(), p1.finite()) else {
        return precondition("p_0, p_1 < ∞");
    };
    Ok(s.value() / int(n as i64) >= p1.recip() - p0.recip())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Membership {
    Member,
    NotMember,
    /// `p_1 δ < N < p_0 δ` fails, so the profile is not in `L^{p_0}` or the
    /// family is outside the regime the criterion covers.
    PreconditionFail,
}

/// Decides whether `(1+|x|²)^{−δ/2}` lies in `W_s^{(p_0,p_1)}(ℝ^N)`.
pub fn example_membership(
    n: usize,
    s: &SmoothnessIndex,
    p0: &Exponent,
    p1: &Exponent,
    delta: &Rational,
) -> Result<Membership> {
    if n == 0 {
        return precondition("N ≥ 1");
    }
    if s.value() > &Rational::one() {
        return precondition("0 < s ≤ 1");
    }
    let (Some(p0), Some(p1)) = (p0.finite(), p1.finite()) else {
        return Err(Error::Precondition("p_0, p_1 < ∞".into()));
    };
    let nr = int(n as i64);
    if !(p1 * delta < nr && nr < p0 * delta) {
        return Ok(Membership::PreconditionFail);
    }
    Ok(if p1 * (delta + s.value()) > nr {
        Membership::Member
    } else {
        Membership::NotMember
    })
}

/// `p_1(δ+s) − N`: positive exactly for members, small for near-boundary cases.
pub fn membership_margin(n: usize, s: &SmoothnessIndex, p1: &Rational, delta: &Rational) -> Rational {
    p1 * (delta + s.value()) - int(n as i64)
}
