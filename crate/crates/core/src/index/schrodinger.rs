//! Exponent-level criteria for pointwise convergence of the fractional
//! Schrödinger group.

use num_traits::One;
use serde::Serialize;

use super::exponent::{fmt_rational, int, rat, Exponent, ExponentVector, Rational, SmoothnessIndex};
use super::verdict::Trace;
use crate::error::{precondition, Result};

/// `s` for integer `s`, otherwise `⌊s⌋ + ν_s (p_⌈s⌉ − 1)`.
pub fn beta_s(s: &SmoothnessIndex, p_ceil: &Exponent) -> Result<Rational> {
    let Some(p) = p_ceil.finite() else {
        return precondition("1 < p_⌈s⌉ ≤ 2");
    };
    if !(p > &Rational::one() && p <= &int(2)) {
        return precondition(format!("1 < p_⌈s⌉ ≤ 2 (p_⌈s⌉ = {})", fmt_rational(p)));
    }
    if s.is_integer() {
        return Ok(s.value().clone());
    }
    Ok(int(s.floor() as i64) + s.nu() * (p - Rational::one()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HsThreshold {
    pub s0: Rational,
    /// `true` when the threshold itself is excluded (`s > s0`).
    pub strict: bool,
}

impl HsThreshold {
    pub fn cleared_by(&self, s: &Rational) -> bool {
        if self.strict {
            s > &self.s0
        } else {
            s >= &self.s0
        }
    }
}

impl Serialize for HsThreshold {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = ser.serialize_struct("HsThreshold", 2)?;
        st.serialize_field("s0", &fmt_rational(&self.s0))?;
        st.serialize_field("strict", &self.strict)?;
        st.end()
    }
}

/// Known sufficient smoothness for a.e. convergence on `H^s(ℝ^N)`.
///
/// One dimension: `s ≥ 1/4` (sharp, any `a > 1`). Higher dimensions: `s > 1/2 − 1/(2N+2)`
/// for the classical group `a = 2`, and `s > 1/2` otherwise.
pub fn known_hs_threshold(n: usize, a: &Rational) -> Result<HsThreshold> {
    if n == 0 {
        return precondition("N ≥ 1");
    }
    if a <= &Rational::one() {
        return precondition("a > 1");
    }
    Ok(if n == 1 {
        HsThreshold {
            s0: rat(1, 4),
            strict: false,
        }
    } else if a == &int(2) {
        HsThreshold {
            s0: rat(1, 2) - rat(1, 2 * n as i64 + 2),
            strict: true,
        }
    } else {
        HsThreshold {
            s0: rat(1, 2),
            strict: true,
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConvergenceVerdict {
    ConvergesStandard,
    /// Convergence holds with the propagator read as the low-frequency-regularized limit.
    ConvergesPrincipalValue,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchrodingerVerdict {
    pub verdict: ConvergenceVerdict,
    pub trace: Trace,
}

/// `pvec` must have length `⌈s⌉ + 1`; only `p_⌈s⌉` enters the decision.
pub fn schrodinger_criterion(
    n: usize,
    s: &SmoothnessIndex,
    pvec: &ExponentVector,
    a: &Rational,
) -> Result<SchrodingerVerdict> {
    if n == 0 {
        return precondition("N ≥ 1");
    }
    if a <= &Rational::one() {
        return precondition("a > 1");
    }
    if pvec.len() != s.ceil() + 1 {
        return precondition(format!("p⃗ has length ⌈s⌉+1 = {}", s.ceil() + 1));
    }
    let ps = pvec.finite_entries()?;
    let p = ps[s.ceil()].clone();
    let two = int(2);
    if !(p > Rational::one() && p <= two) {
        return precondition(format!("1 < p_⌈s⌉ ≤ 2 (p_⌈s⌉ = {})", fmt_rational(&p)));
    }
    if p < two && a != &two {
        return precondition("a = 2 when p_⌈s⌉ < 2");
    }
    let nr = int(n as i64);
    let sv = s.value();
    let mut trace = Trace::default();
    let verdict = if p == two {
        let half_n = &nr / &two;
        let th = known_hs_threshold(n, a)?;
        let below = trace.check(format!("s = {} < N/2", fmt_rational(sv)), sv < &half_n);
        if below {
            let rel = if th.strict { ">" } else { "≥" };
            if trace.check(
                format!("s {rel} {} (known H^s threshold)", fmt_rational(&th.s0)),
                th.cleared_by(sv),
            ) {
                ConvergenceVerdict::ConvergesStandard
            } else {
                ConvergenceVerdict::Unknown
            }
        } else if trace.check("a = 2", a == &two) {
            ConvergenceVerdict::ConvergesPrincipalValue
        } else {
            ConvergenceVerdict::Unknown
        }
    } else {
        let beta = beta_s(s, &Exponent::Finite(p.clone()))?;
        let ratio = &beta / &nr;
        let lower = p.recip() - &nr / (&two * (&nr + Rational::one()));
        let upper = p.recip();
        let lo_ok = trace.check(
            format!("1/p − N/(2(N+1)) = {} < β_s/N = {}", fmt_rational(&lower), fmt_rational(&ratio)),
            ratio > lower,
        );
        let hi_ok = trace.check(
            format!("β_s/N = {} < 1/p = {}", fmt_rational(&ratio), fmt_rational(&upper)),
            ratio < upper,
        );
        if lo_ok && hi_ok {
            ConvergenceVerdict::ConvergesStandard
        } else if trace.check(
            format!("β_s = {} ≥ N/p = {}", fmt_rational(&beta), fmt_rational(&(&nr / &p))),
            beta >= &nr / &p,
        ) {
            ConvergenceVerdict::ConvergesPrincipalValue
        } else {
            ConvergenceVerdict::Unknown
        }
    };
    Ok(SchrodingerVerdict { verdict, trace })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64, d: i64) -> SmoothnessIndex {
        SmoothnessIndex::from_ratio(n, d).unwrap()
    }

    #[test]
    fn beta_examples() {
        let p = Exponent::from_ratio(3, 2).unwrap();
        assert_eq!(beta_s(&s(3, 2), &p).unwrap(), rat(5, 4));
        assert_eq!(beta_s(&s(2, 1), &p).unwrap(), int(2));
        assert_eq!(beta_s(&s(1, 2), &Exponent::from_int(2).unwrap()).unwrap(), rat(1, 2));
        assert!(beta_s(&s(1, 2), &Exponent::from_int(3).unwrap()).is_err());
    }

    #[test]
    fn threshold_examples() {
        let t = known_hs_threshold(1, &int(2)).unwrap();
        assert_eq!((t.s0, t.strict), (rat(1, 4), false));
        let t = known_hs_threshold(2, &int(2)).unwrap();
        // 1/2 − 1/(2·2+2) = 1/3.
        assert_eq!((t.s0, t.strict), (rat(1, 3), true));
        let t = known_hs_threshold(3, &int(3)).unwrap();
        assert_eq!((t.s0, t.strict), (rat(1, 2), true));
    }

    #[test]
    fn criterion_examples() {
        let v = schrodinger_criterion(1, &s(1, 4), &ExponentVector::from_ints(&[4, 2]).unwrap(), &int(2)).unwrap();
        assert_eq!(v.verdict, ConvergenceVerdict::ConvergesStandard);
        let v = schrodinger_criterion(1, &s(1, 1), &ExponentVector::from_ints(&[4, 2]).unwrap(), &int(2)).unwrap();
        assert_eq!(v.verdict, ConvergenceVerdict::ConvergesPrincipalValue);
        let pv = ExponentVector::from_ratios(&[(4, 1), (3, 2)]).unwrap();
        let v = schrodinger_criterion(1, &s(1, 2), &pv, &int(2)).unwrap();
        assert_eq!(v.verdict, ConvergenceVerdict::Unknown);
        assert!(!v.trace.entries().is_empty());
    }

    #[test]
    fn criterion_preconditions() {
        let pv = ExponentVector::from_ratios(&[(4, 1), (3, 2)]).unwrap();
        assert!(schrodinger_criterion(1, &s(1, 2), &pv, &int(3)).is_err());
        let long = ExponentVector::from_ints(&[4, 4, 2]).unwrap();
        assert!(schrodinger_criterion(1, &s(1, 1), &long, &int(2)).is_err());
    }

    #[test]
    fn principal_value_branch_for_small_p() {
        // N = 1, p = 5/4, s = 3/2: β_s = 1 + 1/8 ≥ 4/5.
        let pv = ExponentVector::from_ratios(&[(2, 1), (2, 1), (5, 4)]).unwrap();
        let v = schrodinger_criterion(1, &s(3, 2), &pv, &int(2)).unwrap();
        assert_eq!(v.verdict, ConvergenceVerdict::ConvergesPrincipalValue);
    }

    proptest::proptest! {
        #[test]
        fn monotone_in_s(n in 1usize..5, num in 1i64..200) {
            let sv = s(num, 40);
            let ceil = sv.ceil();
            let mut entries = vec![2i64; ceil + 1];
            entries[0] = 4;
            let pv = ExponentVector::from_ints(&entries).unwrap();
            let v = schrodinger_criterion(n, &sv, &pv, &int(2)).unwrap().verdict;
            let th = known_hs_threshold(n, &int(2)).unwrap();
            let expect = if sv.value() >= &rat(n as i64, 2) {
                ConvergenceVerdict::ConvergesPrincipalValue
            } else if th.cleared_by(sv.value()) {
                ConvergenceVerdict::ConvergesStandard
            } else {
                ConvergenceVerdict::Unknown
            };
            proptest::prop_assert_eq!(v, expect);
        }
    }
}
