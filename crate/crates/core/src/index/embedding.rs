//! Embedding verdicts for integer and fractional nonuniform spaces.

use num_traits::One;

use super::exponent::{fmt_rational, int, Exponent, ExponentVector, Rational, SmoothnessIndex};
use super::verdict::{EmbeddingCase, EmbeddingVerdict, Holder, LqRange, Trace};
use crate::error::{precondition, Error, Result};

fn require_dim(n: usize) -> Result<Rational> {
    if n == 0 {
        return precondition("N ≥ 1");
    }
    Ok(int(n as i64))
}

fn finite(p: &Exponent, name: &str) -> Result<Rational> {
    p.finite()
        .cloned()
        .ok_or_else(|| Error::Precondition(format!("{name} < ∞")))
}

fn sorted(a: Rational, b: Rational) -> LqRange {
    if a <= b {
        LqRange { lo: a, hi: Some(b) }
    } else {
        LqRange { lo: b, hi: Some(a) }
    }
}

/// `Np/(N − kp)`, the critical Lebesgue exponent for `k` derivatives in `L^p`.
pub fn sobolev_conjugate(n: usize, p: &Exponent, k: usize) -> Result<Exponent> {
    let nr = require_dim(n)?;
    let p = finite(p, "p")?;
    if k == 0 {
        return precondition("k ≥ 1");
    }
    let kp = int(k as i64) * &p;
    if kp >= nr {
        return precondition(format!(
            "kp < N (kp = {}, N = {n})",
            fmt_rational(&kp)
        ));
    }
    Ok(Exponent::Finite(&nr * &p / (&nr - kp)))
}

/// Decides which case of the integer embedding theorem applies to `W_k^{p⃗}(ℝ^N)`
/// and the resulting target space.
pub fn integer_embedding_verdict(n: usize, k: usize, pvec: &ExponentVector) -> Result<EmbeddingVerdict> {
    let nr = require_dim(n)?;
    if k == 0 || pvec.len() != k + 1 {
        return precondition(format!("p⃗ has length k+1 = {}", k + 1));
    }
    let ps = pvec.finite_entries()?;
    let p0 = ps[0].clone();
    let pk = ps[k].clone();
    let kr = int(k as i64);
    let kp = &kr * &pk;
    let mut trace = Trace::default();

    if trace.check(format!("k·p_k = {} < N = {n}", fmt_rational(&kp)), kp < nr) {
        let q = &nr * &pk / (&nr - &kp);
        return Ok(EmbeddingVerdict {
            case: EmbeddingCase::Subcritical,
            lq_range: Some(sorted(p0, q)),
            holder: None,
            corollary_holder: None,
            trace,
        });
    }
    if trace.check(format!("k·p_k = {} = N = {n}", fmt_rational(&kp)), kp == nr) {
        return Ok(EmbeddingVerdict {
            case: EmbeddingCase::Critical,
            lq_range: Some(LqRange { lo: p0, hi: None }),
            holder: None,
            corollary_holder: None,
            trace,
        });
    }
    trace.check(format!("k·p_k = {} > N = {n}", fmt_rational(&kp)), true);

    let ratio = &nr / &pk;
    let holder = if trace.check(
        format!("N/p_k = {} is an integer", fmt_rational(&ratio)),
        ratio.is_integer(),
    ) {
        let k0 = ratio.to_integer() + num_bigint::BigInt::one();
        let k0 = usize::try_from(k0).expect("k0 fits in usize");
        // kp_k > N forces k > N/p_k, so k ≥ k0 always holds here.
        trace.check(format!("k = {k} ≥ k0 = N/p_k + 1 = {k0}"), k >= k0);
        Holder {
            n: k - k0,
            lambda: Rational::one(),
            lambda_open: true,
        }
    } else {
        // (k0 − 1)p_k < N < k0 p_k  ⇔  k0 = ⌊N/p_k⌋ + 1.
        let k0r = ratio.floor() + Rational::one();
        let k0 = usize::try_from(k0r.to_integer()).expect("k0 fits in usize");
        trace.check(
            format!(
                "(k0−1)·p_k = {} < N < k0·p_k = {} with k0 = {k0}",
                fmt_rational(&((&k0r - Rational::one()) * &pk)),
                fmt_rational(&(&k0r * &pk))
            ),
            true,
        );
        Holder {
            n: k - k0,
            lambda: k0r - ratio,
            lambda_open: false,
        }
    };
    let corollary_holder = if trace.check(format!("p_k = {} > N", fmt_rational(&pk)), pk > nr) {
        Some(Holder {
            n: k - 1,
            lambda: Rational::one() - &nr / &pk,
            lambda_open: false,
        })
    } else {
        None
    };
    Ok(EmbeddingVerdict {
        case: EmbeddingCase::Supercritical,
        lq_range: None,
        holder: Some(holder),
        corollary_holder,
        trace,
    })
}

/// The largest space `W_k^{q⃗}` with `q_k = p_k` and its chain of truncations
/// `q⃗^{(k)}, q⃗^{(k−1)}, …, q⃗^{(0)} = (q_0)`. The first element is `q⃗` itself.
pub fn corollary_chain(n: usize, k: usize, pvec: &ExponentVector) -> Result<Vec<ExponentVector>> {
    let nr = require_dim(n)?;
    if k == 0 || pvec.len() != k + 1 {
        return precondition(format!("p⃗ has length k+1 = {}", k + 1));
    }
    let ps = pvec.finite_entries()?;
    let pk = ps[k].clone();
    if pk >= &nr / int(k as i64) {
        return precondition(format!(
            "p_k < N/k (p_k = {}, N/k = {})",
            fmt_rational(&pk),
            fmt_rational(&(&nr / int(k as i64)))
        ));
    }
    let q: Vec<Exponent> = (0..=k)
        .map(|i| {
            let gap = int((k - i) as i64) * &pk;
            Exponent::Finite(&nr * &pk / (&nr - gap))
        })
        .collect();
    let q = ExponentVector::new(q)?;
    Ok((0..=k).rev().map(|i| q.truncated(i + 1)).collect())
}

/// Embedding verdict for `W_s^{(p_0,p_1)}(ℝ^N)`, `0 < s < 1`.
pub fn fractional_embedding_verdict(
    n: usize,
    s: &SmoothnessIndex,
    p0: &Exponent,
    p1: &Exponent,
) -> Result<EmbeddingVerdict> {
    let nr = require_dim(n)?;
    let sv = s.value().clone();
    if sv >= Rational::one() {
        return precondition("0 < s < 1");
    }
    let p0 = finite(p0, "p_0")?;
    let p1 = finite(p1, "p_1")?;
    if p1 <= Rational::one() {
        return precondition("p_1 > 1");
    }
    let sp = &sv * &p1;
    let mut trace = Trace::default();

    if trace.check(
        format!("p_0 = {} ≤ p_1 = {}", fmt_rational(&p0), fmt_rational(&p1)),
        p0 <= p1,
    ) {
        if trace.check(format!("s·p_1 = {} < N", fmt_rational(&sp)), sp < nr) {
            let q = &nr * &p1 / (&nr - &sp);
            return Ok(EmbeddingVerdict {
                case: EmbeddingCase::Subcritical,
                lq_range: Some(LqRange { lo: p0, hi: Some(q) }),
                holder: None,
                corollary_holder: None,
                trace,
            });
        }
        if trace.check(format!("s·p_1 = {} = N", fmt_rational(&sp)), sp == nr) {
            return Ok(EmbeddingVerdict {
                case: EmbeddingCase::Critical,
                lq_range: Some(LqRange { lo: p0, hi: None }),
                holder: None,
                corollary_holder: None,
                trace,
            });
        }
        trace.check(format!("s·p_1 = {} > N", fmt_rational(&sp)), true);
        return Ok(EmbeddingVerdict {
            case: EmbeddingCase::Supercritical,
            lq_range: None,
            holder: Some(Holder {
                n: 0,
                lambda: sv - &nr / &p1,
                lambda_open: false,
            }),
            corollary_holder: None,
            trace,
        });
    }

    if !trace.check(format!("s·p_1 = {} < N", fmt_rational(&sp)), sp < nr) {
        return Ok(EmbeddingVerdict::unknown(trace));
    }
    let q = &nr * &p1 / (&nr - &sp);
    if !trace.check(
        format!("p_0 = {} < Np_1/(N−sp_1) = {}", fmt_rational(&p0), fmt_rational(&q)),
        p0 < q,
    ) {
        return Ok(EmbeddingVerdict::unknown(trace));
    }
    Ok(EmbeddingVerdict {
        case: EmbeddingCase::Subcritical,
        lq_range: Some(LqRange { lo: p0, hi: Some(q) }),
        holder: None,
        corollary_holder: None,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::exponent::rat;

    // 1/q = 1/p − k/N at the right endpoint.
    fn endpoint_identity(n: usize, p: &Rational, k: usize, q: &Rational) -> bool {
        q.recip() == p.recip() - int(k as i64) / int(n as i64)
    }

    fn ev(xs: &[(i64, i64)]) -> ExponentVector {
        ExponentVector::from_ratios(xs).unwrap()
    }

    #[test]
    fn conjugate_examples() {
        let p = Exponent::from_int(2).unwrap();
        assert_eq!(sobolev_conjugate(4, &p, 1).unwrap(), Exponent::from_int(4).unwrap());
        let p = Exponent::from_ratio(3, 2).unwrap();
        assert_eq!(sobolev_conjugate(3, &p, 1).unwrap(), Exponent::from_int(3).unwrap());
        let p = Exponent::from_int(2).unwrap();
        assert!(matches!(sobolev_conjugate(3, &p, 2), Err(Error::Precondition(_))));
    }

    #[test]
    fn integer_verdict_examples() {
        let v = integer_embedding_verdict(3, 1, &ev(&[(2, 1), (2, 1)])).unwrap();
        assert_eq!(v.case, EmbeddingCase::Subcritical);
        assert_eq!(v.lq_range.unwrap(), LqRange { lo: int(2), hi: Some(int(6)) });

        let v = integer_embedding_verdict(2, 1, &ev(&[(4, 1), (2, 1)])).unwrap();
        assert_eq!(v.case, EmbeddingCase::Critical);
        assert_eq!(v.lq_range.unwrap(), LqRange { lo: int(4), hi: None });

        let v = integer_embedding_verdict(3, 2, &ev(&[(1, 1), (1, 1), (2, 1)])).unwrap();
        assert_eq!(v.case, EmbeddingCase::Supercritical);
        let h = v.holder.unwrap();
        assert_eq!((h.n, h.lambda, h.lambda_open), (0, rat(1, 2), false));
        assert!(v.corollary_holder.is_none());
        assert!(!v.trace.entries().is_empty());
    }

    #[test]
    fn integer_ratio_and_corollary_target() {
        // N/p_k = 1 is an integer: C^{k−2, λ} for every λ < 1.
        let v = integer_embedding_verdict(2, 2, &ev(&[(2, 1), (2, 1), (2, 1)])).unwrap();
        let h = v.holder.unwrap();
        assert_eq!((h.n, h.lambda_open), (0, true));
        // p_k > N adds the C^{k−1, 1−N/p_k} target.
        let v = integer_embedding_verdict(2, 1, &ev(&[(2, 1), (4, 1)])).unwrap();
        let c = v.corollary_holder.unwrap();
        assert_eq!((c.n, c.lambda), (0, rat(1, 2)));
        assert_eq!(v.holder.unwrap().lambda, rat(1, 2));
    }

    #[test]
    fn reversed_endpoints_are_sorted() {
        let v = integer_embedding_verdict(3, 1, &ev(&[(10, 1), (2, 1)])).unwrap();
        assert_eq!(v.lq_range.unwrap(), LqRange { lo: int(6), hi: Some(int(10)) });
    }

    #[test]
    fn chain_examples() {
        let c = corollary_chain(4, 1, &ev(&[(10, 1), (2, 1)])).unwrap();
        assert_eq!(c[0], ev(&[(4, 1), (2, 1)]));
        assert_eq!(c[1], ev(&[(4, 1)]));
        let c = corollary_chain(6, 2, &ev(&[(20, 1), (5, 1), (2, 1)])).unwrap();
        assert_eq!(c[0], ev(&[(6, 1), (3, 1), (2, 1)]));
        assert_eq!(c.len(), 3);
        assert!(corollary_chain(2, 1, &ev(&[(3, 1), (2, 1)])).is_err());
    }

    #[test]
    fn fractional_examples() {
        let s = SmoothnessIndex::from_ratio(1, 2).unwrap();
        let two = Exponent::from_int(2).unwrap();
        let v = fractional_embedding_verdict(2, &s, &two, &two).unwrap();
        assert_eq!(v.lq_range.unwrap(), LqRange { lo: int(2), hi: Some(int(4)) });

        let s34 = SmoothnessIndex::from_ratio(3, 4).unwrap();
        let one = Exponent::from_int(1).unwrap();
        let v = fractional_embedding_verdict(1, &s34, &one, &two).unwrap();
        assert_eq!(v.holder.unwrap().lambda, rat(1, 4));

        let five = Exponent::from_int(5).unwrap();
        let v = fractional_embedding_verdict(2, &s, &five, &two).unwrap();
        assert_eq!(v.case, EmbeddingCase::Unknown);

        let three = Exponent::from_int(3).unwrap();
        let v = fractional_embedding_verdict(2, &s, &three, &two).unwrap();
        assert_eq!(v.lq_range.unwrap(), LqRange { lo: int(3), hi: Some(int(4)) });
    }

    proptest::proptest! {
        #[test]
        fn conjugate_matches_verdict_endpoint(n in 2usize..9, k in 1usize..4, a in 2i64..60, d in 1i64..20) {
            let p = rat(a, d);
            proptest::prop_assume!(p >= int(1) && int(k as i64) * &p < int(n as i64));
            let mut entries = vec![Exponent::Finite(p.clone()); k + 1];
            entries[0] = Exponent::from_int(1).unwrap();
            let v = integer_embedding_verdict(n, k, &ExponentVector::new(entries).unwrap()).unwrap();
            let q = sobolev_conjugate(n, &Exponent::Finite(p.clone()), k).unwrap();
            let q = q.finite().unwrap().clone();
            proptest::prop_assert_eq!(v.lq_range.unwrap().hi.unwrap(), q.clone());
            proptest::prop_assert!(endpoint_identity(n, &p, k, &q));
        }
    }
}
