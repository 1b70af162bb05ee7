use num_traits::One;
use serde::Serialize;

use super::exponent::{fmt_rational, int, Exponent, ExponentVector, Rational, SmoothnessIndex};
use crate::error::{precondition, Result};

/// Exponents of the weighted heat-flow energy estimates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeatEstimateParams {
    /// `min(p_⌊s⌋, p_⌈s⌉)`.
    pub p_s: Rational,
    /// `N/(2 p_⌊s⌋) + 1/2`.
    pub sigma: Rational,
    /// Time weight exponent `(2 − p_s) σ`.
    pub varrho: Rational,
    /// `(p_0, …, p_⌊s⌋, 2)` for fractional `s`, `p⃗` otherwise.
    pub r_vec: ExponentVector,
    /// Whether `p_⌊s⌋, p_⌈s⌉ ≤ 2`, the range in which the weighted estimates are claimed.
    pub weighted_applicable: bool,
}

impl HeatEstimateParams {
    /// Supremum `2/(2+ϱ)` of the admissible time-integrability exponents `q`.
    pub fn q_sup(&self) -> Rational {
        int(2) / (int(2) + &self.varrho)
    }
}

impl Serialize for HeatEstimateParams {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = ser.serialize_struct("HeatEstimateParams", 6)?;
        st.serialize_field("p_s", &fmt_rational(&self.p_s))?;
        st.serialize_field("sigma", &fmt_rational(&self.sigma))?;
        st.serialize_field("varrho", &fmt_rational(&self.varrho))?;
        st.serialize_field("r_vec", &self.r_vec)?;
        st.serialize_field("weighted_applicable", &self.weighted_applicable)?;
        st.serialize_field("q_sup", &fmt_rational(&self.q_sup()))?;
        st.end()
    }
}

pub fn heat_estimate_params(n: usize, s: &SmoothnessIndex, pvec: &ExponentVector) -> Result<HeatEstimateParams> {
    if n == 0 {
        return precondition("N ≥ 1");
    }
    if pvec.len() != s.ceil() + 1 {
        return precondition(format!("p⃗ has length ⌈s⌉+1 = {}", s.ceil() + 1));
    }
    let ps = pvec.finite_entries()?;
    if let Some(i) = ps.iter().position(|p| p <= &Rational::one()) {
        return precondition(format!("1 < p_{i} < ∞"));
    }
    let p_floor = ps[s.floor()].clone();
    let p_ceil = ps[s.ceil()].clone();
    let two = int(2);
    let p_s = p_floor.clone().min(p_ceil.clone());
    let sigma = int(n as i64) / (&two * &p_floor) + Rational::new(1.into(), 2.into());
    let varrho = (&two - &p_s) * &sigma;
    let r_vec = if s.is_integer() {
        pvec.clone()
    } else {
        pvec.truncated(s.floor() + 1).extended(&[Exponent::Finite(two.clone())])
    };
    Ok(HeatEstimateParams {
        p_s,
        sigma,
        varrho,
        r_vec,
        weighted_applicable: p_floor <= two && p_ceil <= two,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::exponent::rat;
    use num_traits::{Signed, Zero};

    #[test]
    fn examples() {
        let p = heat_estimate_params(
            2,
            &SmoothnessIndex::from_ratio(3, 2).unwrap(),
            &ExponentVector::from_ints(&[4, 2, 2]).unwrap(),
        )
        .unwrap();
        assert_eq!((p.p_s.clone(), p.sigma.clone(), p.varrho.clone()), (int(2), int(1), int(0)));
        assert_eq!(p.r_vec, ExponentVector::from_ints(&[4, 2, 2]).unwrap());
        assert!(p.weighted_applicable);

        let p = heat_estimate_params(
            1,
            &SmoothnessIndex::from_ratio(1, 2).unwrap(),
            &ExponentVector::from_ratios(&[(4, 1), (3, 2)]).unwrap(),
        )
        .unwrap();
        assert_eq!((p.p_s.clone(), p.sigma.clone(), p.varrho.clone()), (rat(3, 2), rat(5, 8), rat(5, 16)));
        assert_eq!(p.r_vec, ExponentVector::from_ints(&[4, 2]).unwrap());
        assert!(!p.weighted_applicable);

        let p = heat_estimate_params(
            3,
            &SmoothnessIndex::from_ratio(1, 1).unwrap(),
            &ExponentVector::from_ints(&[2, 2]).unwrap(),
        )
        .unwrap();
        assert_eq!(p.p_s, int(2));
        assert!(p.varrho.is_zero());
        assert_eq!(p.q_sup(), int(1));
    }

    #[test]
    fn rejects_unit_exponent() {
        let r = heat_estimate_params(
            1,
            &SmoothnessIndex::from_ratio(1, 1).unwrap(),
            &ExponentVector::from_ints(&[1, 2]).unwrap(),
        );
        assert!(r.is_err());
    }

    proptest::proptest! {
        #[test]
        fn varrho_nonnegative_below_two(n in 1usize..6, sn in 1i64..12, a in 11i64..21, b in 11i64..21) {
            let s = SmoothnessIndex::from_ratio(sn, 4).unwrap();
            let mut entries = vec![(3i64, 1i64); s.ceil() + 1];
            entries[s.floor()] = (a, 10);
            entries[s.ceil()] = (b, 10);
            let p = heat_estimate_params(n, &s, &ExponentVector::from_ratios(&entries).unwrap()).unwrap();
            proptest::prop_assert!(!p.varrho.is_negative());
            proptest::prop_assert!(p.weighted_applicable);
            proptest::prop_assert_eq!(p.r_vec.len(), if s.is_integer() { s.ceil() + 1 } else { s.floor() + 2 });
        }
    }
}
