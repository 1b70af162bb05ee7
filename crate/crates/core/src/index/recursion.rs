use num_traits::{One, Signed};
use serde::Serialize;

use super::exponent::{fmt_rational, int, rat, Exponent, Rational};
use crate::error::{precondition, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecursionStep {
    pub r: Rational,
    pub q: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecursionTrace {
    /// `(r_n, q_n)` for `n = 1, 2, …`; `q_0 = p_0` is not repeated here.
    pub steps: Vec<RecursionStep>,
    pub fixed_point: Rational,
    /// Whether the tolerance `|q_n − q̃| < 2^{−20}` was met before `max_steps`.
    pub converged: bool,
}

impl Serialize for RecursionTrace {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let steps: Vec<(String, String)> = self
            .steps
            .iter()
            .map(|s| (fmt_rational(&s.r), fmt_rational(&s.q)))
            .collect();
        let mut st = ser.serialize_struct("RecursionTrace", 3)?;
        st.serialize_field("steps", &steps)?;
        st.serialize_field("fixed_point", &fmt_rational(&self.fixed_point))?;
        st.serialize_field("converged", &self.converged)?;
        st.end()
    }
}

/// Iterates `r_n = q_{n−1}/p_1' + 1`, `q_n = r_n N/(N−1)` from `q_0 = p_0`.
///
/// The map is affine with slope `N(p_1−1)/((N−1)p_1) < 1`, so `q_n` decreases
/// geometrically onto `q̃ = Np_1/(N−p_1)`.
pub fn bootstrap_recursion(n: usize, p0: &Exponent, p1: &Exponent, max_steps: usize) -> Result<RecursionTrace> {
    let (Some(p0), Some(p1)) = (p0.finite(), p1.finite()) else {
        return precondition("p_0, p_1 < ∞");
    };
    let nr = int(n as i64);
    let one = Rational::one();
    if !(p1 > &one && p1 < &nr) {
        return precondition(format!("1 < p_1 < N (p_1 = {}, N = {n})", fmt_rational(p1)));
    }
    if p1.recip() <= p0.recip() + nr.recip() {
        return precondition("1/p_1 > 1/p_0 + 1/N");
    }
    let p1_conj = p1 / (p1 - &one);
    let fixed_point = (p1.recip() - nr.recip()).recip();
    let factor = &nr / (&nr - &one);
    let tol = rat(1, 1 << 20);

    let mut steps = Vec::new();
    let mut q = p0.clone();
    let mut converged = false;
    while steps.len() < max_steps {
        let r = &q / &p1_conj + &one;
        q = &r * &factor;
        steps.push(RecursionStep { r, q: q.clone() });
        if (&q - &fixed_point).abs() < tol {
            converged = true;
            break;
        }
    }
    Ok(RecursionTrace {
        steps,
        fixed_point,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::embedding::sobolev_conjugate;

    #[test]
    fn first_step_and_fixed_point() {
        let t = bootstrap_recursion(
            3,
            &Exponent::from_int(10).unwrap(),
            &Exponent::from_ratio(3, 2).unwrap(),
            200,
        )
        .unwrap();
        assert_eq!(t.steps[0].r, rat(13, 3));
        assert_eq!(t.steps[0].q, rat(13, 2));
        assert_eq!(t.fixed_point, int(3));
        assert!(t.converged);

        let t = bootstrap_recursion(4, &Exponent::from_int(100).unwrap(), &Exponent::from_int(2).unwrap(), 5)
            .unwrap();
        assert_eq!(t.fixed_point, int(4));
        assert_eq!(t.steps.len(), 5);
    }

    #[test]
    fn rejects_inadmissible() {
        let two = Exponent::from_int(2).unwrap();
        assert!(bootstrap_recursion(2, &two, &two, 10).is_err());
        assert!(bootstrap_recursion(4, &two, &two, 10).is_err());
        assert!(bootstrap_recursion(3, &Exponent::Infinity, &two, 10).is_err());
    }

    proptest::proptest! {
        #[test]
        fn monotone_convergence(n in 2usize..7, a in 11i64..60, d in 10i64..20, p0 in 1i64..400) {
            let p1 = rat(a, d);
            let nr = int(n as i64);
            proptest::prop_assume!(p1 > int(1) && p1 < nr);
            let p0 = int(p0);
            proptest::prop_assume!(p1.recip() > p0.recip() + nr.recip());
            let p1e = Exponent::Finite(p1.clone());
            let t = bootstrap_recursion(n, &Exponent::Finite(p0.clone()), &p1e, 400).unwrap();
            let mut prev = p0;
            for st in &t.steps {
                proptest::prop_assert_eq!(&st.q, &(&st.r * &nr / (&nr - int(1))));
                proptest::prop_assert!(st.q < prev && st.q > t.fixed_point);
                prev = st.q.clone();
            }
            proptest::prop_assert_eq!(p1.recip(), t.fixed_point.recip() + nr.recip());
            let conj = sobolev_conjugate(n, &p1e, 1).unwrap();
            proptest::prop_assert_eq!(conj.finite().unwrap(), &t.fixed_point);
        }
    }
}
