//! Exact exponents: Lebesgue indices `p ∈ [1, ∞]` and smoothness indices `s > 0`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Builds a rational from a machine-sized numerator and denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"a/b"`, an integer, or a finite decimal string (`"0.25"`, `"1.5e-1"`)
/// into an exact rational. Decimals convert through a power-of-ten denominator,
/// so `"0.3"` is exactly `3/10`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::InvalidParameter(format!("cannot parse {t:?} as a rational"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("0{whole}{frac}").parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Rational::from_integer(all);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -value } else { value })
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Renders a rational as `num/den` (or `num` when integral).
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A Lebesgue exponent. Finite values are exact rationals `≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Exponent {
    Finite(Rational),
    Infinity,
}

impl Exponent {
    pub fn new(value: Rational) -> Result<Self> {
        if value < Rational::one() {
            return Err(Error::InvalidParameter(format!(
                "exponent {} < 1",
                fmt_rational(&value)
            )));
        }
        Ok(Exponent::Finite(value))
    }

    pub fn from_int(n: i64) -> Result<Self> {
        Self::new(int(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Result<Self> {
        Self::new(rat(num, den))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Exponent::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Exponent::Finite(r) => Some(r),
            Exponent::Infinity => None,
        }
    }

    /// `1/p`, with `1/∞ = 0`.
    pub fn reciprocal(&self) -> Rational {
        match self {
            Exponent::Finite(r) => r.recip(),
            Exponent::Infinity => Rational::zero(),
        }
    }

    /// Hölder conjugate `p' = p/(p−1)`; `1' = ∞` and `∞' = 1`.
    pub fn conjugate(&self) -> Exponent {
        match self {
            Exponent::Infinity => Exponent::Finite(Rational::one()),
            Exponent::Finite(p) if p.is_one() => Exponent::Infinity,
            Exponent::Finite(p) => Exponent::Finite(p / (p - Rational::one())),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Exponent::Finite(r) => to_f64(r),
            Exponent::Infinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(r) => f.write_str(&fmt_rational(r)),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            t => Exponent::new(parse_rational(t)?),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

/// The exponent vector `(p_0, …, p_k)`; entry `l` governs derivatives of order `l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentVector(Vec<Exponent>);

impl ExponentVector {
    pub fn new(entries: Vec<Exponent>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter("empty exponent vector".into()));
        }
        Ok(ExponentVector(entries))
    }

    /// Convenience constructor from `(num, den)` pairs.
    pub fn from_ratios(entries: &[(i64, i64)]) -> Result<Self> {
        entries
            .iter()
            .map(|&(n, d)| Exponent::from_ratio(n, d))
            .collect::<Result<Vec<_>>>()
            .and_then(Self::new)
    }

    pub fn from_ints(entries: &[i64]) -> Result<Self> {
        entries
            .iter()
            .map(|&n| Exponent::from_int(n))
            .collect::<Result<Vec<_>>>()
            .and_then(Self::new)
    }

    /// The top order `k` (length minus one).
    pub fn k(&self) -> usize {
        self.0.len() - 1
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> &Exponent {
        &self.0[i]
    }

    pub fn entries(&self) -> &[Exponent] {
        &self.0
    }

    pub fn last(&self) -> &Exponent {
        &self.0[self.0.len() - 1]
    }

    /// Finite entries as rationals; fails if any entry is `∞`.
    pub fn finite_entries(&self) -> Result<Vec<Rational>> {
        self.0
            .iter()
            .enumerate()
            .map(|(i, p)| {
                p.finite().cloned().ok_or_else(|| {
                    Error::Precondition(format!("p_{i} must be finite"))
                })
            })
            .collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(Exponent::to_f64).collect()
    }

    /// Appends entries, e.g. `(r⃗, 2)`.
    pub fn extended(&self, extra: &[Exponent]) -> ExponentVector {
        let mut v = self.0.clone();
        v.extend_from_slice(extra);
        ExponentVector(v)
    }

    pub fn truncated(&self, len: usize) -> ExponentVector {
        ExponentVector(self.0[..len].to_vec())
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for ExponentVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .map(str::parse)
            .collect::<Result<Vec<Exponent>>>()
            .and_then(Self::new)
    }
}

impl Serialize for ExponentVector {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_seq(self.0.iter())
    }
}

/// A smoothness index `s > 0` with its integer part, ceiling and fractional part `ν_s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothnessIndex {
    s: Rational,
    floor: BigInt,
    ceil: BigInt,
    nu: Rational,
}

impl SmoothnessIndex {
    pub fn new(s: Rational) -> Result<Self> {
        if !s.is_positive() {
            return Err(Error::InvalidParameter(format!(
                "smoothness {} must be positive",
                fmt_rational(&s)
            )));
        }
        let floor = s.numer().div_floor(s.denom());
        let nu = &s - Rational::from_integer(floor.clone());
        let ceil = if nu.is_zero() {
            floor.clone()
        } else {
            &floor + BigInt::one()
        };
        Ok(SmoothnessIndex { s, floor, ceil, nu })
    }

    pub fn from_ratio(num: i64, den: i64) -> Result<Self> {
        Self::new(rat(num, den))
    }

    pub fn value(&self) -> &Rational {
        &self.s
    }

    pub fn nu(&self) -> &Rational {
        &self.nu
    }

    pub fn floor(&self) -> usize {
        self.floor.to_usize().expect("smoothness index fits in usize")
    }

    pub fn ceil(&self) -> usize {
        self.ceil.to_usize().expect("smoothness index fits in usize")
    }

    pub fn is_integer(&self) -> bool {
        self.nu.is_zero()
    }

    /// `s + n`.
    pub fn shifted(&self, n: i64) -> SmoothnessIndex {
        SmoothnessIndex::new(&self.s + int(n)).expect("shift keeps s positive")
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.s)
    }
}

impl fmt::Display for SmoothnessIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_rational(&self.s))
    }
}

impl FromStr for SmoothnessIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SmoothnessIndex::new(parse_rational(s)?)
    }
}

impl Serialize for SmoothnessIndex {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(parse_rational("0.3").unwrap(), rat(3, 10));
        assert_eq!(parse_rational("4/5").unwrap(), rat(4, 5));
        assert_eq!(parse_rational("-1.25").unwrap(), rat(-5, 4));
        assert_eq!(parse_rational("2.5e-1").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn conjugation_endpoints() {
        let one = Exponent::from_int(1).unwrap();
        assert_eq!(one.conjugate(), Exponent::Infinity);
        assert_eq!(Exponent::Infinity.conjugate(), one);
        let p = Exponent::from_ratio(3, 2).unwrap();
        assert_eq!(p.conjugate(), Exponent::from_int(3).unwrap());
        assert!(Exponent::from_ratio(1, 2).is_err());
    }

    #[test]
    fn smoothness_parts() {
        let s = SmoothnessIndex::from_ratio(3, 2).unwrap();
        assert_eq!((s.floor(), s.ceil()), (1, 2));
        assert_eq!(s.nu(), &rat(1, 2));
        let s = SmoothnessIndex::from_ratio(2, 1).unwrap();
        assert_eq!((s.floor(), s.ceil()), (2, 2));
        assert!(s.nu().is_zero());
        assert!(SmoothnessIndex::from_ratio(0, 1).is_err());
    }

    proptest::proptest! {
        #[test]
        fn conjugate_is_involution(n in 2i64..400, d in 1i64..200) {
            proptest::prop_assume!(n > d);
            let p = Exponent::from_ratio(n, d).unwrap();
            proptest::prop_assert_eq!(p.conjugate().conjugate(), p);
        }

        #[test]
        fn smoothness_invariants(n in 1i64..1000, d in 1i64..50) {
            let s = SmoothnessIndex::from_ratio(n, d).unwrap();
            proptest::prop_assert!(!s.nu().is_negative() && s.nu() < &Rational::one());
            if s.is_integer() {
                proptest::prop_assert_eq!(s.floor(), s.ceil());
            } else {
                proptest::prop_assert_eq!(s.floor() + 1, s.ceil());
            }
        }
    }
}
