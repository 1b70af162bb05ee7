use std::fmt;

use serde::Serialize;

use super::exponent::{fmt_rational, Rational};

/// One evaluated comparison of a decision procedure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub criterion: String,
    pub holds: bool,
}

/// Ordered log of the comparisons a decision procedure evaluated.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Trace(pub Vec<TraceEntry>);

impl Trace {
    /// Records `holds` under `criterion` and hands it back, so comparisons can be
    /// logged inline: `if trace.check("kp_k < N", kp < n) { … }`.
    pub fn check(&mut self, criterion: impl Into<String>, holds: bool) -> bool {
        self.0.push(TraceEntry {
            criterion: criterion.into(),
            holds,
        });
        holds
    }

    pub fn entries(&self) -> &[TraceEntry] {
        &self.0
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{}: {}", e.criterion, e.holds)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EmbeddingCase {
    Subcritical,
    Critical,
    Supercritical,
    /// No theorem applies to the given exponents.
    Unknown,
}

/// An interval `[lo, hi]` of admissible Lebesgue exponents; `hi = None` means `[lo, ∞)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LqRange {
    pub lo: Rational,
    pub hi: Option<Rational>,
}

impl LqRange {
    pub fn contains(&self, q: &Rational) -> bool {
        q >= &self.lo && self.hi.as_ref().is_none_or(|h| q <= h)
    }
}

impl fmt::Display for LqRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.hi {
            Some(h) => write!(f, "[{}, {}]", fmt_rational(&self.lo), fmt_rational(h)),
            None => write!(f, "[{}, inf)", fmt_rational(&self.lo)),
        }
    }
}

impl Serialize for LqRange {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

/// Target `C_b^{n,λ}`. With `lambda_open` the embedding holds for every `λ' < λ`
/// rather than at `λ` itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Holder {
    pub n: usize,
    pub lambda: Rational,
    pub lambda_open: bool,
}

impl fmt::Display for Holder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lambda_open {
            write!(f, "C^{{{}, <{}}}", self.n, fmt_rational(&self.lambda))
        } else {
            write!(f, "C^{{{}, {}}}", self.n, fmt_rational(&self.lambda))
        }
    }
}

impl Serialize for Holder {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = ser.serialize_struct("Holder", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("lambda", &fmt_rational(&self.lambda))?;
        st.serialize_field("lambda_open", &self.lambda_open)?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingVerdict {
    pub case: EmbeddingCase,
    pub lq_range: Option<LqRange>,
    pub holder: Option<Holder>,
    /// The `C_b^{k−1, 1−N/p_k}` target, reported alongside `holder` when `p_k > N`.
    pub corollary_holder: Option<Holder>,
    pub trace: Trace,
}

impl EmbeddingVerdict {
    pub(crate) fn unknown(trace: Trace) -> Self {
        EmbeddingVerdict {
            case: EmbeddingCase::Unknown,
            lq_range: None,
            holder: None,
            corollary_holder: None,
            trace,
        }
    }
}

impl fmt::Display for EmbeddingVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.case)?;
        if let Some(r) = &self.lq_range {
            write!(f, " L^q, q in {r}")?;
        }
        if let Some(h) = &self.holder {
            write!(f, " {h}")?;
        }
        if let Some(h) = &self.corollary_holder {
            write!(f, " (also {h})")?;
        }
        Ok(())
    }
}
