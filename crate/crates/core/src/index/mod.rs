//! Exact decision procedures on exponents. Nothing in here touches floating point.

pub mod criteria;
pub mod embedding;
pub mod exponent;
pub mod heat;
pub mod recursion;
pub mod schrodinger;
pub mod verdict;

pub use criteria::{
    example_membership, fractional_density_criterion, membership_margin, special_density_criterion,
    DensityVerdict, Membership,
};
pub use embedding::{
    corollary_chain, fractional_embedding_verdict, integer_embedding_verdict, sobolev_conjugate,
};
pub use exponent::{fmt_rational, parse_rational, Exponent, ExponentVector, Rational, SmoothnessIndex};
pub use heat::{heat_estimate_params, HeatEstimateParams};
pub use recursion::{bootstrap_recursion, RecursionStep, RecursionTrace};
pub use schrodinger::{
    beta_s, known_hs_threshold, schrodinger_criterion, ConvergenceVerdict, HsThreshold,
    SchrodingerVerdict,
};
pub use verdict::{EmbeddingCase, EmbeddingVerdict, Holder, LqRange, Trace, TraceEntry};
