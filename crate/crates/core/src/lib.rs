//! Numerical and exact tooling for Sobolev spaces with a different Lebesgue
//! exponent at each derivative order.

pub mod error;
pub mod evolution;
pub mod index;

pub use error::{Error, Result};
pub use index::{Exponent, ExponentVector, Rational, SmoothnessIndex};
pub mod fields;
pub mod jet;
pub mod norms;
pub mod quad;
pub mod verify;

pub use fields::{Field, GridSpec, MultiIndex, SampledField, Spectrum};
