//! Lebesgue norms, Gagliardo seminorms and the nonuniform Sobolev norms built
//! from them, with a finite-vs-infinite classification of improper integrals.

mod classify;
mod estimate;
mod fourier;
mod gagliardo;
mod lp;
mod nonuniform;

pub use classify::classify_convergence;
pub use estimate::{
    ser_f64, Classification, ConvergenceThresholds, Level, QuadratureSpec, Scheme, SeminormEstimate,
};
pub use fourier::{hs_constant_inverse, hs_constant_inverse_closed, hs_seminorm_fourier, weighted_fourier_norm};
pub use gagliardo::{gagliardo_directional, gagliardo_full};
pub use lp::{grid_lp, lp_norm};
pub use nonuniform::{nonuniform_norm, NormComponent, NormReport};
