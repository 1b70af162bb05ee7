//! Shared fixtures for the benchmarks.

use nusob_core::fields::{Family, Field, GridSpec};

pub fn grid_1d(points: usize) -> GridSpec {
    GridSpec::new(1, 16.0, points).expect("power-of-two grid")
}

pub fn rational_decay(delta: f64) -> Field {
    Field::analytic(1, Family::RationalDecay { delta }).expect("valid delta")
}
