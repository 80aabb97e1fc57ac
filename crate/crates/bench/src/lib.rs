//! Shared fixtures for the localization benchmarks.

use quantred::geometry::{make_flag_manifold, ManifoldSpec};
use quantred::{RootDatum, Weight};

/// Flag manifold of `SU(3)` through `λ`, with its line bundle `L`.
pub fn a2_flag(lambda: [i64; 2]) -> ManifoldSpec {
    make_flag_manifold(&RootDatum::a2(), &Weight::new(lambda.to_vec()))
        .expect("regular dominant weight")
}

/// Flag manifold of `SU(2)` through `λ`.
pub fn su2_flag(lambda: i64) -> ManifoldSpec {
    make_flag_manifold(&RootDatum::su2(), &Weight::new(vec![lambda]))
        .expect("regular dominant weight")
}
