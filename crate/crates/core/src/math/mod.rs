//! Dense vector arithmetic and the elementary identities behind the
//! convergence proofs, evaluated numerically.

mod identities;
mod sampling;
mod vector;

pub use identities::{
    convex_combination_identity, simplify_identity_1, simplify_identity_2, three_point_identity, tv_implication_check,
    young_bounds, IdentityResidual, TvOutcome, YoungOutcome,
};
pub use sampling::{gaussian_vector, seeded_rng, SampleRng};
pub use vector::Vector;

/// Absolute slack for inequalities that are exact in exact arithmetic,
/// scaled by the magnitudes involved.
pub fn tol(scale: f64) -> f64 {
    1e-12 * scale.abs().max(1.0)
}

/// `|a - b| / max(1, |a|, |b|)`.
pub fn rel_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}
