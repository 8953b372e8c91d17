//! Relaxed proximal point algorithm (RPPA) and long-step gradient descent.
//!
//! The crate provides:
//!
//! * [`math`]: dense vectors plus executable forms of the elementary
//!   identities used by the convergence proofs,
//! * [`prox`]: convex test functions with closed-form proximal operators and
//!   Moreau envelopes,
//! * [`schedule`]: constant, Teboulle–Vaisbourd and silver-family
//!   relaxation schedules,
//! * [`solver`]: RPPA and N-step GD drivers recording full traces,
//! * [`bounds`]: closed-form tight worst-case bounds,
//! * [`certify`]: worst-case instance construction, tightness reports and
//!   certificate identity checks,
//! * [`tables`]: CSV regeneration of the bound tables.

pub mod bounds;
pub mod certify;
pub mod error;
pub mod fixtures;
pub mod math;
pub mod prox;
pub mod schedule;
pub mod solver;
pub mod tables;

pub use error::{Error, Result};
pub use math::Vector;
