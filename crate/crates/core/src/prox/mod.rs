//! Convex test functions with exact proximal operators.
//!
//! Every instance knows a minimizer `x_star` and the optimal value `f_star`
//! exactly, so the performance measures are never estimated.

mod instance;
mod record;
mod smooth;

pub use instance::{catalog, ProxInstance, ProxKind};
pub use record::InstanceRecord;
pub use smooth::{SmoothInstance, SmoothKind};
