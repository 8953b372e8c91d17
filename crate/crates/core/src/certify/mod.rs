//! Worst-case constructions, tightness reports, certificate identities and
//! the named invariant suites.

mod lemmas;
mod matrix;
mod qp;
mod random;
mod suites;
mod sweep;
mod worst;

pub use lemmas::{basic_inequalities, constant_schedule_properties, InequalityStat};
pub use matrix::{
    build_certificate_matrix, certificate_holds, gd_certificate_check, left_silver_scaled_check, p_value, q_value,
    rppa_certificate_check, CertificateMatrix, MAX_MATRIX_M,
};
pub use qp::{qp_equivalence_check, qp_table, QpTable};
pub use random::{random_prox_instance, random_smooth_instance};
pub use suites::{run_suite, CheckSummary, Suite};
pub use sweep::{
    default_starts, default_sweep_schedules, gd_upper_bound_sweep, upper_bound_sweep, SweepReport, SweepRow,
};
pub use worst::{
    first_exit_from_linear_branch, tightness_report, tightness_report_gd, worst_instance, worst_instance_gd_huber,
    TightnessReport, WORST_DIM,
};
