//! Published reference values.
//!
//! The searched schedules and their bounds come from an external global
//! stepsize search. They are not computed here: the table command echoes
//! them and tests compare against them only for consistency. The printed
//! silver values are the library's own outputs rounded to six decimals.

#![allow(clippy::approx_constant)]

/// Marker printed next to externally sourced values.
pub const EXTERNAL_TAG: &str = "external";

/// Tight objective bound at `lambda = 1` for the searched schedule of length
/// `N = 2^m`, `m = 0..=3`.
pub const TABLE4_EXTERNAL_FVAL: [(u32, f64); 4] = [(0, 0.095492), (1, 0.054900), (2, 0.028429), (3, 0.013422)];

/// Searched schedules for the subgradient measure, keyed by `N`.
pub const GD_DIST_SCHEDULES: [(usize, &[f64]); 6] = [
    (1, &[1.414334]),
    (2, &[1.600519, 1.414482]),
    (3, &[1.414745, 2.000451, 1.414115]),
    (4, &[1.414214, 1.601232, 2.260578, 1.414214]),
    (
        7,
        &[1.414402, 2.000943, 1.413279, 3.411508, 1.413362, 2.000698, 1.414120],
    ),
    (
        8,
        &[
            1.414215, 2.000003, 1.414214, 3.754383, 1.414213, 1.601232, 2.260578, 1.414214,
        ],
    ),
];

/// Searched schedules for the objective measure, keyed by `N`.
pub const FVAL_DIST_SCHEDULES: [(usize, &[f64]); 6] = [
    (1, &[1.618035]),
    (2, &[1.515086, 2.038664]),
    (3, &[1.414211, 1.601232, 2.565298]),
    (4, &[1.414214, 2.0, 1.414213, 2.965447]),
    (
        7,
        &[1.414214, 1.601232, 3.989651, 1.414214, 2.745299, 1.515087, 2.038664],
    ),
    (
        8,
        &[1.414214, 2.0, 1.414214, 5.004706, 1.414214, 2.0, 1.414214, 2.965447],
    ),
];

/// Printed silver schedules `pi^(m)` for `m = 1..=3`.
pub const SILVER_PRINTED: [(u32, &[f64]); 3] = [
    (1, &[1.414214]),
    (2, &[1.414214, 2.0, 1.414214]),
    (3, &[1.414214, 2.0, 1.414214, 3.414214, 1.414214, 2.0, 1.414214]),
];

/// Printed right silver schedules for `m = 0..=3`.
pub const RIGHT_SILVER_PRINTED: [(u32, &[f64]); 4] = [
    (0, &[1.618034]),
    (1, &[1.414214, 2.132242]),
    (2, &[1.414214, 2.0, 1.414214, 2.965447]),
    (
        3,
        &[1.414214, 2.0, 1.414214, 3.414214, 1.414214, 2.0, 1.414214, 4.284319],
    ),
];

/// Printed right silver objective bounds at `lambda = 1`, `m = 0..=3`.
pub const TABLE4_RIGHT_SILVER: [(u32, f64); 4] = [(0, 0.095492), (1, 0.054988), (2, 0.028429), (3, 0.013620)];

pub fn table4_external(m: u32) -> Option<f64> {
    TABLE4_EXTERNAL_FVAL.iter().find(|(k, _)| *k == m).map(|(_, v)| *v)
}
