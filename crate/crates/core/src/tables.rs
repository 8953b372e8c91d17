//! Bound tables: formulas on an `N` grid for every schedule kind, and the
//! right-silver worst-case runs beside the external reference values.

use serde::Serialize;

use crate::bounds::{lower_bound, upper_bound, Measure};
use crate::certify::tightness_report;
use crate::error::Result;
use crate::fixtures::{table4_external, EXTERNAL_TAG};
use crate::schedule::Schedule;

/// Lengths used for the constant and TV rows.
pub const TABLE1_LENGTHS: [usize; 12] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 100, 1000];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Row {
    pub measure: Measure,
    pub schedule: String,
    pub n: usize,
    pub upper_bound: f64,
    pub lower_bound: Option<f64>,
}

impl Table1Row {
    pub const CSV_HEADER: &'static str = "measure,schedule,N,upper_bound,lower_bound";

    pub fn csv_row(&self) -> String {
        let lower = self.lower_bound.map(|v| v.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{}",
            self.measure, self.schedule, self.n, self.upper_bound, lower
        )
    }
}

fn schedule_name(s: &Schedule) -> String {
    match s.kind() {
        crate::schedule::ScheduleKind::Constant { alpha: 1.0 } => "ppa".into(),
        crate::schedule::ScheduleKind::Constant { .. } => "constant_sqrt2".into(),
        kind => kind.name().into(),
    }
}

fn rows_for(schedule: &Schedule, lambda: f64, out: &mut Vec<Table1Row>) {
    for measure in Measure::ALL {
        if let Ok(upper) = upper_bound(schedule, lambda, measure) {
            out.push(Table1Row {
                measure,
                schedule: schedule_name(schedule),
                n: schedule.len(),
                upper_bound: upper,
                lower_bound: lower_bound(schedule, lambda, measure).ok(),
            });
        }
    }
}

/// Every proven RPPA bound at `lambda` on the default grids.
pub fn table1(lambda: f64) -> Result<Vec<Table1Row>> {
    let mut out = Vec::new();
    for alpha in [1.0, std::f64::consts::SQRT_2] {
        for n in TABLE1_LENGTHS {
            rows_for(&Schedule::constant(alpha, n)?, lambda, &mut out);
        }
    }
    for n in TABLE1_LENGTHS {
        rows_for(&Schedule::tv(n)?, lambda, &mut out);
    }
    for m in 1..=10 {
        rows_for(&Schedule::silver(m)?, lambda, &mut out);
    }
    for m in 0..=10 {
        rows_for(&Schedule::right_silver(m)?, lambda, &mut out);
        rows_for(&Schedule::left_silver(m)?, lambda, &mut out);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table4Row {
    pub m: u32,
    pub n: usize,
    pub achieved: f64,
    pub bound: f64,
    pub external: Option<f64>,
    pub source: &'static str,
}

impl Table4Row {
    pub const CSV_HEADER: &'static str = "m,N,achieved,bound,external,source";

    pub fn csv_row(&self) -> String {
        let ext = self.external.map(|v| v.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{}",
            self.m, self.n, self.achieved, self.bound, ext, self.source
        )
    }
}

/// Right-silver worst-case objective ratio for `m = 0..=3` at `lambda`.
/// External values are reported only at `lambda = 1`, where they apply.
pub fn table4(lambda: f64) -> Result<Vec<Table4Row>> {
    (0..=3)
        .map(|m| {
            let s = Schedule::right_silver(m)?;
            let r = tightness_report(&s, lambda, Measure::FvalOverDistSq)?;
            Ok(Table4Row {
                m,
                n: s.len(),
                achieved: r.achieved,
                bound: r.bound,
                external: if lambda == 1.0 { table4_external(m) } else { None },
                source: EXTERNAL_TAG,
            })
        })
        .collect()
}
