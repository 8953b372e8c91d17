use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{upper_bound, upper_bound_gd, Measure};
use crate::error::Result;
use crate::math::{gaussian_vector, seeded_rng, tol, Vector};
use crate::prox::{ProxInstance, SmoothInstance};
use crate::schedule::Schedule;
use crate::solver::{gd_measures, measures, run_gd, run_rppa, MeasureReport};

/// One `(instance, schedule, scale, start, measure)` evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub instance: String,
    pub schedule: String,
    /// `lambda` for RPPA rows, `L` for GD rows.
    pub scale: f64,
    pub start: usize,
    pub measure: Measure,
    pub achieved: f64,
    pub bound: f64,
}

impl SweepRow {
    pub const CSV_HEADER: &'static str = "instance,schedule,lambda,start,measure,achieved,bound,ok";

    pub fn ok(&self) -> bool {
        self.achieved <= self.bound * (1.0 + 1e-9)
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.instance,
            self.schedule,
            self.scale,
            self.start,
            self.measure,
            self.achieved,
            self.bound,
            self.ok()
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn violations(&self) -> Vec<&SweepRow> {
        self.rows.iter().filter(|r| !r.ok()).collect()
    }
}

/// Deterministic starting points for `instance`: the minimizer, a shifted
/// point, and the prox of a seeded Gaussian point (always in the domain).
pub fn default_starts(dim: usize, x_star: &Vector, prox: impl Fn(&Vector) -> Result<Vector>) -> Result<Vec<Vector>> {
    let mut rng = seeded_rng(dim as u64);
    let shifted = x_star.axpy(3.0, &Vector::unit(dim, 0));
    let far = gaussian_vector(&mut rng, dim, 2.0);
    let inside = prox(&far)?;
    Ok(vec![x_star.clone(), shifted, far, inside])
}

/// Ratio of numerator to denominator, with `0/0 = 0` for starts at the
/// minimizer and `x/0 = inf` otherwise.
fn achieved(report: &MeasureReport, measure: Measure) -> Option<f64> {
    let (num, den) = match measure {
        Measure::FvalOverDistSq => (report.fval_residual, report.init_dist_sq),
        Measure::SubgradOverDist => (report.subgrad_norm, report.init_dist_sq.sqrt()),
        Measure::SubgradSqOverFval => (report.subgrad_norm * report.subgrad_norm, report.init_fval_gap),
        Measure::CompositeOverDistSq => (report.composite?, report.init_dist_sq),
    };
    if den > 0.0 {
        Some(num / den)
    } else if num <= tol(0.0) {
        Some(0.0)
    } else {
        Some(f64::INFINITY)
    }
}

/// Checks every proven RPPA upper bound on every combination. Rows are
/// returned in input order regardless of parallel execution.
pub fn upper_bound_sweep(instances: &[ProxInstance], schedules: &[Schedule], lambdas: &[f64]) -> Result<SweepReport> {
    let mut jobs = Vec::new();
    for inst in instances {
        let starts = default_starts(inst.dim(), inst.x_star(), |x| inst.prox(x, 1.0))?;
        for sched in schedules {
            for &lambda in lambdas {
                for (k, x0) in starts.iter().enumerate() {
                    jobs.push((inst, sched, lambda, k, x0.clone()));
                }
            }
        }
    }
    let rows: Vec<Vec<SweepRow>> = jobs
        .par_iter()
        .map(|(inst, sched, lambda, k, x0)| -> Result<Vec<SweepRow>> {
            let trace = run_rppa(inst, *lambda, sched, x0)?;
            let report = measures(&trace, inst)?;
            let mut out = Vec::new();
            for measure in Measure::ALL {
                let Ok(bound) = upper_bound(sched, *lambda, measure) else {
                    continue;
                };
                if let Some(value) = achieved(&report, measure) {
                    out.push(SweepRow {
                        instance: inst.label(),
                        schedule: sched.label(),
                        scale: *lambda,
                        start: *k,
                        measure,
                        achieved: value,
                        bound,
                    });
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(SweepReport {
        rows: rows.into_iter().flatten().collect(),
    })
}

/// Checks the GD bounds of silver schedules on smooth instances.
pub fn gd_upper_bound_sweep(instances: &[SmoothInstance], orders: &[u32]) -> Result<SweepReport> {
    let mut jobs = Vec::new();
    for inst in instances {
        let starts = default_starts(inst.dim(), inst.x_star(), |x| Ok(x.clone()))?;
        for &m in orders {
            let sched = Schedule::silver(m)?;
            for (k, x0) in starts.iter().enumerate() {
                jobs.push((inst, sched.clone(), k, x0.clone()));
            }
        }
    }
    let rows: Vec<Vec<SweepRow>> = jobs
        .par_iter()
        .map(|(inst, sched, k, x0)| -> Result<Vec<SweepRow>> {
            let trace = run_gd(inst, sched, x0)?;
            let report = gd_measures(&trace, inst)?;
            let mut out = Vec::new();
            for measure in [Measure::FvalOverDistSq, Measure::SubgradOverDist] {
                let bound = upper_bound_gd(sched, inst.lipschitz(), measure)?;
                if let Some(value) = achieved(&report, measure) {
                    out.push(SweepRow {
                        instance: inst.label(),
                        schedule: sched.label(),
                        scale: inst.lipschitz(),
                        start: *k,
                        measure,
                        achieved: value,
                        bound,
                    });
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(SweepReport {
        rows: rows.into_iter().flatten().collect(),
    })
}

/// The default sweep schedules: every kind at a few lengths.
pub fn default_sweep_schedules() -> Vec<Schedule> {
    let mut out = vec![
        Schedule::constant(1.0, 10).expect("valid"),
        Schedule::constant(std::f64::consts::SQRT_2, 10).expect("valid"),
        Schedule::constant(0.5, 25).expect("valid"),
        Schedule::tv(31).expect("valid"),
        Schedule::tv(100).expect("valid"),
    ];
    for m in [1, 3, 5] {
        out.push(Schedule::silver(m).expect("valid"));
        out.push(Schedule::right_silver(m).expect("valid"));
        out.push(Schedule::left_silver(m).expect("valid"));
    }
    out.push(Schedule::right_silver(0).expect("valid"));
    out.push(Schedule::left_silver(0).expect("valid"));
    out
}
