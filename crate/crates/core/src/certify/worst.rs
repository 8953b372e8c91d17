use serde::Serialize;

use crate::bounds::{tight_pairs, upper_bound, upper_gd_silver, Measure};
use crate::error::{Error, Result};
use crate::math::{tol, Vector};
use crate::prox::{ProxInstance, SmoothInstance};
use crate::schedule::{Schedule, ScheduleKind};
use crate::solver::{gd_measures, measures, run_gd, run_rppa, Trace};

/// Dimension used by the worst-case constructions.
pub const WORST_DIM: usize = 2;

/// Scaled-norm instance `eta |.|` and `x0 = e1` attaining the RPPA lower
/// bound for `measure`.
pub fn worst_instance(schedule: &Schedule, lambda: f64, measure: Measure) -> Result<(ProxInstance, Vector)> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::invalid(
            "lambda",
            format!("must be positive and finite, got {lambda}"),
        ));
    }
    let base = lambda * (1.0 + schedule.total());
    let eta = match measure {
        Measure::SubgradOverDist | Measure::SubgradSqOverFval => 1.0 / base,
        Measure::FvalOverDistSq => 1.0 / (2.0 * base),
        Measure::CompositeOverDistSq => {
            return Err(Error::UnsupportedMeasure {
                kind: schedule.kind().name().to_string(),
                measure: measure.name().to_string(),
            })
        }
    };
    Ok((ProxInstance::scaled_norm(eta, WORST_DIM)?, Vector::unit(WORST_DIM, 0)))
}

/// Huber instance and `x0 = e1` attaining the GD bound for `pi^(m)`.
pub fn worst_instance_gd_huber(m: u32, lipschitz: f64, measure: Measure) -> Result<(SmoothInstance, Vector)> {
    let s = Schedule::silver(m)?.total();
    let eta = match measure {
        Measure::FvalOverDistSq => lipschitz / (2.0 * s + 1.0),
        Measure::SubgradOverDist => lipschitz / (1.0 + s),
        other => {
            return Err(Error::UnsupportedMeasure {
                kind: "silver".into(),
                measure: other.name().into(),
            })
        }
    };
    Ok((
        SmoothInstance::huber(eta, lipschitz, WORST_DIM)?,
        Vector::unit(WORST_DIM, 0),
    ))
}

/// Achieved worst-case ratio against the closed-form bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TightnessReport {
    pub kind: String,
    pub measure: Measure,
    /// `N` for constant and TV schedules, `m` for the silver family.
    pub param: usize,
    /// `lambda` for RPPA, `L` for GD.
    pub scale: f64,
    pub achieved: f64,
    pub bound: f64,
    /// `|achieved - bound| / bound`.
    pub rel_gap: f64,
}

impl TightnessReport {
    pub const CSV_HEADER: &'static str = "kind,measure,param,lambda,achieved,bound,rel_gap";

    fn new(kind: &str, measure: Measure, param: usize, scale: f64, achieved: f64, bound: f64) -> Self {
        TightnessReport {
            kind: kind.to_string(),
            measure,
            param,
            scale,
            achieved,
            bound,
            rel_gap: (achieved - bound).abs() / bound,
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.kind, self.measure, self.param, self.scale, self.achieved, self.bound, self.rel_gap
        )
    }

    /// Tight to `rel_tol` and never above the bound by more than `1e-9`.
    pub fn passes(&self, rel_tol: f64) -> bool {
        self.rel_gap <= rel_tol && self.achieved <= self.bound * (1.0 + 1e-9)
    }
}

fn schedule_param(schedule: &Schedule) -> usize {
    match schedule.kind() {
        ScheduleKind::Silver { m } | ScheduleKind::RightSilver { m } | ScheduleKind::LeftSilver { m } => m as usize,
        _ => schedule.len(),
    }
}

/// Runs RPPA on the worst instance for a tight `(schedule kind, measure)`
/// pair and compares with the upper bound.
pub fn tightness_report(schedule: &Schedule, lambda: f64, measure: Measure) -> Result<TightnessReport> {
    let family = schedule.kind().name();
    if !tight_pairs().contains(&(family, measure)) {
        return Err(Error::UnsupportedMeasure {
            kind: family.to_string(),
            measure: measure.name().to_string(),
        });
    }
    let bound = upper_bound(schedule, lambda, measure)?;
    let (inst, x0) = worst_instance(schedule, lambda, measure)?;
    let trace = run_rppa(&inst, lambda, schedule, &x0)?;
    let report = measures(&trace, &inst)?;
    let achieved = report
        .ratio(measure)
        .ok_or_else(|| Error::invalid("x0", "worst-case start has a zero denominator"))?;
    Ok(TightnessReport::new(
        family,
        measure,
        schedule_param(schedule),
        lambda,
        achieved,
        bound,
    ))
}

/// First step whose iterate leaves the linear branch of the Huber function.
pub fn first_exit_from_linear_branch(trace: &Trace, instance: &SmoothInstance) -> Option<usize> {
    let slack = tol(trace.x0().norm());
    trace.xs.iter().position(|x| !instance.in_linear_branch(x, slack))
}

/// Runs GD with `pi^(m)` on the Huber worst instance and compares with the
/// bound, failing if any iterate leaves the linear branch.
pub fn tightness_report_gd(m: u32, lipschitz: f64, measure: Measure) -> Result<TightnessReport> {
    let bound = upper_gd_silver(m, lipschitz, measure)?;
    let (inst, x0) = worst_instance_gd_huber(m, lipschitz, measure)?;
    let schedule = Schedule::silver(m)?;
    let trace = run_gd(&inst, &schedule, &x0)?;
    if let Some(step) = first_exit_from_linear_branch(&trace, &inst) {
        return Err(Error::LeftLinearBranch { step });
    }
    let report = gd_measures(&trace, &inst)?;
    let achieved = report
        .ratio(measure)
        .ok_or_else(|| Error::invalid("x0", "worst-case start has a zero denominator"))?;
    Ok(TightnessReport::new(
        "gd_silver",
        measure,
        m as usize,
        lipschitz,
        achieved,
        bound,
    ))
}
