use serde::Serialize;

use crate::error::{Error, Result};
use crate::math::tol;
use crate::prox::ProxInstance;
use crate::schedule::ScheduleKind;
use crate::solver::Trace;

/// Tally of one inequality over a set of evaluations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityStat {
    pub name: &'static str,
    pub checked: usize,
    pub violations: usize,
    /// Smallest slack divided by `max(1, scale)`; negative means violated.
    pub worst: f64,
}

impl InequalityStat {
    pub fn new(name: &'static str) -> Self {
        InequalityStat {
            name,
            checked: 0,
            violations: 0,
            worst: f64::INFINITY,
        }
    }

    /// Records `slack >= 0` up to [`tol`]`(scale)`.
    pub fn record(&mut self, slack: f64, scale: f64) {
        self.checked += 1;
        if slack < -tol(scale) || slack.is_nan() {
            self.violations += 1;
        }
        self.worst = self.worst.min(slack / scale.abs().max(1.0));
    }

    pub fn merge(&mut self, other: &InequalityStat) {
        self.checked += other.checked;
        self.violations += other.violations;
        self.worst = self.worst.min(other.worst);
    }
}

fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m: f64, v| m.max(v.abs()))
}

fn rppa_parts(trace: &Trace) -> Result<f64> {
    trace
        .lambda
        .ok_or_else(|| Error::invalid("trace", "lemma checks need an RPPA trace"))
}

/// The three per-step inequalities valid for any positive schedule, plus the
/// equality part of the third.
pub fn basic_inequalities(trace: &Trace, instance: &ProxInstance) -> Result<[InequalityStat; 4]> {
    let lambda = rppa_parts(trace)?;
    let mut s1 = InequalityStat::new("lem_basic_1");
    let mut s2 = InequalityStat::new("lem_basic_2");
    let mut s3 = InequalityStat::new("lem_basic_3");
    let mut s3e = InequalityStat::new("lem_basic_3_identity");
    let (xs, zs, f) = (&trace.xs, &trace.zs, &trace.fvals);
    let x_star = instance.x_star();
    for (k, &a) in trace.schedule.steps().iter().enumerate() {
        let gk = zs[k].dist_sq(&xs[k]);
        let d_next = xs[k + 1].dist_sq(x_star);
        let d_now = xs[k].dist_sq(x_star);
        let t1 = (d_next - d_now) / (2.0 * lambda * a);
        let t2 = (2.0 - a) / (2.0 * lambda) * gk;
        let rhs = f[k] + t1 + t2;
        s1.record(
            instance.f_star() - rhs,
            max_abs(&[
                instance.f_star(),
                f[k],
                d_next / (2.0 * lambda * a),
                d_now / (2.0 * lambda * a),
                t2,
            ]),
        );

        let gn = zs[k + 1].dist_sq(&xs[k + 1]);
        let dz = zs[k + 1].dist_sq(&zs[k]);
        let b = (1.0 - a) * (1.0 - a) * gk;
        let rhs = f[k + 1] + (gn + dz - b) / (2.0 * lambda);
        s2.record(
            f[k] - rhs,
            max_abs(&[
                f[k],
                f[k + 1],
                gn / (2.0 * lambda),
                dz / (2.0 * lambda),
                b / (2.0 * lambda),
            ]),
        );

        let inner = (&(&xs[k + 1] - &zs[k + 1]) - &(&xs[k] - &zs[k])).dot(&(&zs[k + 1] - &zs[k]));
        let inner_scale = xs[k + 1].dist(&zs[k + 1]).max(xs[k].dist(&zs[k])) * zs[k + 1].dist(&zs[k]);
        s3.record(inner, inner_scale);
        if a != 1.0 {
            let c1 = (a - 2.0) / (2.0 * (1.0 - a)) * dz;
            let c2 = a / (2.0 * (1.0 - a)) * gn;
            let c3 = a * (a - 1.0) / 2.0 * gk;
            let lhs = c1 + c2 + c3;
            let scale = max_abs(&[c1, c2, c3, inner, inner_scale]);
            s3e.record(-(lhs - inner).abs(), scale);
            s3.record(lhs, scale);
        }
    }
    Ok([s1, s2, s3, s3e])
}

/// Monotonicity of `|z^k - x^k|` and the double sufficient decrease for a
/// constant schedule. `alpha` must lie in `(0, 2]`; the decrease part needs
/// `alpha < 2`.
pub fn constant_schedule_properties(trace: &Trace) -> Result<Vec<InequalityStat>> {
    let lambda = rppa_parts(trace)?;
    let ScheduleKind::Constant { alpha } = trace.schedule.kind() else {
        return Err(Error::invalid("trace", "needs a constant schedule"));
    };
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::OutOfValidity {
            value: alpha,
            range: "(0, 2]",
        });
    }
    let mut mono = InequalityStat::new("monotone_residual");
    let mut sd = InequalityStat::new(if alpha <= 1.0 {
        "double_decrease_1"
    } else {
        "double_decrease_2"
    });
    let (xs, zs, f) = (&trace.xs, &trace.zs, &trace.fvals);
    for k in 0..trace.steps() {
        let g = zs[k].dist(&xs[k]);
        let gn = zs[k + 1].dist(&xs[k + 1]);
        mono.record(g - gn, g);
        let (c_next, c_now) = if alpha <= 1.0 {
            ((alpha + 1.0) / (2.0 * lambda), (alpha - 1.0) / (2.0 * lambda))
        } else if alpha < 2.0 {
            (
                1.0 / (2.0 * lambda) * 2.0 / (2.0 - alpha),
                1.0 / (2.0 * lambda) * 2.0 * (alpha - 1.0) * (alpha - 1.0) / (alpha - 2.0),
            )
        } else {
            continue;
        };
        let t_next = c_next * gn * gn;
        let t_now = c_now * g * g;
        sd.record(
            f[k] - f[k + 1] - t_next - t_now,
            max_abs(&[f[k], f[k + 1], t_next, t_now]),
        );
    }
    Ok(if alpha < 2.0 { vec![mono, sd] } else { vec![mono] })
}
