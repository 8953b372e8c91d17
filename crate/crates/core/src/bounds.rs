//! Closed-form upper and lower bounds keyed by schedule kind and
//! performance measure.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::schedule::{rho_pow, silver_constants, Schedule, ScheduleKind};
use crate::solver::Method;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Measure {
    /// `(f(z^N) - f*) / |x^0 - x*|^2`, or `h(x^N) - h*` over the same for GD.
    FvalOverDistSq,
    /// `|grad f^lambda(x^N)| / |x^0 - x*|`, or `|grad h(x^N)|` for GD.
    SubgradOverDist,
    /// `|grad f^lambda(x^N)|^2 / (f(x^0) - f*)`.
    SubgradSqOverFval,
    /// `(f(z^N) + lambda/2 |grad f^lambda(x^N)|^2 - f*) / |x^0 - x*|^2`.
    CompositeOverDistSq,
}

impl Measure {
    pub const ALL: [Measure; 4] = [
        Measure::FvalOverDistSq,
        Measure::SubgradOverDist,
        Measure::SubgradSqOverFval,
        Measure::CompositeOverDistSq,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Measure::FvalOverDistSq => "fval_over_dist_sq",
            Measure::SubgradOverDist => "subgrad_over_dist",
            Measure::SubgradSqOverFval => "subgrad_sq_over_fval",
            Measure::CompositeOverDistSq => "composite_over_dist_sq",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Upper,
    Lower,
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be positive and finite, got {v}")))
    }
}

fn unsupported(kind: &str, measure: Measure) -> Error {
    Error::UnsupportedMeasure {
        kind: kind.to_string(),
        measure: measure.name().to_string(),
    }
}

fn check_constant_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= std::f64::consts::SQRT_2 {
        Ok(())
    } else {
        Err(Error::OutOfValidity {
            value: alpha,
            range: "(0, sqrt(2)]",
        })
    }
}

fn check_steps(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("N", "must be at least 1"));
    }
    Ok(())
}

/// RPPA lower bound from the scaled-norm construction, using `1 + sum(alpha)`.
pub fn lower_bound(schedule: &Schedule, lambda: f64, measure: Measure) -> Result<f64> {
    positive("lambda", lambda)?;
    let denom = lambda * (1.0 + schedule.total());
    match measure {
        Measure::SubgradOverDist | Measure::SubgradSqOverFval => Ok(1.0 / denom),
        Measure::FvalOverDistSq => Ok(1.0 / (4.0 * denom)),
        Measure::CompositeOverDistSq => Err(unsupported("any", measure)),
    }
}

/// `1 / (4 lambda (alpha N + 1))`, valid for `alpha` in `(0, sqrt(2)]`.
pub fn upper_constant_fval(alpha: f64, n: usize, lambda: f64) -> Result<f64> {
    check_constant_alpha(alpha)?;
    check_steps(n)?;
    positive("lambda", lambda)?;
    Ok(1.0 / (4.0 * lambda * (alpha * n as f64 + 1.0)))
}

/// `1 / (lambda (alpha N + 1))`, valid for `alpha` in `(0, sqrt(2)]`.
pub fn upper_constant_subgrad(alpha: f64, n: usize, lambda: f64) -> Result<f64> {
    check_constant_alpha(alpha)?;
    check_steps(n)?;
    positive("lambda", lambda)?;
    Ok(1.0 / (lambda * (alpha * n as f64 + 1.0)))
}

/// `1 / (4 lambda (A_{N-1} + 1))` with `A` from the TV recursion.
pub fn upper_tv_fval(n: usize, lambda: f64) -> Result<f64> {
    positive("lambda", lambda)?;
    let s = Schedule::tv(n)?;
    Ok(1.0 / (4.0 * lambda * (s.total() + 1.0)))
}

/// RPPA with `pi^(m)`: composite `1/((4 rho^m - 2) lambda)`, subgradient
/// `1/(rho^m lambda)`.
pub fn upper_silver_rppa(m: u32, lambda: f64, measure: Measure) -> Result<f64> {
    if m < 1 {
        return Err(Error::invalid("m", "silver order must be at least 1"));
    }
    positive("lambda", lambda)?;
    let r = rho_pow(m);
    match measure {
        Measure::CompositeOverDistSq => Ok(1.0 / ((4.0 * r - 2.0) * lambda)),
        Measure::SubgradOverDist => Ok(1.0 / (r * lambda)),
        other => Err(unsupported("silver", other)),
    }
}

/// `1 / (4 lambda T_m)`.
pub fn upper_right_silver_fval(m: u32, lambda: f64) -> Result<f64> {
    positive("lambda", lambda)?;
    Ok(1.0 / (4.0 * lambda * silver_constants(m).t_m))
}

/// Bound on `|grad f^lambda(x^N)|^2 / (f(x^0) - f*)`: `1 / (lambda T_m)`.
pub fn upper_left_silver_subgrad_sq(m: u32, lambda: f64) -> Result<f64> {
    positive("lambda", lambda)?;
    Ok(1.0 / (lambda * silver_constants(m).t_m))
}

/// GD with `pi^(m)`: `L/(4 rho^m - 2)` for the objective gap and `L/rho^m`
/// for the gradient norm.
pub fn upper_gd_silver(m: u32, lipschitz: f64, measure: Measure) -> Result<f64> {
    if m < 1 {
        return Err(Error::invalid("m", "silver order must be at least 1"));
    }
    positive("L", lipschitz)?;
    let r = rho_pow(m);
    match measure {
        Measure::FvalOverDistSq => Ok(lipschitz / (4.0 * r - 2.0)),
        Measure::SubgradOverDist => Ok(lipschitz / r),
        other => Err(unsupported("silver", other)),
    }
}

/// Earlier, non-tight GD objective bound `L / (1 + sqrt(4 rho^{2m} - 3))`,
/// kept for comparison only.
pub fn pre_conjecture_gd_fval(m: u32, lipschitz: f64) -> Result<f64> {
    if m < 1 {
        return Err(Error::invalid("m", "silver order must be at least 1"));
    }
    positive("L", lipschitz)?;
    let r2 = rho_pow(2 * m);
    Ok(lipschitz / (1.0 + (4.0 * r2 - 3.0).sqrt()))
}

/// The proven RPPA upper bound for `schedule` under `measure`.
pub fn upper_bound(schedule: &Schedule, lambda: f64, measure: Measure) -> Result<f64> {
    let kind = schedule.kind();
    match (kind, measure) {
        (ScheduleKind::Constant { alpha }, Measure::FvalOverDistSq) => {
            upper_constant_fval(alpha, schedule.len(), lambda)
        }
        (ScheduleKind::Constant { alpha }, Measure::SubgradOverDist) => {
            upper_constant_subgrad(alpha, schedule.len(), lambda)
        }
        (ScheduleKind::Tv, Measure::FvalOverDistSq) => upper_tv_fval(schedule.len(), lambda),
        (ScheduleKind::Silver { m }, Measure::SubgradOverDist | Measure::CompositeOverDistSq) => {
            upper_silver_rppa(m, lambda, measure)
        }
        (ScheduleKind::RightSilver { m }, Measure::FvalOverDistSq) => upper_right_silver_fval(m, lambda),
        (ScheduleKind::LeftSilver { m }, Measure::SubgradSqOverFval) => upper_left_silver_subgrad_sq(m, lambda),
        _ => Err(unsupported(kind.name(), measure)),
    }
}

/// The proven GD upper bound for `schedule` under `measure`.
pub fn upper_bound_gd(schedule: &Schedule, lipschitz: f64, measure: Measure) -> Result<f64> {
    match schedule.kind() {
        ScheduleKind::Silver { m } => upper_gd_silver(m, lipschitz, measure),
        kind => Err(unsupported(kind.name(), measure)),
    }
}

/// One bound formula, identified by method, schedule family and measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundSpec {
    pub method: Method,
    pub family: &'static str,
    pub measure: Measure,
    pub side: Side,
    /// Whether a matching lower-bound construction exists.
    pub tight: bool,
}

impl BoundSpec {
    /// Evaluates the bound at `schedule`, with `scale` the prox parameter
    /// (RPPA) or the smoothness constant (GD).
    pub fn eval(&self, schedule: &Schedule, scale: f64) -> Result<f64> {
        if schedule.kind().name() != self.family {
            return Err(Error::invalid(
                "schedule",
                format!("bound is for {} schedules, got {}", self.family, schedule.label()),
            ));
        }
        match (self.method, self.side) {
            (Method::Rppa, Side::Upper) => upper_bound(schedule, scale, self.measure),
            (Method::Rppa, Side::Lower) => lower_bound(schedule, scale, self.measure),
            (Method::Gd, Side::Upper) => upper_bound_gd(schedule, scale, self.measure),
            (Method::Gd, Side::Lower) => {
                positive("L", scale)?;
                let s = schedule.total();
                match self.measure {
                    // Huber lower bounds: optimal eta = L/(2S+1) and L/(1+S).
                    Measure::FvalOverDistSq => Ok(scale / (2.0 * (2.0 * s + 1.0))),
                    Measure::SubgradOverDist => Ok(scale / (1.0 + s)),
                    other => Err(unsupported(self.family, other)),
                }
            }
        }
    }
}

/// Every upper bound together with its lower-bound counterpart.
pub fn bound_specs() -> Vec<BoundSpec> {
    use Measure::*;
    let rppa = |family, measure, tight| {
        [Side::Upper, Side::Lower].map(|side| BoundSpec {
            method: Method::Rppa,
            family,
            measure,
            side,
            tight,
        })
    };
    let mut specs = Vec::new();
    specs.extend(rppa("constant", FvalOverDistSq, true));
    specs.extend(rppa("constant", SubgradOverDist, true));
    specs.extend(rppa("tv", FvalOverDistSq, true));
    specs.extend(rppa("silver", SubgradOverDist, true));
    specs.push(BoundSpec {
        method: Method::Rppa,
        family: "silver",
        measure: CompositeOverDistSq,
        side: Side::Upper,
        tight: false,
    });
    specs.extend(rppa("right_silver", FvalOverDistSq, true));
    specs.extend(rppa("left_silver", SubgradSqOverFval, true));
    for measure in [FvalOverDistSq, SubgradOverDist] {
        for side in [Side::Upper, Side::Lower] {
            specs.push(BoundSpec {
                method: Method::Gd,
                family: "silver",
                measure,
                side,
                tight: true,
            });
        }
    }
    specs
}

/// The `(family, measure)` pairs whose RPPA upper bound is attained.
pub fn tight_pairs() -> Vec<(&'static str, Measure)> {
    bound_specs()
        .into_iter()
        .filter(|s| s.tight && s.side == Side::Upper && s.method == Method::Rppa)
        .map(|s| (s.family, s.measure))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::rel_gap;
    use crate::schedule::RHO;
    use approx::assert_relative_eq;
    use std::f64::consts::SQRT_2;

    #[test]
    fn lower_bound_examples() {
        let s = Schedule::constant(1.0, 1).unwrap();
        assert_eq!(lower_bound(&s, 1.0, Measure::FvalOverDistSq).unwrap(), 0.125);
        for m in 1..=8 {
            let v = lower_bound(&Schedule::silver(m).unwrap(), 1.3, Measure::SubgradOverDist).unwrap();
            assert_relative_eq!(v, 1.0 / (1.3 * rho_pow(m)), max_relative = 1e-12);
            let v = lower_bound(&Schedule::right_silver(m).unwrap(), 0.6, Measure::FvalOverDistSq).unwrap();
            assert_relative_eq!(v, 1.0 / (4.0 * 0.6 * silver_constants(m).t_m), max_relative = 1e-12);
        }
        assert!(lower_bound(&s, 0.0, Measure::FvalOverDistSq).is_err());
        assert!(lower_bound(&s, 1.0, Measure::CompositeOverDistSq).is_err());
    }

    #[test]
    fn constant_examples() {
        assert_eq!(upper_constant_fval(1.0, 1, 1.0).unwrap(), 0.125);
        assert_eq!(
            format!("{:.6}", upper_constant_fval(SQRT_2, 10, 1.0).unwrap()),
            "0.016510"
        );
        assert!(matches!(
            upper_constant_fval(1.5, 3, 1.0),
            Err(Error::OutOfValidity { .. })
        ));
        assert!(matches!(
            upper_constant_subgrad(0.0, 3, 1.0),
            Err(Error::OutOfValidity { .. })
        ));
        assert_eq!(upper_constant_subgrad(1.0, 4, 1.0).unwrap(), 0.2);
        assert_relative_eq!(
            upper_constant_subgrad(SQRT_2, 1, 2.0).unwrap(),
            1.0 / (2.0 * (SQRT_2 + 1.0)),
            max_relative = 1e-15
        );
        let s = Schedule::constant(SQRT_2, 1).unwrap();
        assert_relative_eq!(
            upper_bound(&s, 2.0, Measure::SubgradOverDist).unwrap(),
            lower_bound(&s, 2.0, Measure::SubgradOverDist).unwrap(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn tv_examples() {
        assert_eq!(format!("{:.6}", upper_tv_fval(1, 1.0).unwrap()), "0.103553");
        let n = 10_000;
        let ratio = upper_tv_fval(n, 1.0).unwrap() * 4.0 * (2.0 * n as f64 + 1.0);
        assert!((ratio - 1.0).abs() < 0.02, "{ratio}");
        for n in (1..=10_000).step_by(97) {
            assert!(upper_tv_fval(n, 1.0).unwrap() <= upper_constant_fval(SQRT_2, n, 1.0).unwrap());
        }
    }

    #[test]
    fn silver_examples() {
        assert_relative_eq!(
            upper_silver_rppa(1, 1.0, Measure::SubgradOverDist).unwrap(),
            1.0 / RHO,
            max_relative = 1e-15
        );
        assert_eq!(
            format!(
                "{:.6}",
                upper_silver_rppa(2, 1.0, Measure::CompositeOverDistSq).unwrap()
            ),
            "0.046918"
        );
        assert!(upper_silver_rppa(2, 1.0, Measure::FvalOverDistSq).is_err());
        let table4: Vec<String> = (0..4)
            .map(|m| format!("{:.6}", upper_right_silver_fval(m, 1.0).unwrap()))
            .collect();
        assert_eq!(table4, ["0.095492", "0.054988", "0.028429", "0.013620"]);
        assert_eq!(
            format!("{:.6}", upper_left_silver_subgrad_sq(0, 1.0).unwrap()),
            "0.381966"
        );
        assert_relative_eq!(
            upper_left_silver_subgrad_sq(2, 2.0).unwrap(),
            1.0 / (2.0 * silver_constants(2).t_m),
            max_relative = 1e-15
        );
    }

    #[test]
    fn gd_examples() {
        assert_eq!(
            format!("{:.6}", upper_gd_silver(1, 1.0, Measure::SubgradOverDist).unwrap()),
            "0.414214"
        );
        assert_eq!(
            format!("{:.6}", upper_gd_silver(1, 1.0, Measure::FvalOverDistSq).unwrap()),
            "0.130602"
        );
        for m in 2..=10 {
            assert!(
                pre_conjecture_gd_fval(m, 1.0).unwrap() > upper_gd_silver(m, 1.0, Measure::FvalOverDistSq).unwrap()
            );
        }
        assert!(upper_gd_silver(0, 1.0, Measure::FvalOverDistSq).is_err());
    }

    #[test]
    fn tight_pairs_agree_on_grid() {
        let lambdas = [0.1, 1.0, 10.0];
        for &lambda in &lambdas {
            for n in [1, 2, 5, 10, 100, 1000] {
                for alpha in [0.25, 0.5, 1.0, 1.2, SQRT_2] {
                    let s = Schedule::constant(alpha, n).unwrap();
                    for m in [Measure::FvalOverDistSq, Measure::SubgradOverDist] {
                        let gap = rel_gap(upper_bound(&s, lambda, m).unwrap(), lower_bound(&s, lambda, m).unwrap());
                        assert!(gap <= 1e-12);
                    }
                }
                let s = Schedule::tv(n).unwrap();
                let m = Measure::FvalOverDistSq;
                assert!(rel_gap(upper_bound(&s, lambda, m).unwrap(), lower_bound(&s, lambda, m).unwrap()) <= 1e-12);
            }
            for m in 1..=10 {
                let s = Schedule::silver(m).unwrap();
                let u = upper_bound(&s, lambda, Measure::SubgradOverDist).unwrap();
                let l = lower_bound(&s, lambda, Measure::SubgradOverDist).unwrap();
                assert!((u - l).abs() / u <= 1e-12, "silver m={m}");
            }
            for m in 0..=10 {
                let r = Schedule::right_silver(m).unwrap();
                let u = upper_bound(&r, lambda, Measure::FvalOverDistSq).unwrap();
                let l = lower_bound(&r, lambda, Measure::FvalOverDistSq).unwrap();
                assert!((u - l).abs() / u <= 1e-12);
                let ls = Schedule::left_silver(m).unwrap();
                let u = upper_bound(&ls, lambda, Measure::SubgradSqOverFval).unwrap();
                let l = lower_bound(&ls, lambda, Measure::SubgradSqOverFval).unwrap();
                assert!((u - l).abs() / u <= 1e-12);
            }
        }
    }

    #[test]
    fn bounds_decrease_in_length_and_scale() {
        for m in 1..10 {
            assert!(
                upper_silver_rppa(m + 1, 1.0, Measure::SubgradOverDist).unwrap()
                    < upper_silver_rppa(m, 1.0, Measure::SubgradOverDist).unwrap()
            );
            assert!(upper_right_silver_fval(m + 1, 1.0).unwrap() < upper_right_silver_fval(m, 1.0).unwrap());
            assert!(
                upper_gd_silver(m, 2.0, Measure::FvalOverDistSq).unwrap()
                    > upper_gd_silver(m, 1.0, Measure::FvalOverDistSq).unwrap()
            );
        }
        for n in 1..50 {
            assert!(upper_tv_fval(n + 1, 1.0).unwrap() < upper_tv_fval(n, 1.0).unwrap());
            assert!(upper_constant_fval(1.0, n, 2.0).unwrap() < upper_constant_fval(1.0, n, 1.0).unwrap());
        }
    }

    #[test]
    fn right_silver_asymptote() {
        let m = 12;
        let n = (1u64 << m) as f64;
        let asymptote = 1.0 / (2.0 * n.powf(RHO.log2())) / 2.0;
        let ratio = upper_right_silver_fval(m, 1.0).unwrap() / asymptote;
        assert!((ratio - 1.0).abs() < 0.05, "{ratio}");
    }

    #[test]
    fn spec_catalog_dispatch() {
        let specs = bound_specs();
        assert_eq!(tight_pairs().len(), 6);
        let silver = Schedule::silver(3).unwrap();
        for spec in specs.iter().filter(|s| s.family == "silver") {
            let v = spec.eval(&silver, 1.0).unwrap();
            assert!(v > 0.0);
        }
        let upper = specs
            .iter()
            .find(|s| s.family == "tv" && s.side == Side::Upper)
            .unwrap();
        assert!(upper.eval(&silver, 1.0).is_err());
        for spec in specs.iter().filter(|s| s.tight && s.side == Side::Upper) {
            let lower = specs
                .iter()
                .find(|o| {
                    o.side == Side::Lower
                        && o.family == spec.family
                        && o.measure == spec.measure
                        && o.method == spec.method
                })
                .unwrap();
            let sched = match spec.family {
                "constant" => Schedule::constant(1.2, 7).unwrap(),
                "tv" => Schedule::tv(7).unwrap(),
                "silver" => Schedule::silver(4).unwrap(),
                "right_silver" => Schedule::right_silver(3).unwrap(),
                _ => Schedule::left_silver(3).unwrap(),
            };
            let u = spec.eval(&sched, 0.7).unwrap();
            let l = lower.eval(&sched, 0.7).unwrap();
            assert!((u - l).abs() <= 1e-12 * u, "{spec:?}");
        }
    }
}
