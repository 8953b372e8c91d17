//! The relaxed proximal point algorithm and N-step gradient descent, with
//! full iterate traces and the performance measures computed from them.

use std::io::Write;

use serde::Serialize;

use crate::bounds::Measure;
use crate::error::{Error, Result};
use crate::math::Vector;
use crate::prox::{ProxInstance, SmoothInstance};
use crate::schedule::Schedule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Rppa,
    Gd,
}

/// Every iterate of one run.
///
/// For RPPA, `zs[k] = prox(xs[k])`, `fvals[k] = f(zs[k])` and
/// `grad_norms[k] = |xs[k] - zs[k]| / lambda`. For GD, `zs` is empty,
/// `fvals[k] = h(xs[k])` and `grad_norms[k] = |grad h(xs[k])|`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub method: Method,
    pub xs: Vec<Vector>,
    pub zs: Vec<Vector>,
    pub fvals: Vec<f64>,
    pub grad_norms: Vec<f64>,
    pub lambda: Option<f64>,
    pub schedule: Schedule,
}

impl Trace {
    /// Number of steps `N`.
    pub fn steps(&self) -> usize {
        self.xs.len() - 1
    }

    pub fn x0(&self) -> &Vector {
        &self.xs[0]
    }

    pub fn x_last(&self) -> &Vector {
        self.xs.last().expect("traces hold x^0")
    }

    /// `grad f^lambda(x^k) = (x^k - z^k) / lambda` for RPPA traces.
    pub fn envelope_grad(&self, k: usize) -> Option<Vector> {
        let lambda = self.lambda?;
        Some((&self.xs[k] - &self.zs[k]).scaled(1.0 / lambda))
    }

    /// Writes one JSON object per iterate: `{k, x, z, f_z, grad_norm}`.
    /// GD traces write `z: null` and the value of `h` under `f_z`.
    pub fn write_json_lines(&self, mut out: impl Write) -> std::io::Result<()> {
        #[derive(Serialize)]
        struct Line<'a> {
            k: usize,
            x: &'a Vector,
            z: Option<&'a Vector>,
            f_z: f64,
            grad_norm: f64,
        }
        for k in 0..self.xs.len() {
            let line = Line {
                k,
                x: &self.xs[k],
                z: self.zs.get(k),
                f_z: self.fvals[k],
                grad_norm: self.grad_norms[k],
            };
            serde_json::to_writer(&mut out, &line)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

fn check_finite(v: &Vector, step: usize) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite { step })
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(
            "lambda",
            format!("must be positive and finite, got {lambda}"),
        ))
    }
}

/// Runs RPPA: `z^k = prox(x^k)`, `x^{k+1} = x^k + alpha_k (z^k - x^k)`,
/// finishing with `z^N = prox(x^N)`.
pub fn run_rppa(instance: &ProxInstance, lambda: f64, schedule: &Schedule, x0: &Vector) -> Result<Trace> {
    check_lambda(lambda)?;
    x0.check_dim(instance.dim())?;
    let n = schedule.len();
    let mut xs = Vec::with_capacity(n + 1);
    let mut zs = Vec::with_capacity(n + 1);
    let mut fvals = Vec::with_capacity(n + 1);
    let mut grad_norms = Vec::with_capacity(n + 1);
    let mut x = x0.clone();
    for k in 0..=n {
        let z = instance.prox(&x, lambda)?;
        check_finite(&z, k)?;
        let fz = instance.eval(&z)?;
        if !fz.is_finite() {
            return Err(Error::NonFinite { step: k });
        }
        fvals.push(fz);
        grad_norms.push(x.dist(&z) / lambda);
        let next = (k < n).then(|| x.axpy(schedule.steps()[k], &(&z - &x)));
        xs.push(x);
        zs.push(z);
        if let Some(next) = next {
            check_finite(&next, k + 1)?;
            x = next;
        } else {
            break;
        }
    }
    Ok(Trace {
        method: Method::Rppa,
        xs,
        zs,
        fvals,
        grad_norms,
        lambda: Some(lambda),
        schedule: schedule.clone(),
    })
}

/// Runs `x^{k+1} = x^k - (alpha_k / L) grad h(x^k)`.
pub fn run_gd(instance: &SmoothInstance, schedule: &Schedule, x0: &Vector) -> Result<Trace> {
    x0.check_dim(instance.dim())?;
    let n = schedule.len();
    let l = instance.lipschitz();
    let mut xs = Vec::with_capacity(n + 1);
    let mut fvals = Vec::with_capacity(n + 1);
    let mut grad_norms = Vec::with_capacity(n + 1);
    let mut x = x0.clone();
    for k in 0..=n {
        let (h, g) = instance.eval_grad(&x)?;
        if !h.is_finite() || !g.is_finite() {
            return Err(Error::NonFinite { step: k });
        }
        fvals.push(h);
        grad_norms.push(g.norm());
        let next = (k < n).then(|| x.axpy(-schedule.steps()[k] / l, &g));
        xs.push(x);
        match next {
            Some(next) => {
                check_finite(&next, k + 1)?;
                x = next;
            }
            None => break,
        }
    }
    Ok(Trace {
        method: Method::Gd,
        xs,
        zs: Vec::new(),
        fvals,
        grad_norms,
        lambda: None,
        schedule: schedule.clone(),
    })
}

/// Runs RPPA and GD on the Moreau envelope with `L = 1/lambda` and returns
/// the largest distance between corresponding iterates.
pub fn rppa_gd_equivalence(instance: &ProxInstance, lambda: f64, schedule: &Schedule, x0: &Vector) -> Result<f64> {
    let trace = run_rppa(instance, lambda, schedule, x0)?;
    let mut x = x0.clone();
    let mut gap = 0.0f64;
    for (k, x_rppa) in trace.xs.iter().enumerate() {
        gap = gap.max(x.dist(x_rppa));
        if let Some(&alpha) = schedule.steps().get(k) {
            let g = instance.moreau_grad(&x, lambda)?;
            x = x.axpy(-alpha * lambda, &g);
            check_finite(&x, k + 1)?;
        }
    }
    Ok(gap)
}

/// Endpoint performance measures of a run.
///
/// For GD runs `fval_residual` is `h(x^N) - h*`, `subgrad_norm` is
/// `|grad h(x^N)|` and `composite` is absent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureReport {
    pub fval_residual: f64,
    pub subgrad_norm: f64,
    pub composite: Option<f64>,
    pub init_dist_sq: f64,
    pub init_fval_gap: f64,
}

impl MeasureReport {
    pub const CSV_HEADER: &'static str = "fval_residual,subgrad_norm,composite,init_dist_sq,init_fval_gap";

    pub fn csv_row(&self) -> String {
        let composite = self.composite.map(|c| c.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{}",
            self.fval_residual, self.subgrad_norm, composite, self.init_dist_sq, self.init_fval_gap
        )
    }

    /// The normalized ratio for `measure`; `None` when undefined (zero
    /// denominator, or composite on a GD run).
    pub fn ratio(&self, measure: Measure) -> Option<f64> {
        let (num, den) = match measure {
            Measure::FvalOverDistSq => (self.fval_residual, self.init_dist_sq),
            Measure::SubgradOverDist => (self.subgrad_norm, self.init_dist_sq.sqrt()),
            Measure::SubgradSqOverFval => (self.subgrad_norm * self.subgrad_norm, self.init_fval_gap),
            Measure::CompositeOverDistSq => (self.composite?, self.init_dist_sq),
        };
        (den > 0.0 && den.is_finite()).then(|| num / den)
    }
}

/// Measures of an RPPA trace on `instance`.
pub fn measures(trace: &Trace, instance: &ProxInstance) -> Result<MeasureReport> {
    let lambda = trace
        .lambda
        .ok_or_else(|| Error::invalid("trace", "measures needs an RPPA trace"))?;
    let n = trace.steps();
    let fval_residual = trace.fvals[n] - instance.f_star();
    let subgrad_norm = trace.grad_norms[n];
    Ok(MeasureReport {
        fval_residual,
        subgrad_norm,
        composite: Some(fval_residual + 0.5 * lambda * subgrad_norm * subgrad_norm),
        init_dist_sq: trace.x0().dist_sq(instance.x_star()),
        init_fval_gap: instance.eval(trace.x0())? - instance.f_star(),
    })
}

/// Measures of a GD trace on `instance`.
pub fn gd_measures(trace: &Trace, instance: &SmoothInstance) -> Result<MeasureReport> {
    if trace.method != Method::Gd {
        return Err(Error::invalid("trace", "gd_measures needs a GD trace"));
    }
    let n = trace.steps();
    Ok(MeasureReport {
        fval_residual: trace.fvals[n] - instance.h_star(),
        subgrad_norm: trace.grad_norms[n],
        composite: None,
        init_dist_sq: trace.x0().dist_sq(instance.x_star()),
        init_fval_gap: trace.fvals[0] - instance.h_star(),
    })
}
