use serde::Serialize;

use super::{rel_gap, Vector};
use crate::error::{Error, Result};

/// Both sides of an identity and how far apart they landed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityResidual {
    pub lhs: f64,
    pub rhs: f64,
    pub abs_gap: f64,
    pub rel_gap: f64,
}

impl IdentityResidual {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        IdentityResidual {
            lhs,
            rhs,
            abs_gap: (lhs - rhs).abs(),
            rel_gap: rel_gap(lhs, rhs),
        }
    }

    pub fn holds(&self, rel_tol: f64) -> bool {
        self.rel_gap <= rel_tol
    }
}

fn same_dims(vs: &[&Vector]) -> Result<()> {
    let d = vs[0].dim();
    vs.iter().try_for_each(|v| v.check_dim(d))
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(
            name,
            format!("must be positive and finite, got {value}"),
        ))
    }
}

/// `2<x-y, z-w> = |x-w|^2 + |y-z|^2 - |x-z|^2 - |y-w|^2`.
pub fn three_point_identity(x: &Vector, y: &Vector, z: &Vector, w: &Vector) -> Result<IdentityResidual> {
    same_dims(&[x, y, z, w])?;
    let lhs = 2.0 * (x - y).dot(&(z - w));
    let rhs = x.dist_sq(w) + y.dist_sq(z) - x.dist_sq(z) - y.dist_sq(w);
    Ok(IdentityResidual::new(lhs, rhs))
}

/// `|t x + (1-t) y|^2 = t|x|^2 + (1-t)|y|^2 - t(1-t)|x-y|^2` for any real `t`.
pub fn convex_combination_identity(x: &Vector, y: &Vector, theta: f64) -> Result<IdentityResidual> {
    same_dims(&[x, y])?;
    if !theta.is_finite() {
        return Err(Error::invalid("theta", "must be finite"));
    }
    let lhs = (theta * x + (1.0 - theta) * y).norm_sq();
    let rhs = theta * x.norm_sq() + (1.0 - theta) * y.norm_sq() - theta * (1.0 - theta) * x.dist_sq(y);
    Ok(IdentityResidual::new(lhs, rhs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct YoungOutcome {
    pub upper_ok: bool,
    pub lower_ok: bool,
}

/// `(1+1/k)|x|^2 + (1+k)|y|^2 >= |x+y|^2 >= (1-1/k)|x|^2 + (1-k)|y|^2`.
pub fn young_bounds(x: &Vector, y: &Vector, kappa: f64) -> Result<YoungOutcome> {
    same_dims(&[x, y])?;
    positive("kappa", kappa)?;
    let (nx, ny) = (x.norm_sq(), y.norm_sq());
    let mid = (x + y).norm_sq();
    let upper = (1.0 + 1.0 / kappa) * nx + (1.0 + kappa) * ny;
    let lower = (1.0 - 1.0 / kappa) * nx + (1.0 - kappa) * ny;
    let scale = 1f64.max(upper.abs()).max(lower.abs()).max(mid);
    let tol = 1e-10 * scale;
    Ok(YoungOutcome {
        upper_ok: upper >= mid - tol,
        lower_ok: mid >= lower - tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TvOutcome {
    /// At least one hypothesis fails, nothing to check.
    Vacuous,
    Confirmed,
    /// Hypotheses hold but the conclusion does not. Always a bug.
    Violated,
}

/// Evaluates the implication
///
/// `|x|^2 >= |y|^2 + s(s+g)|z|^2 + s v` and `v <= 2<y,z> - g|z|^2`
/// imply `v <= |x|^2 / (2s + g)`,
///
/// valid for `s > 0` and `g >= -s`.
pub fn tv_implication_check(x: &Vector, y: &Vector, z: &Vector, s: f64, gamma: f64, v: f64) -> Result<TvOutcome> {
    same_dims(&[x, y, z])?;
    positive("s", s)?;
    if !gamma.is_finite() || gamma < -s {
        return Err(Error::invalid(
            "gamma",
            format!("must satisfy gamma >= -s, got gamma={gamma}, s={s}"),
        ));
    }
    if !v.is_finite() {
        return Err(Error::invalid("v", "must be finite"));
    }
    let (nx, ny, nz) = (x.norm_sq(), y.norm_sq(), z.norm_sq());
    let first = nx >= ny + s * (s + gamma) * nz + s * v;
    let second = v <= 2.0 * y.dot(z) - gamma * nz;
    if !(first && second) {
        return Ok(TvOutcome::Vacuous);
    }
    let bound = nx / (2.0 * s + gamma);
    let scale = 1f64
        .max(v.abs())
        .max(bound.abs())
        .max(ny)
        .max(s * (s + gamma).abs() * nz);
    if v <= bound + 1e-10 * scale {
        Ok(TvOutcome::Confirmed)
    } else {
        Ok(TvOutcome::Violated)
    }
}

/// The six-term identity
///
/// `<b,a> - (r^2-1)/2 |c|^2 - |b|^2/2 + (r+1)<c, a-b-c> + 2r<d, c-d-sc> + 2s<d, a-b-sc-d>`
/// `= (|a|^2 - |a-b-(1+r)c-2sd|^2)/2 + 2(s^2-s-r)<d, d-c>`.
pub fn simplify_identity_1(a: &Vector, b: &Vector, c: &Vector, d: &Vector, r: f64, s: f64) -> Result<IdentityResidual> {
    same_dims(&[a, b, c, d])?;
    positive("r", r)?;
    positive("s", s)?;
    let lhs = b.dot(a) - 0.5 * (r * r - 1.0) * c.norm_sq() - 0.5 * b.norm_sq()
        + (r + 1.0) * c.dot(&(a - b - c))
        + 2.0 * r * d.dot(&(c - d - s * c))
        + 2.0 * s * d.dot(&(a - b - s * c - d));
    let tail = a - b - (1.0 + r) * c - 2.0 * s * d;
    let rhs = 0.5 * (a.norm_sq() - tail.norm_sq()) + 2.0 * (s * s - s - r) * d.dot(&(d - c));
    Ok(IdentityResidual::new(lhs, rhs))
}

/// The companion identity
///
/// `(s+r)/r^2 (<b,(1-s)c+d> - (r^2-1)|d|^2 - <d, b+(s-1)c+d>) - |c|^2 + s/r <c, b+(s-1)c+d>`
/// `= -(s+r)|d|^2 + (s^2-s-r)/r^2 <c, -b+rc-d>`.
pub fn simplify_identity_2(b: &Vector, c: &Vector, d: &Vector, r: f64, s: f64) -> Result<IdentityResidual> {
    same_dims(&[b, c, d])?;
    positive("r", r)?;
    positive("s", s)?;
    let shifted = b + (s - 1.0) * c + d;
    let lhs = (s + r) / (r * r) * (b.dot(&((1.0 - s) * c + d)) - (r * r - 1.0) * d.norm_sq() - d.dot(&shifted))
        - c.norm_sq()
        + s / r * c.dot(&shifted);
    let rhs = -(s + r) * d.norm_sq() + (s * s - s - r) / (r * r) * c.dot(&(r * c - b - d));
    Ok(IdentityResidual::new(lhs, rhs))
}
