use crate::error::{Error, Result};
use crate::math::{IdentityResidual, Vector};
use crate::prox::{ProxInstance, SmoothInstance};
use crate::schedule::{rho_pow, silver_constants, Schedule, ScheduleKind, RHO};
use crate::solver::{run_gd, run_rppa, Trace};

/// Largest order accepted by [`build_certificate_matrix`].
pub const MAX_MATRIX_M: u32 = 10;

/// Nonnegative multiplier matrix of size `2^m`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateMatrix {
    m: u32,
    size: usize,
    entries: Vec<f64>,
}

impl CertificateMatrix {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.size + j]
    }

    pub fn min_entry(&self) -> f64 {
        self.entries.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Nonzero entries as `(i, j, value)`.
    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(idx, v)| (idx / self.size, idx % self.size, *v))
    }
}

/// Builds `A^(m)` from `A^(1) = [[0, rho], [1, 0]]` by the block recursion.
pub fn build_certificate_matrix(m: u32) -> Result<CertificateMatrix> {
    if m < 1 {
        return Err(Error::invalid("m", "certificate order must be at least 1"));
    }
    if m > MAX_MATRIX_M {
        return Err(Error::LengthCap {
            requested: 1 << m.min(31),
            cap: 1 << MAX_MATRIX_M,
        });
    }
    let mut a = CertificateMatrix {
        m: 1,
        size: 2,
        entries: vec![0.0, RHO, 1.0, 0.0],
    };
    for i in 1..m {
        let n = a.size;
        let size = 2 * n;
        let mut e = vec![0.0; size * size];
        for r in 0..n {
            for c in 0..n {
                let v = a.get(r, c);
                e[r * size + c] = v;
                e[(n + r) * size + n + c] = RHO * RHO * v;
            }
        }
        let pi = Schedule::silver(i)?;
        let top = n - 1;
        let bottom = size - 1;
        for (offset, p) in pi.steps().iter().enumerate() {
            e[top * size + n + offset] += RHO * p;
            e[bottom * size + n + offset] += RHO * p;
        }
        e[top * size + bottom] += RHO;
        e[bottom * size + top] += rho_pow(i);
        a = CertificateMatrix {
            m: i + 1,
            size,
            entries: e,
        };
    }
    Ok(a)
}

fn check_silver_schedule(trace: &Trace, m: u32) -> Result<()> {
    match trace.schedule.kind() {
        ScheduleKind::Silver { m: k } if k == m => Ok(()),
        _ => Err(Error::invalid("trace", format!("needs a silver(m={m}) trace"))),
    }
}

/// `Q^h_{x,y} = h(x) - h(y) - <g_y, x - y> - |g_x - g_y|^2 / (2L)`.
pub fn q_value(hx: f64, hy: f64, x: &Vector, y: &Vector, gx: &Vector, gy: &Vector, lipschitz: f64) -> f64 {
    hx - hy - gy.dot(&(x - y)) - gx.dist_sq(gy) / (2.0 * lipschitz)
}

/// `P^f_{y,z} = f(y) - f(z) - <g, y - z>` with `g` a subgradient of `f` at `z`.
pub fn p_value(fy: f64, fz: f64, y: &Vector, z: &Vector, gz: &Vector) -> f64 {
    fy - fz - gz.dot(&(y - z))
}

/// Evaluates both sides of the GD certificate identity on a `pi^(m)` run.
pub fn gd_certificate_check(m: u32, instance: &SmoothInstance, x0: &Vector) -> Result<IdentityResidual> {
    let a = build_certificate_matrix(m)?;
    let schedule = Schedule::silver(m)?;
    let trace = run_gd(instance, &schedule, x0)?;
    check_silver_schedule(&trace, m)?;
    let l = instance.lipschitz();
    let grads: Vec<Vector> = trace.xs.iter().map(|x| instance.grad(x)).collect::<Result<_>>()?;
    let h = &trace.fvals;
    let xs = &trace.xs;
    let lhs: f64 = a
        .nonzeros()
        .map(|(i, j, v)| v * q_value(h[i], h[j], &xs[i], &xs[j], &grads[i], &grads[j], l))
        .sum();
    let n = schedule.len();
    let rm = rho_pow(m);
    let sum: f64 = schedule
        .steps()
        .iter()
        .enumerate()
        .map(|(i, &alpha)| alpha * (h[n] - h[i] - grads[i].norm_sq() / (2.0 * l) - grads[i].dot(&(x0 - &xs[i]))))
        .sum();
    let rhs = -sum - 0.5 * l * xs[n].dist_sq(x0) - rm * (rm - 1.0) / (2.0 * l) * grads[n].norm_sq();
    Ok(IdentityResidual::new(lhs, rhs))
}

/// Both sides of the RPPA certificate identity on the `2^m` consecutive
/// iterates of `trace` starting at index `offset`, where the steps
/// `offset..offset + 2^m - 1` form `pi^(m)`.
fn rppa_identity_window(trace: &Trace, a: &CertificateMatrix, offset: usize) -> Result<(f64, f64)> {
    let lambda = trace
        .lambda
        .ok_or_else(|| Error::invalid("trace", "needs an RPPA trace"))?;
    let size = a.size();
    let grads: Vec<Vector> = (offset..offset + size)
        .map(|k| trace.envelope_grad(k).expect("RPPA trace"))
        .collect();
    let zs = &trace.zs[offset..offset + size];
    let f = &trace.fvals[offset..offset + size];
    let lhs: f64 = a
        .nonzeros()
        .map(|(i, j, v)| v * p_value(f[i], f[j], &zs[i], &zs[j], &grads[j]))
        .sum();
    let steps = &trace.schedule.steps()[offset..offset + size - 1];
    let start = &trace.xs[offset];
    let last = size - 1;
    let mut weighted = Vector::zeros(start.dim());
    let mut sum = 0.0;
    for (i, &alpha) in steps.iter().enumerate() {
        sum += alpha * (f[i] - f[last] + grads[i].dot(&(start - &zs[i])));
        weighted = weighted.axpy(alpha, &grads[i]);
    }
    let r2m = rho_pow(2 * a.m());
    let rhs = sum - 0.5 * (r2m - 1.0) * lambda * grads[last].norm_sq() - 0.5 * lambda * weighted.norm_sq();
    Ok((lhs, rhs))
}

/// Evaluates both sides of the RPPA certificate identity on a `pi^(m)` run.
pub fn rppa_certificate_check(m: u32, instance: &ProxInstance, lambda: f64, x0: &Vector) -> Result<IdentityResidual> {
    let a = build_certificate_matrix(m)?;
    let trace = run_rppa(instance, lambda, &Schedule::silver(m)?, x0)?;
    let (lhs, rhs) = rppa_identity_window(&trace, &a, 0)?;
    Ok(IdentityResidual::new(lhs, rhs))
}

/// The identity with `C^(m) = (2 T_m / rho^{2m}) A^(m)` on iterates `1..=2^m`
/// of a left-silver run, which restart `pi^(m)` from `x^1`.
pub fn left_silver_scaled_check(m: u32, instance: &ProxInstance, lambda: f64, x0: &Vector) -> Result<IdentityResidual> {
    let a = build_certificate_matrix(m)?;
    let trace = run_rppa(instance, lambda, &Schedule::left_silver(m)?, x0)?;
    let (lhs, rhs) = rppa_identity_window(&trace, &a, 1)?;
    let c = 2.0 * silver_constants(m).t_m / rho_pow(2 * m);
    Ok(IdentityResidual::new(c * lhs, c * rhs))
}

/// The pass rule for certificate identities: equal to `1e-9` relative and
/// the left side nonnegative to `1e-9` scaled.
pub fn certificate_holds(res: &IdentityResidual) -> bool {
    res.rel_gap <= 1e-9 && res.lhs >= -1e-9 * 1f64.max(res.lhs.abs()).max(res.rhs.abs())
}
