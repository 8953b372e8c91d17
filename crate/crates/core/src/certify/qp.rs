use crate::error::Result;
use crate::math::Vector;
use crate::prox::ProxInstance;
use crate::schedule::Schedule;
use crate::solver::run_rppa;

use super::matrix::{p_value, q_value};

/// `Q^{f^lambda}_{x^i,x^j}` and `P^f_{z^i,z^j}` over the index set
/// `{*, 0, ..., N}`, with `*` stored first.
#[derive(Debug, Clone, PartialEq)]
pub struct QpTable {
    pub q_values: Vec<Vec<f64>>,
    pub p_values: Vec<Vec<f64>>,
}

impl QpTable {
    pub fn max_gap(&self) -> f64 {
        self.q_values
            .iter()
            .flatten()
            .zip(self.p_values.iter().flatten())
            .map(|(q, p)| (q - p).abs())
            .fold(0.0, f64::max)
    }

    pub fn min_entry(&self) -> f64 {
        self.q_values
            .iter()
            .chain(&self.p_values)
            .flatten()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest magnitude among all entries, at least 1.
    pub fn scale(&self) -> f64 {
        self.q_values
            .iter()
            .chain(&self.p_values)
            .flatten()
            .fold(1.0, |m: f64, v| m.max(v.abs()))
    }
}

/// Builds the table from an RPPA run. `Q` uses envelope values from
/// [`ProxInstance::moreau_value`]; `P` uses `f` at the prox points.
pub fn qp_table(instance: &ProxInstance, lambda: f64, schedule: &Schedule, x0: &Vector) -> Result<QpTable> {
    let trace = run_rppa(instance, lambda, schedule, x0)?;
    let x_star = instance.x_star();
    let mut xs = vec![x_star.clone()];
    let mut zs = vec![x_star.clone()];
    let mut grads = vec![Vector::zeros(instance.dim())];
    let mut env = vec![instance.f_star()];
    let mut fz = vec![instance.f_star()];
    for k in 0..trace.xs.len() {
        xs.push(trace.xs[k].clone());
        zs.push(trace.zs[k].clone());
        grads.push(trace.envelope_grad(k).expect("RPPA trace"));
        env.push(instance.moreau_value(&trace.xs[k], lambda)?);
        fz.push(trace.fvals[k]);
    }
    let n = xs.len();
    let mut q_values = vec![vec![0.0; n]; n];
    let mut p_values = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            q_values[i][j] = q_value(env[i], env[j], &xs[i], &xs[j], &grads[i], &grads[j], 1.0 / lambda);
            p_values[i][j] = p_value(fz[i], fz[j], &zs[i], &zs[j], &grads[j]);
        }
    }
    Ok(QpTable { q_values, p_values })
}

/// Largest `|Q - P|` over the table.
pub fn qp_equivalence_check(instance: &ProxInstance, lambda: f64, schedule: &Schedule, x0: &Vector) -> Result<f64> {
    Ok(qp_table(instance, lambda, schedule, x0)?.max_gap())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn huber_and_box_examples() {
        let h = ProxInstance::huber(1.0, 2.0, 2).unwrap();
        let x0 = Vector::new(vec![3.0, -1.0]).unwrap();
        let t = qp_table(&h, 0.5, &Schedule::silver(2).unwrap(), &x0).unwrap();
        assert!(t.max_gap() <= 1e-10 * t.scale());
        assert!(t.min_entry() >= -1e-12 * t.scale());
        for i in 0..t.q_values.len() {
            assert_eq!(t.q_values[i][i], 0.0);
            assert_eq!(t.p_values[i][i], 0.0);
        }
        let bx = ProxInstance::box_indicator(Vector::filled(2, -1.0), Vector::filled(2, 0.5)).unwrap();
        let gap = qp_equivalence_check(&bx, 1.0, &Schedule::constant(1.0, 4).unwrap(), &x0).unwrap();
        assert!(gap <= 1e-10 * 10.0, "{gap}");
    }
}
