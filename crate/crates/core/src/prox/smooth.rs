use super::instance::{huber_value, ProxInstance, ProxKind};
use crate::error::{Error, Result};
use crate::math::Vector;

#[derive(Debug, Clone, PartialEq)]
pub enum SmoothKind {
    Huber {
        eta: f64,
    },
    /// `sum_i q_i (x_i - b_i)^2 / 2`.
    Quadratic {
        q: Vector,
        b: Vector,
    },
}

/// An `L`-smooth convex function with an exact gradient, used by gradient
/// descent.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothInstance {
    kind: SmoothKind,
    dim: usize,
    lipschitz: f64,
    x_star: Vector,
}

impl SmoothInstance {
    pub fn huber(eta: f64, lipschitz: f64, dim: usize) -> Result<Self> {
        let inst = ProxInstance::huber(eta, lipschitz, dim)?;
        SmoothInstance::try_from(&inst)
    }

    pub fn quadratic(q: Vector, b: Vector) -> Result<Self> {
        let inst = ProxInstance::quadratic(q, b)?;
        SmoothInstance::try_from(&inst)
    }

    pub fn kind(&self) -> &SmoothKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn x_star(&self) -> &Vector {
        &self.x_star
    }

    pub fn h_star(&self) -> f64 {
        0.0
    }

    pub fn eval(&self, x: &Vector) -> Result<f64> {
        Ok(self.eval_grad(x)?.0)
    }

    pub fn grad(&self, x: &Vector) -> Result<Vector> {
        Ok(self.eval_grad(x)?.1)
    }

    pub fn eval_grad(&self, x: &Vector) -> Result<(f64, Vector)> {
        x.check_dim(self.dim)?;
        Ok(match &self.kind {
            SmoothKind::Huber { eta } => {
                let l = self.lipschitz;
                let n = x.norm();
                let g = if n <= eta / l { x.scaled(l) } else { x.scaled(eta / n) };
                (huber_value(*eta, l, n), g)
            }
            SmoothKind::Quadratic { q, b } => {
                let r = x - b;
                let g = r.zip_map(q, |ri, qi| qi * ri);
                (0.5 * r.dot(&g), g)
            }
        })
    }

    /// Whether `|x| >= eta/L - slack`, i.e. `x` lies on the linear part of a
    /// Huber function up to an absolute slack. Always false for quadratics.
    pub fn in_linear_branch(&self, x: &Vector, slack: f64) -> bool {
        match &self.kind {
            SmoothKind::Huber { eta } => x.norm() >= eta / self.lipschitz - slack,
            SmoothKind::Quadratic { .. } => false,
        }
    }

    pub fn label(&self) -> String {
        match &self.kind {
            SmoothKind::Huber { eta } => format!("huber(eta={eta};L={})", self.lipschitz),
            SmoothKind::Quadratic { .. } => format!("quadratic(d={})", self.dim),
        }
    }
}

impl TryFrom<&ProxInstance> for SmoothInstance {
    type Error = Error;

    fn try_from(inst: &ProxInstance) -> Result<Self> {
        let (kind, lipschitz) = match inst.kind() {
            ProxKind::Huber { eta, lipschitz } => (SmoothKind::Huber { eta: *eta }, *lipschitz),
            ProxKind::Quadratic { q, b } => {
                let l = q.iter().fold(0.0, |m: f64, &v| m.max(v));
                (
                    SmoothKind::Quadratic {
                        q: q.clone(),
                        b: b.clone(),
                    },
                    l,
                )
            }
            _ => {
                return Err(Error::invalid(
                    "instance",
                    format!("{} is not smooth; use huber or quadratic", inst.label()),
                ))
            }
        };
        Ok(SmoothInstance {
            kind,
            dim: inst.dim(),
            lipschitz,
            x_star: inst.x_star().clone(),
        })
    }
}
