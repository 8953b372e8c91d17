use crate::error::{Error, Result};
use crate::math::Vector;

#[derive(Debug, Clone, PartialEq)]
pub enum ProxKind {
    /// `eta * |x|`.
    ScaledNorm { eta: f64 },
    /// `L|x|^2/2` for `|x| <= eta/L`, else `eta|x| - eta^2/(2L)`.
    Huber { eta: f64, lipschitz: f64 },
    /// `sum_i q_i (x_i - b_i)^2 / 2`.
    Quadratic { q: Vector, b: Vector },
    /// `w * |x|_1`.
    L1 { weight: f64 },
    /// Indicator of `lo <= x <= hi`.
    BoxIndicator { lo: Vector, hi: Vector },
}

/// A proper closed convex function with a closed-form prox and a known
/// minimizer.
#[derive(Debug, Clone, PartialEq)]
pub struct ProxInstance {
    kind: ProxKind,
    dim: usize,
    x_star: Vector,
    f_star: f64,
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(
            name,
            format!("must be positive and finite, got {value}"),
        ))
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    check_positive("lambda", lambda)
}

impl ProxInstance {
    pub fn scaled_norm(eta: f64, dim: usize) -> Result<Self> {
        check_positive("eta", eta)?;
        Self::radial(ProxKind::ScaledNorm { eta }, dim)
    }

    pub fn huber(eta: f64, lipschitz: f64, dim: usize) -> Result<Self> {
        check_positive("eta", eta)?;
        check_positive("L", lipschitz)?;
        Self::radial(ProxKind::Huber { eta, lipschitz }, dim)
    }

    pub fn l1(weight: f64, dim: usize) -> Result<Self> {
        check_positive("w", weight)?;
        Self::radial(ProxKind::L1 { weight }, dim)
    }

    fn radial(kind: ProxKind, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyVector);
        }
        Ok(ProxInstance {
            kind,
            dim,
            x_star: Vector::zeros(dim),
            f_star: 0.0,
        })
    }

    pub fn quadratic(q: Vector, b: Vector) -> Result<Self> {
        b.check_dim(q.dim())?;
        if q.iter().any(|&qi| qi <= 0.0) {
            return Err(Error::invalid("q", "all entries must be positive"));
        }
        let dim = q.dim();
        Ok(ProxInstance {
            x_star: b.clone(),
            kind: ProxKind::Quadratic { q, b },
            dim,
            f_star: 0.0,
        })
    }

    /// Box indicator; the stored minimizer is the projection of the origin.
    pub fn box_indicator(lo: Vector, hi: Vector) -> Result<Self> {
        hi.check_dim(lo.dim())?;
        if lo.iter().zip(hi.iter()).any(|(l, h)| l > h) {
            return Err(Error::invalid("lo", "must satisfy lo <= hi componentwise"));
        }
        let dim = lo.dim();
        let x_star = lo.zip_map(&hi, |l, h| 0f64.clamp(l, h));
        Ok(ProxInstance {
            kind: ProxKind::BoxIndicator { lo, hi },
            dim,
            x_star,
            f_star: 0.0,
        })
    }

    /// Replaces the stored minimizer after checking it is one.
    pub fn with_minimizer(mut self, x_star: Vector) -> Result<Self> {
        x_star.check_dim(self.dim)?;
        let f = self.eval(&x_star)?;
        if !f.is_finite() || (f - self.f_star).abs() > 1e-12 * self.f_star.abs().max(1.0) {
            return Err(Error::NotAMinimizer(format!(
                "f(x_star) = {f}, expected {}",
                self.f_star
            )));
        }
        for lambda in [0.1, 1.0, 10.0] {
            let p = self.prox(&x_star, lambda)?;
            if p.dist(&x_star) > 1e-12 * x_star.max_abs().max(1.0) {
                return Err(Error::NotAMinimizer(format!(
                    "prox(x_star, {lambda}) moved the point by {}",
                    p.dist(&x_star)
                )));
            }
        }
        self.x_star = x_star;
        Ok(self)
    }

    pub fn kind(&self) -> &ProxKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn x_star(&self) -> &Vector {
        &self.x_star
    }

    pub fn f_star(&self) -> f64 {
        self.f_star
    }

    pub fn label(&self) -> String {
        match &self.kind {
            ProxKind::ScaledNorm { eta } => format!("scaled_norm(eta={eta})"),
            ProxKind::Huber { eta, lipschitz } => format!("huber(eta={eta};L={lipschitz})"),
            ProxKind::Quadratic { .. } => format!("quadratic(d={})", self.dim),
            ProxKind::L1 { weight } => format!("l1(w={weight})"),
            ProxKind::BoxIndicator { .. } => format!("box_indicator(d={})", self.dim),
        }
    }

    /// Function value; `+inf` outside the domain of a box indicator.
    pub fn eval(&self, x: &Vector) -> Result<f64> {
        x.check_dim(self.dim)?;
        Ok(match &self.kind {
            ProxKind::ScaledNorm { eta } => eta * x.norm(),
            ProxKind::Huber { eta, lipschitz } => huber_value(*eta, *lipschitz, x.norm()),
            ProxKind::Quadratic { q, b } => {
                0.5 * q
                    .iter()
                    .zip(b.iter())
                    .zip(x.iter())
                    .map(|((qi, bi), xi)| qi * (xi - bi) * (xi - bi))
                    .sum::<f64>()
            }
            ProxKind::L1 { weight } => weight * x.iter().map(|c| c.abs()).sum::<f64>(),
            ProxKind::BoxIndicator { lo, hi } => {
                let inside = x
                    .iter()
                    .zip(lo.iter().zip(hi.iter()))
                    .all(|(xi, (l, h))| l <= xi && xi <= h);
                if inside {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
        })
    }

    /// `argmin_y f(y) + |y - x|^2 / (2 lambda)` in closed form.
    pub fn prox(&self, x: &Vector, lambda: f64) -> Result<Vector> {
        check_lambda(lambda)?;
        x.check_dim(self.dim)?;
        Ok(match &self.kind {
            ProxKind::ScaledNorm { eta } => {
                let n = x.norm();
                if n <= lambda * eta {
                    Vector::zeros(self.dim)
                } else {
                    x.scaled(1.0 - lambda * eta / n)
                }
            }
            ProxKind::Huber { eta, lipschitz } => {
                let n = x.norm();
                let shrink = 1.0 + lambda * lipschitz;
                if n <= shrink * eta / lipschitz {
                    x.scaled(1.0 / shrink)
                } else {
                    x.scaled(1.0 - lambda * eta / n)
                }
            }
            ProxKind::Quadratic { q, b } => {
                // (x_i + lambda q_i b_i) / (1 + lambda q_i)
                let coords = x
                    .iter()
                    .zip(q.iter().zip(b.iter()))
                    .map(|(xi, (qi, bi))| (xi + lambda * qi * bi) / (1.0 + lambda * qi))
                    .collect();
                Vector::from_vec_unchecked(coords)
            }
            ProxKind::L1 { weight } => {
                let t = lambda * weight;
                x.map(|c| c.signum() * (c.abs() - t).max(0.0))
            }
            ProxKind::BoxIndicator { lo, hi } => {
                let lo_clamped = x.zip_map(lo, f64::max);
                lo_clamped.zip_map(hi, f64::min)
            }
        })
    }

    /// Moreau envelope `f(z) + |x - z|^2 / (2 lambda)` with `z = prox(x)`.
    pub fn moreau_value(&self, x: &Vector, lambda: f64) -> Result<f64> {
        let z = self.prox(x, lambda)?;
        Ok(self.eval(&z)? + x.dist_sq(&z) / (2.0 * lambda))
    }

    /// Envelope gradient `(x - prox(x)) / lambda`, a subgradient of `f` at `prox(x)`.
    pub fn moreau_grad(&self, x: &Vector, lambda: f64) -> Result<Vector> {
        let z = self.prox(x, lambda)?;
        Ok((x - &z).scaled(1.0 / lambda))
    }
}

pub(crate) fn huber_value(eta: f64, lipschitz: f64, n: f64) -> f64 {
    if n <= eta / lipschitz {
        0.5 * lipschitz * n * n
    } else {
        eta * n - eta * eta / (2.0 * lipschitz)
    }
}

/// Default instance catalog in dimension `dim`, one instance per kind.
pub fn catalog(dim: usize) -> Vec<ProxInstance> {
    let q = Vector::new((0..dim).map(|i| 0.5 + 0.75 * (i % 3) as f64).collect()).expect("finite");
    let b = Vector::new((0..dim).map(|i| if i % 2 == 0 { 0.3 } else { -0.6 }).collect()).expect("finite");
    vec![
        ProxInstance::scaled_norm(1.0, dim).expect("valid"),
        ProxInstance::huber(1.0, 1.0, dim).expect("valid"),
        ProxInstance::quadratic(q, b).expect("valid"),
        ProxInstance::l1(0.5, dim).expect("valid"),
        ProxInstance::box_indicator(Vector::filled(dim, -1.0), Vector::filled(dim, 0.5)).expect("valid"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e1(scale: f64) -> Vector {
        Vector::unit(2, 0).scaled(scale)
    }

    #[test]
    fn eval_examples() {
        let f = ProxInstance::scaled_norm(2.0, 2).unwrap();
        assert_eq!(f.eval(&e1(3.0)).unwrap(), 6.0);
        let h = ProxInstance::huber(1.0, 1.0, 2).unwrap();
        assert_eq!(h.eval(&e1(0.5)).unwrap(), 0.125);
        assert_eq!(h.eval(&e1(2.0)).unwrap(), 1.5);
        let bx = ProxInstance::box_indicator(Vector::filled(2, -1.0), Vector::filled(2, 1.0)).unwrap();
        assert_eq!(bx.eval(&e1(0.5)).unwrap(), 0.0);
        assert_eq!(bx.eval(&e1(2.0)).unwrap(), f64::INFINITY);
        assert!(f.eval(&Vector::zeros(3)).is_err());
    }

    #[test]
    fn prox_examples() {
        let f = ProxInstance::scaled_norm(1.0, 2).unwrap();
        assert_eq!(f.prox(&Vector::zeros(2), 0.7).unwrap(), Vector::zeros(2));
        assert_eq!(f.prox(&e1(3.0), 1.0).unwrap(), e1(2.0));
        let h = ProxInstance::huber(1.0, 1.0, 2).unwrap();
        assert_eq!(h.prox(&e1(4.0), 1.0).unwrap(), e1(3.0));
        assert_eq!(h.prox(&e1(1.0), 1.0).unwrap(), e1(0.5));
        assert!(f.prox(&e1(1.0), 0.0).is_err());
        assert!(f.prox(&e1(1.0), -1.0).is_err());
    }

    #[test]
    fn huber_prox_continuous_at_interface() {
        let h = ProxInstance::huber(0.7, 2.0, 1).unwrap();
        let lambda = 0.3;
        let edge = (1.0 + lambda * 2.0) * 0.7 / 2.0;
        let below = h
            .prox(&Vector::new(vec![edge * (1.0 - 1e-12)]).unwrap(), lambda)
            .unwrap();
        let above = h
            .prox(&Vector::new(vec![edge * (1.0 + 1e-12)]).unwrap(), lambda)
            .unwrap();
        assert!((below[0] - above[0]).abs() < 1e-10);
    }

    #[test]
    fn quadratic_prox_and_envelope() {
        let q = ProxInstance::quadratic(Vector::filled(2, 1.0), Vector::zeros(2)).unwrap();
        assert_eq!(q.prox(&e1(1.0), 1.0).unwrap(), e1(0.5));
        assert_eq!(q.moreau_value(&e1(1.0), 1.0).unwrap(), 0.25);
        let shifted = ProxInstance::quadratic(Vector::filled(1, 2.0), Vector::filled(1, 1.0)).unwrap();
        // (x + lambda q b) / (1 + lambda q) = (3 + 2) / 3
        let z = shifted.prox(&Vector::filled(1, 3.0), 1.0).unwrap();
        assert!((z[0] - 5.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn moreau_examples() {
        let f = ProxInstance::scaled_norm(1.0, 2).unwrap();
        assert_eq!(f.moreau_value(&e1(3.0), 1.0).unwrap(), 2.5);
        assert_eq!(f.moreau_grad(&e1(3.0), 1.0).unwrap(), e1(1.0));
        for inst in catalog(3) {
            let xs = inst.x_star().clone();
            assert_eq!(inst.moreau_value(&xs, 0.8).unwrap(), inst.f_star());
            assert!(inst.moreau_grad(&xs, 0.8).unwrap().norm() == 0.0, "{}", inst.label());
        }
    }

    #[test]
    fn l1_and_box_prox() {
        let f = ProxInstance::l1(0.5, 3).unwrap();
        let x = Vector::new(vec![2.0, -0.2, -1.0]).unwrap();
        assert_eq!(f.prox(&x, 1.0).unwrap().as_slice(), &[1.5, 0.0, -0.5]);
        let bx = ProxInstance::box_indicator(Vector::filled(3, -1.0), Vector::filled(3, 0.5)).unwrap();
        assert_eq!(bx.prox(&x, 3.0).unwrap().as_slice(), &[0.5, -0.2, -1.0]);
    }

    #[test]
    fn constructor_validation() {
        assert!(ProxInstance::scaled_norm(0.0, 2).is_err());
        assert!(ProxInstance::huber(1.0, -1.0, 2).is_err());
        assert!(ProxInstance::l1(1.0, 0).is_err());
        assert!(ProxInstance::quadratic(Vector::filled(2, 0.0), Vector::zeros(2)).is_err());
        assert!(ProxInstance::quadratic(Vector::filled(2, 1.0), Vector::zeros(3)).is_err());
        assert!(ProxInstance::box_indicator(Vector::filled(2, 1.0), Vector::filled(2, 0.0)).is_err());
    }

    #[test]
    fn minimizer_replacement_is_checked() {
        let bx = ProxInstance::box_indicator(Vector::filled(2, -1.0), Vector::filled(2, 1.0)).unwrap();
        let inside = Vector::new(vec![0.5, -0.5]).unwrap();
        assert_eq!(bx.clone().with_minimizer(inside.clone()).unwrap().x_star(), &inside);
        assert!(bx.with_minimizer(Vector::filled(2, 2.0)).is_err());
        let f = ProxInstance::scaled_norm(1.0, 2).unwrap();
        assert!(f.with_minimizer(e1(0.1)).is_err());
    }
}
