//! Stepsize and relaxation schedules: constant, TV, silver and its
//! right/left variants, plus explicit user-supplied vectors.

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};

/// Silver ratio `1 + sqrt(2)`.
pub const RHO: f64 = 1.0 + std::f64::consts::SQRT_2;

/// Largest silver order accepted by the constructors.
pub const MAX_SILVER_M: u32 = 20;

/// Largest schedule length accepted by the constructors.
pub const MAX_STEPS: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScheduleKind {
    Constant { alpha: f64 },
    Tv,
    Silver { m: u32 },
    RightSilver { m: u32 },
    LeftSilver { m: u32 },
    Explicit,
}

impl ScheduleKind {
    pub fn name(&self) -> &'static str {
        match self {
            ScheduleKind::Constant { .. } => "constant",
            ScheduleKind::Tv => "tv",
            ScheduleKind::Silver { .. } => "silver",
            ScheduleKind::RightSilver { .. } => "right_silver",
            ScheduleKind::LeftSilver { .. } => "left_silver",
            ScheduleKind::Explicit => "explicit",
        }
    }

    /// Silver order for the silver family, `None` otherwise.
    pub fn silver_order(&self) -> Option<u32> {
        match self {
            ScheduleKind::Silver { m } | ScheduleKind::RightSilver { m } | ScheduleKind::LeftSilver { m } => Some(*m),
            _ => None,
        }
    }
}

/// `rho`, `gamma_m` and `T_m` for a silver order `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SilverConstants {
    pub m: u32,
    pub rho: f64,
    /// `rho^m` by repeated multiplication.
    pub rho_m: f64,
    /// Positive root of `g^2 - g - rho^m = 0`.
    pub gamma_m: f64,
    /// `gamma_m + rho^m`, which equals `gamma_m^2`.
    pub t_m: f64,
}

/// `rho^m` by repeated multiplication.
pub fn rho_pow(m: u32) -> f64 {
    (0..m).fold(1.0, |acc, _| acc * RHO)
}

pub fn silver_constants(m: u32) -> SilverConstants {
    let rho_m = rho_pow(m);
    let gamma_m = 0.5 * (1.0 + (1.0 + 4.0 * rho_m).sqrt());
    SilverConstants {
        m,
        rho: RHO,
        rho_m,
        gamma_m,
        t_m: gamma_m + rho_m,
    }
}

/// A finite positive schedule with its partial sums `A_k = sum_{i<=k} alpha_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScheduleRecord", into = "ScheduleRecord")]
pub struct Schedule {
    kind: ScheduleKind,
    steps: Vec<f64>,
    partial_sums: Vec<f64>,
}

fn check_len(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("N", "schedule length must be at least 1"));
    }
    if n > MAX_STEPS {
        return Err(Error::LengthCap {
            requested: n,
            cap: MAX_STEPS,
        });
    }
    Ok(())
}

fn check_silver_order(m: u32) -> Result<()> {
    if m > MAX_SILVER_M {
        return Err(Error::LengthCap {
            requested: 1usize << m.min(63),
            cap: 1 << MAX_SILVER_M,
        });
    }
    Ok(())
}

/// `pi^(m)` built by its recursion.
fn silver_steps(m: u32) -> Vec<f64> {
    let mut steps = vec![std::f64::consts::SQRT_2];
    let mut rho_prev = 1.0;
    for _ in 1..m {
        let mut next = Vec::with_capacity(2 * steps.len() + 1);
        next.extend_from_slice(&steps);
        next.push(1.0 + rho_prev);
        next.extend_from_slice(&steps);
        steps = next;
        rho_prev *= RHO;
    }
    steps
}

impl Schedule {
    fn from_parts(kind: ScheduleKind, steps: Vec<f64>) -> Self {
        let partial_sums = steps
            .iter()
            .scan(0.0, |acc, a| {
                *acc += a;
                Some(*acc)
            })
            .collect();
        Schedule {
            kind,
            steps,
            partial_sums,
        }
    }

    pub fn constant(alpha: f64, n: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::invalid(
                "alpha",
                format!("must be positive and finite, got {alpha}"),
            ));
        }
        check_len(n)?;
        Ok(Self::from_parts(ScheduleKind::Constant { alpha }, vec![alpha; n]))
    }

    pub fn tv(n: usize) -> Result<Self> {
        check_len(n)?;
        let mut steps = Vec::with_capacity(n);
        let mut a_prev = 0.0f64;
        for k in 0..n {
            let alpha = if k == 0 {
                std::f64::consts::SQRT_2
            } else {
                // (-A + sqrt(A^2 + c)) / 2 rewritten as c / (2 (A + sqrt(A^2 + c))).
                let c = 8.0 * (a_prev + 1.0);
                c / (2.0 * (a_prev + (a_prev * a_prev + c).sqrt()))
            };
            steps.push(alpha);
            a_prev += alpha;
        }
        let sched = Self::from_parts(ScheduleKind::Tv, steps);
        let worst = sched.tv_identity_residual();
        if worst > 1e-12 {
            return Err(Error::invalid("tv", format!("step identity residual {worst:e}")));
        }
        Ok(sched)
    }

    pub fn silver(m: u32) -> Result<Self> {
        if m < 1 {
            return Err(Error::invalid("m", "silver order must be at least 1"));
        }
        check_silver_order(m)?;
        Ok(Self::from_parts(ScheduleKind::Silver { m }, silver_steps(m)))
    }

    pub fn right_silver(m: u32) -> Result<Self> {
        check_silver_order(m)?;
        let mut steps = if m == 0 { Vec::new() } else { silver_steps(m) };
        steps.push(silver_constants(m).gamma_m);
        Ok(Self::from_parts(ScheduleKind::RightSilver { m }, steps))
    }

    pub fn left_silver(m: u32) -> Result<Self> {
        let mut steps = Self::right_silver(m)?.steps;
        steps.reverse();
        Ok(Self::from_parts(ScheduleKind::LeftSilver { m }, steps))
    }

    /// User-supplied steps; only positivity and finiteness are checked.
    pub fn explicit(steps: Vec<f64>) -> Result<Self> {
        check_len(steps.len())?;
        if let Some(i) = steps.iter().position(|a| !(*a > 0.0 && a.is_finite())) {
            return Err(Error::invalid(
                "steps",
                format!("entry {i} is {} (must be positive)", steps[i]),
            ));
        }
        Ok(Self::from_parts(ScheduleKind::Explicit, steps))
    }

    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    pub fn steps(&self) -> &[f64] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn partial_sums(&self) -> &[f64] {
        &self.partial_sums
    }

    /// `A_{k-1}` with the convention `A_{-1} = 0`.
    pub fn partial_sum_before(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.partial_sums[k - 1]
        }
    }

    pub fn total(&self) -> f64 {
        *self.partial_sums.last().expect("schedules are nonempty")
    }

    /// Largest relative residual of `alpha_k^2 - 2 = (2 - alpha_k) A_{k-1}`.
    pub fn tv_identity_residual(&self) -> f64 {
        self.steps
            .iter()
            .enumerate()
            .map(|(k, &a)| {
                let prev = self.partial_sum_before(k);
                let lhs = a * a - 2.0;
                let rhs = (2.0 - a) * prev;
                (lhs - rhs).abs() / 1f64.max(prev).max(a * a)
            })
            .fold(0.0, f64::max)
    }

    pub fn reversed(&self) -> Schedule {
        let mut steps = self.steps.clone();
        steps.reverse();
        Self::from_parts(ScheduleKind::Explicit, steps)
    }

    /// Human label such as `silver(m=3)` or `constant(alpha=1.5;N=4)`.
    pub fn label(&self) -> String {
        match self.kind {
            ScheduleKind::Constant { alpha } => format!("constant(alpha={alpha};N={})", self.len()),
            ScheduleKind::Tv => format!("tv(N={})", self.len()),
            ScheduleKind::Silver { m } => format!("silver(m={m})"),
            ScheduleKind::RightSilver { m } => format!("right_silver(m={m})"),
            ScheduleKind::LeftSilver { m } => format!("left_silver(m={m})"),
            ScheduleKind::Explicit => format!("explicit(N={})", self.len()),
        }
    }
}

/// On-disk form `{kind, params, steps}` of a [`Schedule`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleRecord {
    pub kind: String,
    #[serde(default)]
    pub params: Map<String, Value>,
    pub steps: Vec<f64>,
}

impl From<Schedule> for ScheduleRecord {
    fn from(s: Schedule) -> Self {
        let params = match s.kind {
            ScheduleKind::Constant { alpha } => json!({ "alpha": alpha, "N": s.len() }),
            ScheduleKind::Tv | ScheduleKind::Explicit => json!({ "N": s.len() }),
            ScheduleKind::Silver { m } | ScheduleKind::RightSilver { m } | ScheduleKind::LeftSilver { m } => {
                json!({ "m": m })
            }
        };
        let Value::Object(params) = params else {
            unreachable!("params are built as objects")
        };
        ScheduleRecord {
            kind: s.kind.name().to_string(),
            params,
            steps: s.steps,
        }
    }
}

fn param_u64(params: &Map<String, Value>, key: &'static str) -> Result<u64> {
    params
        .get(key)
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::invalid(key, "missing or not a nonnegative integer"))
}

impl TryFrom<ScheduleRecord> for Schedule {
    type Error = Error;

    fn try_from(rec: ScheduleRecord) -> Result<Self> {
        let p = &rec.params;
        let order =
            |p| -> Result<u32> { u32::try_from(param_u64(p, "m")?).map_err(|_| Error::invalid("m", "too large")) };
        let rebuilt = match rec.kind.as_str() {
            "constant" => {
                let alpha = p
                    .get("alpha")
                    .and_then(Value::as_f64)
                    .ok_or_else(|| Error::invalid("alpha", "missing or not a number"))?;
                Schedule::constant(alpha, param_u64(p, "N")? as usize)?
            }
            "tv" => Schedule::tv(param_u64(p, "N")? as usize)?,
            "silver" => Schedule::silver(order(p)?)?,
            "right_silver" => Schedule::right_silver(order(p)?)?,
            "left_silver" => Schedule::left_silver(order(p)?)?,
            "explicit" => return Schedule::explicit(rec.steps),
            other => return Err(Error::Serialization(format!("unknown schedule kind `{other}`"))),
        };
        let consistent = rebuilt.steps.len() == rec.steps.len()
            && rebuilt
                .steps
                .iter()
                .zip(&rec.steps)
                .all(|(a, b)| (a - b).abs() <= 1e-12 * a.abs().max(1.0));
        if !consistent {
            return Err(Error::Serialization(format!(
                "steps do not match a {} schedule with the given params",
                rec.kind
            )));
        }
        Ok(rebuilt)
    }
}
