use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use super::instance::{ProxInstance, ProxKind};
use crate::error::{Error, Result};
use crate::math::Vector;

/// On-disk form of a [`ProxInstance`].
///
/// Loading rebuilds the instance from `kind` and `params`, then checks that
/// `dimension` agrees and that `x_star` really is a minimizer with value
/// `f_star`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceRecord {
    pub kind: String,
    pub params: Map<String, Value>,
    pub dimension: usize,
    pub x_star: Vector,
    pub f_star: f64,
}

impl From<&ProxInstance> for InstanceRecord {
    fn from(inst: &ProxInstance) -> Self {
        let (kind, params) = match inst.kind() {
            ProxKind::ScaledNorm { eta } => ("scaled_norm", json!({ "eta": eta })),
            ProxKind::Huber { eta, lipschitz } => ("huber", json!({ "eta": eta, "L": lipschitz })),
            ProxKind::Quadratic { q, b } => ("quadratic", json!({ "q": q, "b": b })),
            ProxKind::L1 { weight } => ("l1", json!({ "w": weight })),
            ProxKind::BoxIndicator { lo, hi } => ("box_indicator", json!({ "lo": lo, "hi": hi })),
        };
        let Value::Object(params) = params else {
            unreachable!("params are built as objects")
        };
        InstanceRecord {
            kind: kind.to_string(),
            params,
            dimension: inst.dim(),
            x_star: inst.x_star().clone(),
            f_star: inst.f_star(),
        }
    }
}

fn scalar(params: &Map<String, Value>, key: &'static str) -> Result<f64> {
    params
        .get(key)
        .and_then(Value::as_f64)
        .ok_or_else(|| Error::invalid(key, "missing or not a number"))
}

fn vector(params: &Map<String, Value>, key: &'static str) -> Result<Vector> {
    let value = params.get(key).ok_or_else(|| Error::invalid(key, "missing"))?;
    Ok(serde_json::from_value(value.clone())?)
}

fn expect_keys(params: &Map<String, Value>, keys: &[&str]) -> Result<()> {
    match params.keys().find(|k| !keys.contains(&k.as_str())) {
        Some(k) => Err(Error::Serialization(format!("unknown parameter `{k}`"))),
        None => Ok(()),
    }
}

impl TryFrom<InstanceRecord> for ProxInstance {
    type Error = Error;

    fn try_from(rec: InstanceRecord) -> Result<Self> {
        let p = &rec.params;
        let d = rec.dimension;
        let inst = match rec.kind.as_str() {
            "scaled_norm" => {
                expect_keys(p, &["eta"])?;
                ProxInstance::scaled_norm(scalar(p, "eta")?, d)?
            }
            "huber" => {
                expect_keys(p, &["eta", "L"])?;
                ProxInstance::huber(scalar(p, "eta")?, scalar(p, "L")?, d)?
            }
            "quadratic" => {
                expect_keys(p, &["q", "b"])?;
                ProxInstance::quadratic(vector(p, "q")?, vector(p, "b")?)?
            }
            "l1" => {
                expect_keys(p, &["w"])?;
                ProxInstance::l1(scalar(p, "w")?, d)?
            }
            "box_indicator" => {
                expect_keys(p, &["lo", "hi"])?;
                ProxInstance::box_indicator(vector(p, "lo")?, vector(p, "hi")?)?
            }
            other => return Err(Error::Serialization(format!("unknown instance kind `{other}`"))),
        };
        if inst.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: inst.dim(),
            });
        }
        if (rec.f_star - inst.f_star()).abs() > 1e-12 * inst.f_star().abs().max(1.0) {
            return Err(Error::NotAMinimizer(format!(
                "declared f_star {} but the optimal value is {}",
                rec.f_star,
                inst.f_star()
            )));
        }
        inst.with_minimizer(rec.x_star)
    }
}

impl ProxInstance {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&InstanceRecord::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let rec: InstanceRecord = serde_json::from_str(text)?;
        ProxInstance::try_from(rec)
    }
}
