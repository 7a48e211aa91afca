use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{Kernel, KernelFamily};
use crate::error::{Error, Result};

/// JSON form of a kernel:
/// `{"type": ..., "params": {...}, "beta": number, "dim": integer}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default)]
    pub params: Value,
    pub beta: f64,
    pub dim: usize,
}

pub(crate) fn param_f64(params: &Value, key: &str) -> Result<f64> {
    params
        .get(key)
        .and_then(Value::as_f64)
        .ok_or_else(|| Error::Spec(format!("missing numeric parameter `{key}`")))
}

pub(crate) fn param_f64_or(params: &Value, key: &str, default: f64) -> Result<f64> {
    match params.get(key) {
        None => Ok(default),
        Some(v) => v
            .as_f64()
            .ok_or_else(|| Error::Spec(format!("parameter `{key}` must be a number"))),
    }
}

impl KernelSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build(&self) -> Result<Kernel> {
        let p = &self.params;
        let (dim, beta) = (self.dim, self.beta);
        match self.kind.as_str() {
            "fractional" => Kernel::fractional(dim, param_f64(p, "alpha")?, beta),
            "truncated_constant" => Kernel::truncated_constant(dim, param_f64(p, "c")?, param_f64(p, "r0")?, beta),
            "step_geometric" => Kernel::step_geometric(
                dim,
                param_f64(p, "a")?,
                param_f64(p, "q")?,
                param_f64_or(p, "b0", 1.0)?,
                param_f64(p, "b_ratio")?,
                beta,
            ),
            "exponential" => {
                Kernel::exponential_scaled(dim, param_f64(p, "rate")?, param_f64_or(p, "amplitude", 1.0)?, beta)
            }
            "table" => {
                let raw = p
                    .get("samples")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Spec("table kernel needs `samples`: [[r, j], ...]".into()))?;
                let mut samples = Vec::with_capacity(raw.len());
                for pair in raw {
                    let pair = pair
                        .as_array()
                        .filter(|a| a.len() == 2)
                        .ok_or_else(|| Error::Spec("table samples must be [r, j] pairs".into()))?;
                    let r = pair[0].as_f64().ok_or_else(|| Error::Spec("table radius must be a number".into()))?;
                    let j = pair[1].as_f64().ok_or_else(|| Error::Spec("table value must be a number".into()))?;
                    samples.push((r, j));
                }
                Kernel::table(dim, samples, beta)
            }
            "combination" => {
                let terms = p
                    .get("terms")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Spec("combination needs `terms`".into()))?;
                let mut parts = Vec::with_capacity(terms.len());
                for t in terms {
                    let w = param_f64(t, "weight")?;
                    let inner: KernelSpec = serde_json::from_value(
                        t.get("kernel")
                            .cloned()
                            .ok_or_else(|| Error::Spec("combination term needs `kernel`".into()))?,
                    )?;
                    parts.push((w, inner.build()?));
                }
                Kernel::combine(parts, beta)
            }
            other => Err(Error::Spec(format!("unknown kernel type `{other}`"))),
        }
    }
}

impl Kernel {
    pub fn from_json(text: &str) -> Result<Self> {
        KernelSpec::from_json(text)?.build()
    }

    pub fn to_spec(&self) -> KernelSpec {
        let params = match self.family() {
            KernelFamily::Fractional { alpha } => json!({ "alpha": alpha }),
            KernelFamily::TruncatedConstant { c, r0 } => json!({ "c": c, "r0": r0 }),
            KernelFamily::StepGeometric { a, q, b0, b_ratio } => {
                json!({ "a": a, "q": q, "b0": b0, "b_ratio": b_ratio })
            }
            KernelFamily::Exponential { rate, amplitude } => json!({ "rate": rate, "amplitude": amplitude }),
            KernelFamily::Table { samples } => {
                json!({ "samples": samples.iter().map(|(r, j)| vec![*r, *j]).collect::<Vec<_>>() })
            }
            KernelFamily::Combination(parts) => json!({
                "terms": parts
                    .iter()
                    .map(|(w, k)| json!({ "weight": w, "kernel": serde_json::to_value(k.to_spec()).unwrap() }))
                    .collect::<Vec<_>>()
            }),
        };
        KernelSpec {
            kind: self.name().to_string(),
            params,
            beta: self.beta(),
            dim: self.dim(),
        }
    }
}
