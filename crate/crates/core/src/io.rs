//! Instance JSON.
//!
//! ```json
//! {"n": 2, "numeric_mode": "rational", "weights": ["1/2", "3/1"],
//!  "segments": [{"theta": "1/1", "prices": ["2/1", "0/1"]}]}
//! ```
//!
//! Float files hold plain numbers. Rational files hold `"p/q"` strings;
//! plain numbers are also accepted there and read exactly from their decimal
//! text. An optional `"meta"` object is carried through untouched.

use std::path::Path;

use num::BigRational;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::model::{validate_instance, Instance, RawInstance, Segment};
use crate::scalar::{NumericMode, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub enum AnyInstance {
    Float(Instance<f64>),
    Rational(Instance<BigRational>),
}

impl AnyInstance {
    pub fn mode(&self) -> NumericMode {
        match self {
            AnyInstance::Float(_) => NumericMode::Float,
            AnyInstance::Rational(_) => NumericMode::Rational,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            AnyInstance::Float(i) => i.n(),
            AnyInstance::Rational(i) => i.n(),
        }
    }

    /// Switches backend; float to rational is exact.
    pub fn into_mode(self, mode: NumericMode) -> Result<AnyInstance> {
        Ok(match (self, mode) {
            (AnyInstance::Float(i), NumericMode::Rational) => AnyInstance::Rational(i.convert()?),
            (AnyInstance::Rational(i), NumericMode::Float) => AnyInstance::Float(i.convert()?),
            (same, _) => same,
        })
    }

    pub fn to_json(&self, meta: Option<&Value>) -> Value {
        match self {
            AnyInstance::Float(i) => instance_to_json(i, meta),
            AnyInstance::Rational(i) => instance_to_json(i, meta),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceDocument {
    pub instance: AnyInstance,
    pub meta: Option<Value>,
}

pub fn instance_to_json<S: Scalar>(inst: &Instance<S>, meta: Option<&Value>) -> Value {
    let list = |v: &[S]| Value::Array(v.iter().map(Scalar::to_json).collect());
    let segments: Vec<Value> = inst
        .segments()
        .iter()
        .map(|s| json!({"theta": s.theta.to_json(), "prices": list(&s.prices)}))
        .collect();
    let mut obj = Map::new();
    obj.insert("n".into(), json!(inst.n()));
    obj.insert("numeric_mode".into(), json!(S::MODE.as_str()));
    obj.insert("weights".into(), list(inst.weights()));
    obj.insert("segments".into(), Value::Array(segments));
    if let Some(m) = meta {
        obj.insert("meta".into(), m.clone());
    }
    Value::Object(obj)
}

/// Pretty JSON with a trailing newline.
pub fn instance_to_string<S: Scalar>(inst: &Instance<S>, meta: Option<&Value>) -> String {
    let mut s =
        serde_json::to_string_pretty(&instance_to_json(inst, meta)).expect("JSON values serialize");
    s.push('\n');
    s
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::Parse(format!("missing field {key:?}")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("{what} must be an array")))
}

fn parse_typed<S: Scalar>(obj: &Map<String, Value>) -> Result<Instance<S>> {
    let scalars = |v: &Value, what: &str| -> Result<Vec<S>> {
        array(v, what)?.iter().map(S::from_json).collect()
    };
    let weights = scalars(field(obj, "weights")?, "weights")?;
    let mut segments = Vec::new();
    for (k, seg) in array(field(obj, "segments")?, "segments")?
        .iter()
        .enumerate()
    {
        let seg = seg
            .as_object()
            .ok_or_else(|| Error::Parse(format!("segment {} must be an object", k + 1)))?;
        segments.push(Segment::new(
            S::from_json(field(seg, "theta")?)?,
            scalars(field(seg, "prices")?, "prices")?,
        ));
    }
    if let Some(n) = obj.get("n") {
        let n = n
            .as_u64()
            .ok_or_else(|| Error::Parse("n must be a nonnegative integer".into()))?;
        if n as usize != weights.len() {
            return Err(Error::Parse(format!(
                "n = {n} but {} weights given",
                weights.len()
            )));
        }
    }
    validate_instance(RawInstance { weights, segments })
}

pub fn parse_instance(text: &str) -> Result<InstanceDocument> {
    let v: Value = serde_json::from_str(text)?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("instance must be a JSON object".into()))?;
    let mode = match obj.get("numeric_mode") {
        None => NumericMode::Float,
        Some(m) => serde_json::from_value(m.clone()).map_err(|_| {
            Error::Parse(format!(
                "numeric_mode must be \"float\" or \"rational\", got {m}"
            ))
        })?,
    };
    let instance = match mode {
        NumericMode::Float => AnyInstance::Float(parse_typed(obj)?),
        NumericMode::Rational => AnyInstance::Rational(parse_typed(obj)?),
    };
    Ok(InstanceDocument {
        instance,
        meta: obj.get("meta").cloned(),
    })
}

pub fn read_instance(path: &Path) -> Result<InstanceDocument> {
    parse_instance(&std::fs::read_to_string(path)?)
}
