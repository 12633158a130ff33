//! Experiment specifications: a versioned JSON document plus dot-path
//! overrides from the command line.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecError {
    #[error("unknown experiment `{name}`; available: {}", available.join(", "))]
    UnknownExperiment { name: String, available: Vec<String> },
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("cannot read spec: {0}")]
    Io(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub schema_version: u32,
    pub name: String,
    pub experiment: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
}

impl ExperimentSpec {
    pub fn new(experiment: &str) -> Self {
        ExperimentSpec {
            schema_version: SCHEMA_VERSION,
            name: experiment.to_string(),
            experiment: experiment.to_string(),
            seed: 0,
            params: BTreeMap::new(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        let doc: Value = serde_json::from_str(text).map_err(|e| SpecError::Schema(format!("invalid JSON: {e}")))?;
        Self::from_value(doc)
    }

    pub fn from_value(doc: Value) -> Result<Self, SpecError> {
        let spec: ExperimentSpec = serde_json::from_value(doc).map_err(|e| SpecError::Schema(e.to_string()))?;
        if spec.schema_version != SCHEMA_VERSION {
            return Err(SpecError::Schema(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                spec.schema_version
            )));
        }
        if spec.name.is_empty() || spec.name.contains(['/', '\\']) {
            return Err(SpecError::Schema(format!("name `{}` must be non-empty and contain no path separators", spec.name)));
        }
        Ok(spec)
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("spec serializes")
    }

    /// Applies `key=value` overrides. Keys are dot paths into the document
    /// (`params.t_max`, `seed`); a bare key that is not a top-level field
    /// addresses `params`. Values parse as JSON, falling back to a string.
    pub fn with_overrides(&self, overrides: &[String]) -> Result<Self, SpecError> {
        let mut doc = self.to_value();
        for o in overrides {
            apply_override(&mut doc, o)?;
        }
        Self::from_value(doc)
    }
}

const TOP_LEVEL: [&str; 5] = ["schema_version", "name", "experiment", "seed", "params"];

pub fn apply_override(doc: &mut Value, assignment: &str) -> Result<(), SpecError> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| SpecError::Schema(format!("override `{assignment}` is not of the form key=value")))?;
    if key.is_empty() {
        return Err(SpecError::Schema(format!("override `{assignment}` has an empty key")));
    }
    let mut path: Vec<&str> = key.split('.').collect();
    if path.len() == 1 && !TOP_LEVEL.contains(&path[0]) {
        path.insert(0, "params");
    }
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut cur = doc;
    for (i, part) in path.iter().enumerate() {
        let obj = cur
            .as_object_mut()
            .ok_or_else(|| SpecError::Schema(format!("override `{key}`: `{}` is not an object", path[..i].join("."))))?;
        if i + 1 == path.len() {
            obj.insert(part.to_string(), value);
            return Ok(());
        }
        cur = obj.entry(part.to_string()).or_insert_with(|| Value::Object(Default::default()));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    Int,
    Float,
    Str,
    FloatList,
}

#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: ParamKind,
    /// Default as JSON text.
    pub default: &'static str,
    pub help: &'static str,
}

impl ParamSpec {
    fn check(&self, v: &Value) -> Result<Value, SpecError> {
        let bad = |what: &str| SpecError::Schema(format!("parameter `{}` must be {what}, got {v}", self.name));
        match self.kind {
            ParamKind::Int => v.as_u64().map(Value::from).ok_or_else(|| bad("a non-negative integer")),
            ParamKind::Float => v.as_f64().filter(|x| x.is_finite()).map(Value::from).ok_or_else(|| bad("a finite number")),
            ParamKind::Str => v.as_str().map(Value::from).ok_or_else(|| bad("a string")),
            ParamKind::FloatList => {
                let items = v.as_array().ok_or_else(|| bad("a list of numbers"))?;
                let xs: Option<Vec<f64>> = items.iter().map(|x| x.as_f64().filter(|x| x.is_finite())).collect();
                let xs = xs.filter(|xs| !xs.is_empty()).ok_or_else(|| bad("a non-empty list of finite numbers"))?;
                Ok(Value::from(xs))
            }
        }
    }
}

/// Parameters after defaults and type checks.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved(pub BTreeMap<String, Value>);

impl Resolved {
    pub fn int(&self, k: &str) -> usize {
        self.0[k].as_u64().expect("validated integer") as usize
    }

    pub fn float(&self, k: &str) -> f64 {
        self.0[k].as_f64().expect("validated number")
    }

    pub fn str(&self, k: &str) -> &str {
        self.0[k].as_str().expect("validated string")
    }

    pub fn floats(&self, k: &str) -> Vec<f64> {
        self.0[k].as_array().expect("validated list").iter().map(|x| x.as_f64().expect("validated number")).collect()
    }
}

/// Fills defaults and rejects unknown or ill-typed parameters.
pub fn resolve(schema: &[ParamSpec], given: &BTreeMap<String, Value>) -> Result<Resolved, SpecError> {
    for k in given.keys() {
        if !schema.iter().any(|p| p.name == k) {
            let known: Vec<&str> = schema.iter().map(|p| p.name).collect();
            return Err(SpecError::Schema(format!("unknown parameter `{k}`; accepted: {}", known.join(", "))));
        }
    }
    let mut out = BTreeMap::new();
    for p in schema {
        let v = match given.get(p.name) {
            Some(v) => v.clone(),
            None => serde_json::from_str(p.default).expect("defaults are valid JSON"),
        };
        out.insert(p.name.to_string(), p.check(&v)?);
    }
    Ok(Resolved(out))
}
