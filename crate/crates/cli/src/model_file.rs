//! The JSON model file:
//!
//! ```json
//! { "group": "Z2xZ2",
//!   "metric": { "a00": 1, "a01": 2, "b00": 3, "b10": 3 },
//!   "q": { "theta": 0.0 },
//!   "signature": "euclidean" }
//! ```
//!
//! The metric may instead give full site arrays `{"a": [..4], "b": [..4]}`,
//! which can describe metrics that are not edge-symmetric.

use std::fs;
use std::path::Path;

use serde::Deserialize;

use qrg_core::engine::{metric_from_arrays, Metric};
use qrg_core::model::{MetricValues, Signature};
use qrg_core::{make_phase, Complex64, Phase};

use crate::Failure;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    group: String,
    metric: MetricJson,
    #[serde(default)]
    q: Option<QJson>,
    #[serde(default)]
    signature: Option<Signature>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MetricJson {
    a00: Option<f64>,
    a01: Option<f64>,
    b00: Option<f64>,
    b10: Option<f64>,
    a: Option<[f64; 4]>,
    b: Option<[f64; 4]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QJson {
    theta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelMetric {
    Values(MetricValues),
    /// Site arrays in the order 00, 01, 10, 11 that are not edge-symmetric.
    Arrays { a: [f64; 4], b: [f64; 4] },
}

impl ModelMetric {
    pub fn metric(&self) -> Result<Metric<Complex64>, Failure> {
        let c = |x: [f64; 4]| x.map(|v| Complex64::new(v, 0.0));
        match self {
            ModelMetric::Values(v) => Ok(v.metric()?),
            ModelMetric::Arrays { a, b } => Ok(metric_from_arrays(c(*a), c(*b))?),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Model {
    pub metric: ModelMetric,
    pub q: Phase,
    pub signature: Signature,
}

fn schema(path: &str, msg: impl std::fmt::Display) -> Failure {
    Failure::new(2, format!("schema error at {path}: {msg}"))
}

pub fn parse_model(text: &str) -> Result<Model, Failure> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: ModelFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        schema(if path.is_empty() { "." } else { &path }, e.into_inner())
    })?;
    if file.group != "Z2xZ2" {
        return Err(schema("group", format!("expected \"Z2xZ2\", got {:?}", file.group)));
    }
    let m = file.metric;
    let metric = match (m.a00, m.a01, m.b00, m.b10, m.a, m.b) {
        (Some(a00), Some(a01), Some(b00), Some(b10), None, None) => {
            ModelMetric::Values(MetricValues::new(a00, a01, b00, b10))
        }
        (None, None, None, None, Some(a), Some(b)) => {
            if a[0] == a[2] && a[1] == a[3] && b[0] == b[1] && b[2] == b[3] {
                ModelMetric::Values(MetricValues::new(a[0], a[1], b[0], b[2]))
            } else {
                ModelMetric::Arrays { a, b }
            }
        }
        _ => {
            return Err(schema(
                "metric",
                "give either all of a00, a01, b00, b10 or both arrays a and b",
            ))
        }
    };
    let named: Vec<(String, f64)> = match &metric {
        ModelMetric::Values(v) => v.named().iter().map(|(n, x)| (n.to_string(), *x)).collect(),
        ModelMetric::Arrays { a, b } => (0..4)
            .map(|x| (format!("a[{x}]"), a[x]))
            .chain((0..4).map(|x| (format!("b[{x}]"), b[x])))
            .collect(),
    };
    for (name, x) in &named {
        if !x.is_finite() || *x == 0.0 {
            return Err(schema(&format!("metric.{name}"), format!("weight must be finite and nonzero, got {x}")));
        }
    }
    let signature = file.signature.unwrap_or_default();
    let fits = named.iter().all(|(name, x)| match signature {
        Signature::Euclidean => *x > 0.0,
        Signature::Minkowski => (*x < 0.0) == name.starts_with('a'),
    });
    if !fits {
        return Err(schema(
            "signature",
            format!("metric values do not fit the {} sign pattern", signature.name()),
        ));
    }
    let theta = file.q.map_or(0.0, |q| q.theta);
    let q = make_phase(theta).map_err(|e| schema("q.theta", e))?;
    Ok(Model { metric, q, signature })
}

pub fn load_model(path: &Path) -> Result<Model, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::new(2, format!("cannot read {}: {e}", path.display())))?;
    parse_model(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_value_form() {
        let m = parse_model(r#"{"group":"Z2xZ2","metric":{"a00":1,"a01":2,"b00":3,"b10":3}}"#).unwrap();
        assert_eq!(m.metric, ModelMetric::Values(MetricValues::new(1.0, 2.0, 3.0, 3.0)));
        assert_eq!(m.signature, Signature::Euclidean);
        assert_eq!(m.q.theta(), 0.0);
    }

    #[test]
    fn symmetric_arrays_collapse() {
        let m = parse_model(r#"{"group":"Z2xZ2","metric":{"a":[1,2,1,2],"b":[3,3,3,3]}}"#).unwrap();
        assert_eq!(m.metric, ModelMetric::Values(MetricValues::new(1.0, 2.0, 3.0, 3.0)));
        let m = parse_model(r#"{"group":"Z2xZ2","metric":{"a":[1,2,3,2],"b":[3,3,3,3]}}"#).unwrap();
        assert!(matches!(m.metric, ModelMetric::Arrays { .. }));
    }

    #[test]
    fn errors_name_the_field() {
        let cases = [
            (r#"{"group":"Z2xZ2","metric":{"a00":0,"a01":2,"b00":3,"b10":3}}"#, "metric.a00"),
            (r#"{"group":"Z2xZ2","metric":{"a00":"x","a01":2,"b00":3,"b10":3}}"#, "metric.a00"),
            (r#"{"group":"Z3","metric":{"a00":1,"a01":2,"b00":3,"b10":3}}"#, "group"),
            (r#"{"group":"Z2xZ2","metric":{"a00":1,"a01":2,"b00":3}}"#, "metric"),
            (r#"{"group":"Z2xZ2","metric":{"a00":1,"a01":2,"b00":3,"b10":3},"q":{"phi":1}}"#, "q"),
            (
                r#"{"group":"Z2xZ2","metric":{"a00":1,"a01":2,"b00":3,"b10":3},"signature":"minkowski"}"#,
                "signature",
            ),
        ];
        for (text, path) in cases {
            let err = parse_model(text).unwrap_err();
            assert_eq!(err.code, 2);
            assert!(err.message.contains(&format!("at {path}")), "{}", err.message);
        }
    }
}
