use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use cq_core::exactmath::{ExactRational, UnivariatePolynomial};

/// Integers are emitted as unquoted JSON numbers of any size.
pub fn int(v: &BigInt) -> Value {
    serde_json::from_str(&v.to_string()).expect("integer literal is valid JSON")
}

pub fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

/// Integral rationals become numbers; others become `"p/q"` strings.
pub fn rational(v: &ExactRational) -> Value {
    if v.is_integer() {
        int(&v.to_integer())
    } else {
        Value::String(v.to_string())
    }
}

/// Coefficients in ascending degree plus the rendered polynomial.
pub fn polynomial(p: &UnivariatePolynomial, var: &str) -> Value {
    json!({
        "coefficients": p.coeffs().iter().map(rational).collect::<Vec<_>>(),
        "text": p.display_in(var),
    })
}

pub fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

/// What a subcommand produced, in both output formats.
pub struct Outcome {
    pub result: Value,
    pub text: String,
}

impl Outcome {
    pub fn new(result: Value, text: impl Into<String>) -> Self {
        Self { result, text: text.into() }
    }

    pub fn int(v: &BigInt) -> Self {
        Self::new(int(v), v.to_string())
    }
}

/// The single JSON document printed for `--format json`; keys come out
/// sorted because `serde_json::Map` is ordered.
pub fn document(result: Value, params: Value, elapsed_ms: Option<f64>) -> String {
    let mut meta = Map::new();
    meta.insert("params".into(), params);
    if let Some(ms) = elapsed_ms {
        meta.insert("elapsed_ms".into(), json!(ms));
    }
    let doc = json!({ "schema": 1, "result": result, "meta": Value::Object(meta) });
    serde_json::to_string(&doc).expect("JSON values serialize")
}
