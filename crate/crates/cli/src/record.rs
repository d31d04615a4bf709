//! JSON and text rendering of results.

use serde_json::{json, Map, Number, Value};

pub const SCHEMA_VERSION: &str = "ri-entropy/1";

/// A real as a JSON number with 17 significant digits; non-finite values
/// become the strings `"inf"`, `"-inf"` or `"nan"`.
pub fn real(v: f64) -> Value {
    if v.is_nan() {
        return Value::String("nan".into());
    }
    if v.is_infinite() {
        return Value::String(if v > 0.0 { "inf" } else { "-inf" }.into());
    }
    let text = format!("{v:.16e}");
    Value::Number(
        text.parse::<Number>()
            .expect("formatted float is valid JSON"),
    )
}

pub fn reals(vs: &[f64]) -> Value {
    Value::Array(vs.iter().map(|&v| real(v)).collect())
}

/// Reads a value written by [`real`].
pub fn parse_real(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_str().parse().ok(),
        Value::String(s) => match s.as_str() {
            "inf" => Some(f64::INFINITY),
            "-inf" => Some(f64::NEG_INFINITY),
            "nan" => Some(f64::NAN),
            _ => None,
        },
        _ => None,
    }
}

pub fn envelope(command: &str, input: Value, result: Value) -> Value {
    let mut m = Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("command".into(), json!(command));
    m.insert("input".into(), input);
    m.insert("result".into(), result);
    Value::Object(m)
}

pub fn fmt_real(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

pub fn fmt_reals(vs: &[f64]) -> String {
    let parts: Vec<String> = vs.iter().map(|&v| fmt_real(v)).collect();
    format!("({})", parts.join(", "))
}
