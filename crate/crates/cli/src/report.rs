use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use subriemann::{Matrix, Scalar, Tensor4};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub input_digest: String,
    pub command: String,
    pub results: Value,
    pub diagnostics: Value,
}

impl Report {
    pub fn new(command: &str, digest_source: &str, results: Value, diagnostics: Value) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION"),
            input_digest: digest(digest_source),
            command: command.to_string(),
            results,
            diagnostics,
        }
    }

    pub fn render(&self, text: bool) -> String {
        if text {
            let mut lines = vec![
                format!("command: {}", self.command),
                format!("input_digest: {}", self.input_digest),
            ];
            flatten("results", &self.results, &mut lines);
            flatten("diagnostics", &self.diagnostics, &mut lines);
            lines.join("\n")
        } else {
            serde_json::to_string_pretty(self).expect("report serializes")
        }
    }
}

pub fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&format!("{prefix}.{k}"), x, out);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(plain).collect();
            out.push(format!("{prefix}: [{}]", parts.join(", ")));
        }
        other => out.push(format!("{prefix}: {}", plain(other))),
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn s<S: Scalar>(x: &S) -> Value {
    Value::String(x.to_report_string())
}

pub fn vector<S: Scalar>(v: &[S]) -> Value {
    Value::Array(v.iter().map(s).collect())
}

pub fn vectors<S: Scalar>(vs: &[Vec<S>]) -> Value {
    Value::Array(vs.iter().map(|v| vector(v)).collect())
}

pub fn matrix<S: Scalar>(m: &Matrix<S>) -> Value {
    Value::Array((0..m.rows()).map(|r| vector(&m.row(r))).collect())
}

pub fn floats(v: &[f64]) -> Value {
    json!(v)
}

/// Nonzero entries with 1-based indices.
pub fn tensor4_entries<S: Scalar>(t: &Tensor4<S>, tol: f64) -> Value {
    let [a, b, c, d] = t.dims();
    let mut out = Vec::new();
    for i in 0..a {
        for j in 0..b {
            for k in 0..c {
                for l in 0..d {
                    let v = &t[(i, j, k, l)];
                    if !v.is_zero_tol(tol) {
                        out.push(json!({"index": [i + 1, j + 1, k + 1, l + 1], "value": s(v)}));
                    }
                }
            }
        }
    }
    Value::Array(out)
}

pub fn object(pairs: Vec<(&str, Value)>) -> Value {
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_rendering_flattens_nested_values() {
        let r = Report::new(
            "x",
            "abc",
            json!({"a": {"b": ["1/2", "3"]}, "c": [{"d": true}]}),
            json!({"tol": 0.0}),
        );
        let text = r.render(true);
        assert!(text.contains("results.a.b: [1/2, 3]"));
        assert!(text.contains("results.c[0].d: true"));
        assert!(text.contains("diagnostics.tol: 0.0"));
    }

    #[test]
    fn digest_is_sha256_hex() {
        assert_eq!(
            digest(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
