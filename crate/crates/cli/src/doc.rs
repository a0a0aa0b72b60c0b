//! Result documents and their canonical JSON and text renderings.

use std::fmt::Display;

use qshalg::fdb::Diffeo;
use qshalg::linear::Lin;
use qshalg::qsh::Word;
use qshalg::rings::{format_rational, LaurentSeries, Rational, Ring};
use serde_json::{json, Map, Value};

/// Output format of a command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// A command result: echoed inputs, named outputs and a provenance block.
///
/// `serde_json::Map` keeps keys sorted, so rendering is canonical.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultDocument {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub outputs: Map<String, Value>,
    pub provenance: Map<String, Value>,
}

impl ResultDocument {
    pub fn new(command: &str) -> Self {
        Self { command: command.to_string(), ..Self::default() }
    }

    pub fn input(&mut self, key: &str, v: impl Into<Value>) {
        self.inputs.insert(key.to_string(), v.into());
    }

    pub fn output(&mut self, key: &str, v: impl Into<Value>) {
        self.outputs.insert(key.to_string(), v.into());
    }

    pub fn provenance(&mut self, key: &str, v: impl Into<Value>) {
        self.provenance.insert(key.to_string(), v.into());
    }

    /// The document as one JSON object; outputs sit at the top level next
    /// to `command`, `inputs` and `provenance`.
    pub fn to_value(&self) -> Value {
        let mut top = self.outputs.clone();
        if !self.command.is_empty() {
            top.insert("command".into(), Value::String(self.command.clone()));
        }
        if !self.inputs.is_empty() {
            top.insert("inputs".into(), Value::Object(self.inputs.clone()));
        }
        top.insert("provenance".into(), Value::Object(self.provenance.clone()));
        Value::Object(top)
    }
}

/// Canonical JSON with sorted keys and a trailing newline.
pub fn emit_json(doc: &ResultDocument) -> String {
    let mut s = serde_json::to_string_pretty(&doc.to_value()).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Indented `key: value` lines.
pub fn emit_text(doc: &ResultDocument) -> String {
    let mut out = String::new();
    let Value::Object(top) = doc.to_value() else { unreachable!() };
    for (k, v) in &top {
        text_lines(&mut out, k, v, 0);
    }
    out
}

pub fn emit(doc: &ResultDocument, format: Format) -> String {
    match format {
        Format::Json => emit_json(doc),
        Format::Text => emit_text(doc),
    }
}

fn text_lines(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) if !m.is_empty() => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, x) in m {
                text_lines(out, k, x, depth + 1);
            }
        }
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = a.iter().map(scalar_text).collect();
            out.push_str(&format!("{pad}{key}: [{}]\n", items.join(", ")));
        }
        Value::Array(a) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (i, x) in a.iter().enumerate() {
                text_lines(out, &format!("[{i}]"), x, depth + 1);
            }
        }
        other => out.push_str(&format!("{pad}{key}: {}\n", scalar_text(other))),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn rational_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

/// `{exponent: coefficient}`; a truncated series also carries `"O"`, the
/// first unknown exponent.
pub fn series_json<C: Ring>(s: &LaurentSeries<C>) -> Value {
    let mut m = Map::new();
    for (e, c) in s.terms() {
        m.insert(e.to_string(), Value::String(c.to_string()));
    }
    if let Some(h) = s.high() {
        m.insert("O".into(), Value::String((h + 1).to_string()));
    }
    Value::Object(m)
}

/// `{"1": f₁, "2": f₂, …}` with coefficients rendered by `coeff`.
pub fn diffeo_json<C: Ring>(f: &Diffeo<C>, coeff: impl Fn(&C) -> Value) -> Value {
    let m: Map<String, Value> = f.coeffs().iter().enumerate().map(|(i, c)| ((i + 1).to_string(), coeff(c))).collect();
    json!({ "coeffs": Value::Object(m), "order": f.order() })
}

/// `[{word: [symbols], coeff: "p/q"}]` in canonical word order.
pub fn words_json<L: Ord + Clone + Display>(x: &Lin<Word<L>>) -> Value {
    Value::Array(
        x.iter()
            .map(|(w, c)| {
                let letters: Vec<Value> = w.letters().iter().map(|l| Value::String(l.to_string())).collect();
                json!({ "word": letters, "coeff": rational_json(c) })
            })
            .collect(),
    )
}
