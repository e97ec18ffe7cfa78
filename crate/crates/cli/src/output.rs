use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Map, Value};

use crate::error::CliError;

pub const TOOL: &str = "robust-ensembles";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const SCHEMA: u32 = 1;

/// `%.17g`: 17 significant digits, trailing zeros dropped, so every value
/// round-trips exactly.
pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..17).contains(&exp) {
        let s = format!("{v:.*}", (16 - exp) as usize);
        trim_zeros(&s).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// What produced an artifact: command and every effective parameter.
#[derive(Debug, Clone)]
pub struct Provenance {
    pub command: &'static str,
    pub params: Vec<(&'static str, String)>,
}

impl Provenance {
    pub fn new(command: &'static str) -> Self {
        Provenance { command, params: Vec::new() }
    }

    pub fn num(mut self, key: &'static str, v: f64) -> Self {
        self.params.push((key, fmt_num(v)));
        self
    }

    pub fn text(mut self, key: &'static str, v: impl ToString) -> Self {
        self.params.push((key, v.to_string()));
        self
    }

    pub fn line(&self) -> String {
        let mut s = format!("# {TOOL} {VERSION} {}", self.command);
        for (k, v) in &self.params {
            s.push_str(&format!(" {k}={v}"));
        }
        s
    }

    pub fn json(&self) -> Value {
        let params: Map<String, Value> = self.params.iter().map(|(k, v)| (k.to_string(), Value::String(v.clone()))).collect();
        json!({ "tool": TOOL, "version": VERSION, "command": self.command, "parameters": params })
    }

    /// Comment embedded in SVG output.
    pub fn svg_comment(&self, no_timestamp: bool) -> String {
        let mut s = self.line().trim_start_matches("# ").to_string();
        if !no_timestamp {
            let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
            s.push_str(&format!(" generated={secs}"));
        }
        s
    }
}

/// Wraps a JSON payload with the schema version and provenance.
pub fn json_document(prov: &Provenance, body: Value) -> String {
    let mut doc = Map::new();
    doc.insert("schema".into(), json!(SCHEMA));
    doc.insert("provenance".into(), prov.json());
    if let Value::Object(m) = body {
        doc.extend(m);
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON values serialize");
    s.push('\n');
    s
}

/// CSV with the provenance line, optional extra comment lines, a header and rows.
pub fn csv_document(prov: &Provenance, comments: &[String], header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = prov.line();
    s.push('\n');
    for c in comments {
        s.push_str("# ");
        s.push_str(c);
        s.push('\n');
    }
    s.push_str(&header.join(","));
    s.push('\n');
    for r in rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}

/// Writes to `path` (via a temporary sibling, so a failure leaves no partial
/// file) or to standard output.
pub fn write_artifact(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
        Some(p) => {
            let mut tmp = p.as_os_str().to_owned();
            tmp.push(".part");
            let io = |source| CliError::Io { path: p.to_path_buf(), source };
            fs::write(&tmp, text).map_err(io)?;
            fs::rename(&tmp, p).map_err(|e| {
                let _ = fs::remove_file(&tmp);
                io(e)
            })
        }
    }
}
