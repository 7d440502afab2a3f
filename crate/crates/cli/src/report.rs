//! Report envelope and the CSV/JSON renderers.
//!
//! Both formats carry the same payload: JSON nests it, CSV either prints a
//! table (for row lists) or flattened `key,value` pairs. Run metadata goes into
//! `#` comment lines in CSV.

use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::{Format, RunConfig};

pub const VERSION: &str = env!("VMOMENTS_VERSION");

#[derive(Debug, Serialize)]
pub struct Report<'a> {
    pub version: &'static str,
    pub command: String,
    pub config: &'a RunConfig,
    pub table_limit: Option<u64>,
    pub tau_limit: Option<u64>,
    /// Truncation used by the command, if any.
    pub y: Option<u64>,
    pub wall_time_s: f64,
    pub result: Value,
}

pub fn render(r: &Report<'_>, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(r).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => csv(r),
    }
}

fn scalar(v: &Value) -> String {
    let s = match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(a) => a.iter().map(scalar).collect::<Vec<_>>().join(";"),
        Value::Object(_) => v.to_string(),
        other => other.to_string(),
    };
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

/// Rows of flat objects, if the payload has a `rows` list or is a bare list.
fn rows(v: &Value) -> Option<&Vec<Value>> {
    let list = match v {
        Value::Array(a) => a,
        Value::Object(m) => m.get("rows")?.as_array()?,
        _ => return None,
    };
    list.iter().all(Value::is_object).then_some(list)
}

fn csv(r: &Report<'_>) -> String {
    let mut out = String::new();
    let config = serde_json::to_value(r.config).expect("config serializes");
    let mut cfg = Vec::new();
    flatten("", &config, &mut cfg);
    out.push_str(&format!("# version: {}\n# command: {}\n", r.version, r.command));
    out.push_str(&format!(
        "# config: {}\n",
        cfg.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
    ));
    let opt = |x: Option<u64>| x.map_or_else(String::new, |v| v.to_string());
    out.push_str(&format!(
        "# table_limit: {}\n# tau_limit: {}\n# y: {}\n# wall_time_s: {}\n",
        opt(r.table_limit),
        opt(r.tau_limit),
        opt(r.y),
        r.wall_time_s
    ));
    if let Some(list) = rows(&r.result) {
        // Scalars next to the row list become comments.
        if let Value::Object(m) = &r.result {
            let mut extra = Vec::new();
            for (k, v) in m.iter().filter(|(k, _)| *k != "rows") {
                flatten(k, v, &mut extra);
            }
            for (k, v) in extra {
                out.push_str(&format!("# {k}: {v}\n"));
            }
        }
        let header: Vec<String> = list
            .first()
            .and_then(Value::as_object)
            .map(|m| m.keys().cloned().collect())
            .unwrap_or_default();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in list {
            let m: &Map<String, Value> = row.as_object().expect("checked above");
            let cells: Vec<String> = header.iter().map(|k| m.get(k).map(scalar).unwrap_or_default()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
    } else {
        out.push_str("key,value\n");
        let mut pairs = Vec::new();
        flatten("", &r.result, &mut pairs);
        for (k, v) in pairs {
            out.push_str(&format!("{k},{v}\n"));
        }
    }
    out
}
