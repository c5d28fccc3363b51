//! Reports: a JSON value with a fixed schema version, rendered either as JSON or as indented text.

use serde_json::{json, Map, Value};

pub const SCHEMA: u64 = 1;

pub struct Report {
    pub ok: bool,
    pub body: Value,
}

impl Report {
    pub fn new(ok: bool, body: Value) -> Self {
        Report { ok, body }
    }
}

pub fn envelope(command: &str, config: Value, report: &Report) -> Value {
    json!({
        "schema": SCHEMA,
        "command": command,
        "config": config,
        "ok": report.ok,
        "report": report.body,
    })
}

pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports are plain JSON");
    s.push('\n');
    s
}

/// Text rendering of a report value. A top-level `verdict` string is printed first.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    if let Some(verdict) = v.pointer("/report/verdict").and_then(Value::as_str) {
        out.push_str(verdict);
        out.push('\n');
    }
    if let Value::Object(map) = v {
        write_map(&mut out, map, 0);
    }
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn write_map(out: &mut String, map: &Map<String, Value>, indent: usize) {
    let pad = "  ".repeat(indent);
    for (k, v) in map {
        if indent == 1 && k == "verdict" {
            continue;
        }
        write_entry(out, &pad, k, v, indent);
    }
}

fn write_entry(out: &mut String, pad: &str, k: &str, v: &Value, indent: usize) {
    if let Some(s) = scalar(v) {
        out.push_str(&format!("{}{}: {}\n", pad, k, s));
        return;
    }
    match v {
        Value::Array(items) if items.iter().all(|x| scalar(x).is_some() && !x.is_string()) => {
            let parts: Vec<String> = items.iter().filter_map(scalar).collect();
            out.push_str(&format!("{}{}: {}\n", pad, k, parts.join(", ")));
        }
        Value::Array(items) if items.iter().all(Value::is_string) => {
            out.push_str(&format!("{}{}:\n", pad, k));
            for item in items.iter().filter_map(scalar) {
                out.push_str(&format!("{}  - {}\n", pad, item));
            }
        }
        Value::Array(items) => {
            out.push_str(&format!("{}{}:\n", pad, k));
            for (i, item) in items.iter().enumerate() {
                write_entry(out, &"  ".repeat(indent + 1), &format!("[{}]", i), item, indent + 1);
            }
        }
        Value::Object(m) => {
            out.push_str(&format!("{}{}:\n", pad, k));
            write_map(out, m, indent + 1);
        }
        _ => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_rendering_puts_the_verdict_first() {
        let r = Report::new(true, json!({ "verdict": "fine", "dims": [1, 1, 2], "notes": ["a, b", "c"] }));
        let text = render_text(&envelope("x", json!({}), &r));
        assert!(text.starts_with("fine\n"));
        assert!(text.contains("  dims: 1, 1, 2\n"));
        assert!(text.contains("    - a, b\n"));
        assert_eq!(text.matches("fine").count(), 1);
    }

    #[test]
    fn json_carries_the_schema() {
        let v = envelope("x", json!({}), &Report::new(false, json!({})));
        let s = render_json(&v);
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["schema"], 1);
        assert_eq!(back["ok"], false);
    }
}
