//! JSON report helpers and the `--pretty` table renderer.

use serde_json::{json, Map, Value};
use spincalc_core::Rational;

pub const SCHEMA_VERSION: u32 = 1;

/// `{"num": "...", "den": "..."}`, exact at any size.
pub fn rational(r: &Rational) -> Value {
    json!({ "num": r.numer().to_string(), "den": r.denom().to_string() })
}

pub fn envelope(command: &str, body: Value) -> Value {
    let mut out = Map::new();
    out.insert("schema_version".into(), json!(SCHEMA_VERSION));
    out.insert("command".into(), json!(command));
    if let Value::Object(fields) = body {
        out.extend(fields);
    }
    Value::Object(out)
}

fn as_rational(v: &Value) -> Option<String> {
    let obj = v.as_object()?;
    if obj.len() != 2 {
        return None;
    }
    let (num, den) = (obj.get("num")?.as_str()?, obj.get("den")?.as_str()?);
    Some(if den == "1" { num.to_string() } else { format!("{num}/{den}") })
}

fn cell(v: &Value) -> String {
    if let Some(r) = as_rational(v) {
        return r;
    }
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(items) => {
            let cells: Vec<String> = items.iter().map(cell).collect();
            format!("[{}]", cells.join(", "))
        }
        other => other.to_string(),
    }
}

// Arrays and rationals fit in one cell; other objects are expanded.
fn is_cell(v: &Value) -> bool {
    match v {
        Value::Object(_) => as_rational(v).is_some(),
        Value::Array(items) => items.iter().all(is_cell),
        _ => true,
    }
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    if is_cell(v) {
        rows.push((prefix.to_string(), cell(v)));
        return;
    }
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, child, rows);
            }
        }
        Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), child, rows);
            }
        }
        _ => unreachable!("scalars are cells"),
    }
}

/// Two-column key/value table. Numbers are printed exactly as in the JSON.
pub fn render_table(report: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", report, &mut rows);
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        out.push_str(&format!("{k:<width$}  {v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use spincalc_core::gring::rat;

    #[test]
    fn rationals_are_strings() {
        assert_eq!(rational(&rat(-3, 128)), json!({"num": "-3", "den": "128"}));
    }

    #[test]
    fn table_layout() {
        let v = envelope(
            "x",
            json!({"value": rational(&rat(1, 2)), "roots": [[1, 1], [1, -1]], "ok": true, "f": 0.25}),
        );
        let t = render_table(&v);
        assert!(t.contains("value           1/2\n"));
        assert!(t.contains("roots           [[1, 1], [1, -1]]\n"));
        assert!(t.contains("f               0.25\n"));
        assert!(t.starts_with("schema_version  1\n"));
    }
}
