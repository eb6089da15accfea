//! Deterministic serialization: JSON with sorted keys and every float at
//! 17 significant digits (round-trip exact for f64), CSV with the same
//! float format. Identical inputs produce identical bytes.

use hartogs_core::C64;
use serde_json::Value;

/// 17-significant-digit float rendering.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Complex scalar as `re+imi` / `re-imi`.
pub fn fmt_complex(v: C64) -> String {
    if v.im.is_sign_negative() {
        format!("{}-{}i", fmt_f64(v.re), fmt_f64(-v.im))
    } else {
        format!("{}+{}i", fmt_f64(v.re), fmt_f64(v.im))
    }
}

/// Complex value as a JSON `[re, im]` pair.
pub fn complex_value(v: C64) -> Value {
    Value::Array(vec![Value::from(v.re), Value::from(v.im)])
}

pub fn complex_list(vs: &[C64]) -> Value {
    Value::Array(vs.iter().map(|v| complex_value(*v)).collect())
}

/// Render a JSON value deterministically. `serde_json`'s map is a BTreeMap,
/// so object keys come out sorted.
pub fn render_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, &mut out);
    out.push('\n');
    out
}

fn write_value(v: &Value, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                out.push_str(&fmt_f64(n.as_f64().unwrap_or(f64::NAN)));
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("string escape"));
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (i, (k, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(k).expect("key escape"));
                out.push(':');
                write_value(item, out);
            }
            out.push('}');
        }
    }
}

/// Quote a CSV field if it contains separators or quotes.
pub fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
