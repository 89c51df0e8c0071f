//! JSON emission with sorted keys and 17 significant digits per float.

use serde::Serialize;
use serde_json::Value;

/// Shortest `%.17g`-style rendering that still carries a decimal point or
/// exponent, so floats parse back as floats. Non-finite values become `null`.
pub fn format_f64(x: f64) -> String {
    if !x.is_finite() {
        return "null".into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0.0".into() } else { "0.0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let fixed = format!("{x:.*}", (16 - exp).max(0) as usize);
        trim_fraction(&fixed)
    } else {
        format!("{}e{exp}", trim_fraction(mantissa))
    }
}

/// Drops trailing zeros after the decimal point, keeping at least one digit.
fn trim_fraction(s: &str) -> String {
    match s.split_once('.') {
        None => format!("{s}.0"),
        Some((int, frac)) => {
            let frac = frac.trim_end_matches('0');
            format!("{int}.{}", if frac.is_empty() { "0" } else { frac })
        }
    }
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => match (n.as_i64(), n.as_u64(), n.as_f64()) {
            (Some(i), _, _) => out.push_str(&i.to_string()),
            (_, Some(u), _) => out.push_str(&u.to_string()),
            (_, _, Some(f)) => out.push_str(&format_f64(f)),
            _ => out.push_str("null"),
        },
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string serializes")),
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(item, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            // serde_json's default map is ordered by key.
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(k).expect("key serializes"));
                out.push_str(": ");
                write_value(item, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
    }
}

/// Pretty JSON text of a value, newline-terminated.
pub fn render_value(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out.push('\n');
    out
}

pub fn render<T: Serialize>(value: &T) -> serde_json::Result<String> {
    Ok(render_value(&serde_json::to_value(value)?))
}

/// Single-line error object for standard error.
pub fn error_object(kind: &str, message: &str, exit_code: i32) -> String {
    let v = serde_json::json!({ "error": { "kind": kind, "message": message, "exit_code": exit_code } });
    let mut s = serde_json::to_string(&v).expect("error object serializes");
    s.push('\n');
    s
}
