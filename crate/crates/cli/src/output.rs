//! Canonical report rendering: JSON with sorted keys, exact fractions as
//! "num/den" strings, enclosures as ["lo","hi"] pairs, and f64 approx
//! fields for human readability. Identical inputs must produce
//! byte-identical bytes, so everything routes through serde_json's
//! BTreeMap-backed objects.

use cflab_core::numeric::{DyadicInterval, Rational};
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

pub fn fraction(r: &Rational) -> Value {
    Value::String(format!("{}/{}", r.numer(), r.denom()))
}

pub fn fraction_approx(r: &Rational) -> Value {
    let x = r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN);
    json!(x)
}

pub fn enclosure(iv: &DyadicInterval) -> Value {
    Value::Array(vec![fraction(iv.lo()), fraction(iv.hi())])
}

pub fn enclosure_approx(iv: &DyadicInterval) -> Value {
    json!(iv.to_f64())
}

pub fn object(entries: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    for (k, v) in entries {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}

/// Canonical rendering: serde_json's default map is sorted, and we add a
/// trailing newline so files concatenate cleanly.
pub fn render(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization");
    s.push('\n');
    s
}
