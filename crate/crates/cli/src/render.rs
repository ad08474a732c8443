use serde_json::Value;

/// Flattens a JSON report into `path: value` lines. Arrays of numbers stay on
/// one line.
pub fn text(value: &Value) -> String {
    let mut out = String::new();
    walk(value, "", &mut out);
    out
}

fn is_leaf_array(v: &[Value]) -> bool {
    v.iter().all(|x| match x {
        Value::Array(inner) => inner.iter().all(|y| !y.is_array() && !y.is_object()),
        Value::Object(_) => false,
        _ => true,
    })
}

fn walk(value: &Value, path: &str, out: &mut String) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                walk(v, &p, out);
            }
        }
        Value::Array(items) if !is_leaf_array(items) => {
            for (i, v) in items.iter().enumerate() {
                walk(v, &format!("{path}[{i}]"), out);
            }
        }
        leaf => {
            out.push_str(path);
            out.push_str(": ");
            out.push_str(&leaf.to_string());
            out.push('\n');
        }
    }
}
