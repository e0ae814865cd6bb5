//! Just enough of JSON Schema to pin the summary format: types,
//! properties, required lists, closed objects, array items, and enums.
//! The published schema uses nothing else, and the test suite validates
//! every emitted summary against it.

use serde_json::Value;

/// The schema the summaries are published under.
pub fn run_summary_schema() -> Value {
    serde_json::from_str(include_str!("../../../schema/run-summary.schema.json"))
        .expect("bundled schema parses")
}

/// Validates `value` against `schema`, returning one message per
/// violation; empty means conforming.
pub fn validate(value: &Value, schema: &Value) -> Vec<String> {
    let mut errors = Vec::new();
    check(value, schema, "$", &mut errors);
    errors
}

fn type_name(value: &Value) -> &'static str {
    match value {
        Value::Null => "null",
        Value::Bool(_) => "boolean",
        Value::Number(_) => "number",
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}

fn matches_type(value: &Value, ty: &str) -> bool {
    match ty {
        "integer" => value.as_i64().is_some() || value.as_u64().is_some(),
        "number" => value.is_number(),
        other => type_name(value) == other,
    }
}

fn check(value: &Value, schema: &Value, path: &str, errors: &mut Vec<String>) {
    let schema = match schema.as_object() {
        Some(s) => s,
        None => {
            errors.push(format!("{path}: schema node is not an object"));
            return;
        }
    };

    if let Some(ty) = schema.get("type") {
        let allowed: Vec<&str> = match ty {
            Value::String(s) => vec![s.as_str()],
            Value::Array(list) => list.iter().filter_map(Value::as_str).collect(),
            _ => vec![],
        };
        if !allowed.iter().any(|t| matches_type(value, t)) {
            errors.push(format!(
                "{path}: expected type {allowed:?}, got {}",
                type_name(value)
            ));
            return;
        }
    }

    if let Some(options) = schema.get("enum").and_then(Value::as_array) {
        if !options.contains(value) {
            errors.push(format!("{path}: value {value} not in enum {options:?}"));
        }
    }

    if let (Some(obj), true) = (value.as_object(), schema.contains_key("properties")) {
        let props = schema["properties"].as_object().expect("properties object");
        if let Some(required) = schema.get("required").and_then(Value::as_array) {
            for name in required.iter().filter_map(Value::as_str) {
                if !obj.contains_key(name) {
                    errors.push(format!("{path}: missing required property \"{name}\""));
                }
            }
        }
        let closed = schema.get("additionalProperties") == Some(&Value::Bool(false));
        for (key, child) in obj {
            match props.get(key) {
                Some(sub) => check(child, sub, &format!("{path}.{key}"), errors),
                None if closed => {
                    errors.push(format!("{path}: unexpected property \"{key}\""));
                }
                None => {}
            }
        }
    }

    if let (Some(list), Some(items)) = (value.as_array(), schema.get("items")) {
        for (i, child) in list.iter().enumerate() {
            check(child, items, &format!("{path}[{i}]"), errors);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn bundled_schema_is_well_formed() {
        let schema = run_summary_schema();
        assert_eq!(schema["type"], "object");
        assert!(schema["properties"].get("command").is_some());
    }

    #[test]
    fn validator_flags_each_violation_kind() {
        let schema = json!({
            "type": "object",
            "required": ["name"],
            "additionalProperties": false,
            "properties": {
                "name": {"type": "string", "enum": ["a", "b"]},
                "count": {"type": "integer"},
                "tags": {"type": "array", "items": {"type": "string"}}
            }
        });
        assert!(validate(&json!({"name": "a", "count": 2, "tags": ["x"]}), &schema).is_empty());
        assert_eq!(validate(&json!({"count": 2}), &schema).len(), 1);
        assert_eq!(validate(&json!({"name": "z"}), &schema).len(), 1);
        assert_eq!(validate(&json!({"name": "a", "blob": 1}), &schema).len(), 1);
        assert_eq!(validate(&json!({"name": "a", "count": 2.5}), &schema).len(), 1);
        assert_eq!(validate(&json!({"name": "a", "tags": [1]}), &schema).len(), 1);
    }
}
