//! Test support: process invocation and a JSON-Schema checker covering the
//! keyword subset used by the shipped schemas.
//!
//! Shared by several test binaries, not all of which use every helper.
#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

pub fn bellsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellsim"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn read_json(path: &Path) -> Value {
    let text = std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{path:?}: {e}"));
    serde_json::from_str(&text).unwrap_or_else(|e| panic!("{path:?}: {e}"))
}

pub fn schema(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(name);
    read_json(&path)
}

/// Validate `instance` against `schema`, supporting: type, properties,
/// required, additionalProperties (bool), items, enum, anyOf,
/// minimum/maximum.
pub fn validate(schema: &Value, instance: &Value) -> Result<(), String> {
    validate_at(schema, instance, "$")
}

fn type_matches(ty: &str, instance: &Value) -> bool {
    match ty {
        "object" => instance.is_object(),
        "array" => instance.is_array(),
        "string" => instance.is_string(),
        "boolean" => instance.is_boolean(),
        "null" => instance.is_null(),
        "number" => instance.is_number(),
        "integer" => {
            instance.is_i64()
                || instance.is_u64()
                || instance.as_f64().is_some_and(|f| f.fract() == 0.0)
        }
        _ => false,
    }
}

fn validate_at(schema: &Value, instance: &Value, path: &str) -> Result<(), String> {
    let obj = match schema.as_object() {
        Some(o) => o,
        None => return Ok(()),
    };

    if let Some(any_of) = obj.get("anyOf").and_then(|v| v.as_array()) {
        let ok = any_of.iter().any(|s| validate_at(s, instance, path).is_ok());
        if !ok {
            return Err(format!("{path}: no anyOf branch matched"));
        }
        return Ok(());
    }

    if let Some(ty) = obj.get("type").and_then(|v| v.as_str()) {
        if !type_matches(ty, instance) {
            return Err(format!("{path}: expected type {ty}, got {instance}"));
        }
    }

    if let Some(allowed) = obj.get("enum").and_then(|v| v.as_array()) {
        if !allowed.contains(instance) {
            return Err(format!("{path}: {instance} not in enum {allowed:?}"));
        }
    }

    if let Some(min) = obj.get("minimum").and_then(|v| v.as_f64()) {
        if let Some(x) = instance.as_f64() {
            if x < min {
                return Err(format!("{path}: {x} below minimum {min}"));
            }
        }
    }
    if let Some(max) = obj.get("maximum").and_then(|v| v.as_f64()) {
        if let Some(x) = instance.as_f64() {
            if x > max {
                return Err(format!("{path}: {x} above maximum {max}"));
            }
        }
    }

    if let Some(map) = instance.as_object() {
        if let Some(required) = obj.get("required").and_then(|v| v.as_array()) {
            for key in required {
                let key = key.as_str().expect("required keys are strings");
                if !map.contains_key(key) {
                    return Err(format!("{path}: missing required key '{key}'"));
                }
            }
        }
        let props = obj.get("properties").and_then(|v| v.as_object());
        let additional = obj
            .get("additionalProperties")
            .and_then(|v| v.as_bool())
            .unwrap_or(true);
        for (key, value) in map {
            match props.and_then(|p| p.get(key)) {
                Some(sub) => validate_at(sub, value, &format!("{path}.{key}"))?,
                None if !additional => {
                    return Err(format!("{path}: unexpected key '{key}'"))
                }
                None => {}
            }
        }
    }

    if let Some(items) = obj.get("items") {
        if let Some(arr) = instance.as_array() {
            for (i, value) in arr.iter().enumerate() {
                validate_at(items, value, &format!("{path}[{i}]"))?;
            }
        }
    }

    Ok(())
}
