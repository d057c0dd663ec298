//! Shared helpers for the CLI integration tests: a process runner around the
//! compiled binary and a small JSON-Schema checker covering the keyword
//! subset the shipped schemas use (`type`, `enum`, `required`, `properties`,
//! `items`, `anyOf`, and `$ref` into `#/$defs/…`).
//!
//! Each test target compiles this module independently and uses a different
//! slice of it, so unused-item lints are suppressed here.
#![allow(dead_code)]

use std::process::Command;

use serde_json::Value;

pub struct Run {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Command handle for the compiled binary with a scrubbed environment, so a
/// developer's ambient `DECAYLAB_OUT_DIR` cannot leak into test behavior.
pub fn bin_cmd() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_decaylab"));
    cmd.env_remove("DECAYLAB_OUT_DIR");
    cmd
}

pub fn run(args: &[&str]) -> Run {
    let out = bin_cmd()
        .args(args)
        .output()
        .expect("binary failed to spawn");
    Run {
        status: out.status.code().expect("binary was killed by a signal"),
        stdout: String::from_utf8(out.stdout).expect("stdout not UTF-8"),
        stderr: String::from_utf8(out.stderr).expect("stderr not UTF-8"),
    }
}

/// Run with `--format json`, demand exit 0, and parse stdout.
pub fn run_json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = run(&full);
    assert_eq!(
        out.status, 0,
        "expected success for {args:?}; stderr:\n{}",
        out.stderr
    );
    serde_json::from_str(&out.stdout)
        .unwrap_or_else(|e| panic!("invalid JSON from {args:?}: {e}\n{}", out.stdout))
}

/// The published schema with the given basename (without `.schema.json`).
pub fn schema(name: &str) -> Value {
    let text = match name {
        "exponents" => include_str!("../../../../schemas/exponents.schema.json"),
        "table" => include_str!("../../../../schemas/table.schema.json"),
        "hc_estimate" => include_str!("../../../../schemas/hc_estimate.schema.json"),
        "hc_bound_check" => include_str!("../../../../schemas/hc_bound_check.schema.json"),
        "kazhdan" => include_str!("../../../../schemas/kazhdan.schema.json"),
        "orbit_pack" => include_str!("../../../../schemas/orbit_pack.schema.json"),
        "verify" => include_str!("../../../../schemas/verify.schema.json"),
        other => panic!("no schema named {other}"),
    };
    serde_json::from_str(text).expect("schema file is valid JSON")
}

/// Assert `instance` validates against the named published schema.
pub fn assert_valid(name: &str, instance: &Value) {
    let schema = schema(name);
    let defs = schema.get("$defs").cloned().unwrap_or(Value::Null);
    if let Err(e) = check(&schema, instance, &defs, "$") {
        panic!("instance does not match schemas/{name}.schema.json: {e}");
    }
}

fn resolve<'a>(node: &'a Value, defs: &'a Value) -> &'a Value {
    match node.get("$ref").and_then(Value::as_str) {
        Some(r) => {
            let key = r
                .strip_prefix("#/$defs/")
                .unwrap_or_else(|| panic!("unsupported $ref form {r}"));
            defs.get(key)
                .unwrap_or_else(|| panic!("unresolved $ref {r}"))
        }
        None => node,
    }
}

fn type_matches(ty: &str, v: &Value) -> bool {
    match ty {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "number" => v.is_number(),
        "integer" => v.is_i64() || v.is_u64(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        other => panic!("unknown schema type {other}"),
    }
}

fn check(node: &Value, v: &Value, defs: &Value, path: &str) -> Result<(), String> {
    let node = resolve(node, defs);
    if let Some(branches) = node.get("anyOf").and_then(Value::as_array) {
        let mut errs = Vec::new();
        for branch in branches {
            match check(branch, v, defs, path) {
                Ok(()) => return Ok(()),
                Err(e) => errs.push(e),
            }
        }
        return Err(format!("{path}: no anyOf branch matched [{}]", errs.join(" | ")));
    }
    if let Some(options) = node.get("enum").and_then(Value::as_array) {
        if !options.contains(v) {
            return Err(format!("{path}: value {v} not in enum {options:?}"));
        }
    }
    if let Some(ty) = node.get("type") {
        let ok = match ty {
            Value::String(s) => type_matches(s, v),
            Value::Array(list) => list
                .iter()
                .any(|t| type_matches(t.as_str().expect("type entries are strings"), v)),
            other => panic!("malformed type node {other}"),
        };
        if !ok {
            return Err(format!("{path}: expected type {ty}, got {v}"));
        }
    }
    if let Some(obj) = v.as_object() {
        if let Some(req) = node.get("required").and_then(Value::as_array) {
            for key in req {
                let key = key.as_str().expect("required entries are strings");
                if !obj.contains_key(key) {
                    return Err(format!("{path}: missing required key `{key}`"));
                }
            }
        }
        if let Some(props) = node.get("properties").and_then(Value::as_object) {
            for (key, sub) in props {
                if let Some(val) = obj.get(key) {
                    check(sub, val, defs, &format!("{path}.{key}"))?;
                }
            }
        }
    }
    if let (Some(items), Some(arr)) = (node.get("items"), v.as_array()) {
        for (i, item) in arr.iter().enumerate() {
            check(items, item, defs, &format!("{path}[{i}]"))?;
        }
    }
    Ok(())
}

/// Extract an exact rational `(num, den)` pair from a serialized rational.
pub fn rat_of(v: &Value) -> (i64, i64) {
    let num = v["num"].as_str().expect("num is a string");
    let den = v["den"].as_str().expect("den is a string");
    (
        num.parse().expect("num fits i64"),
        den.parse().expect("den fits i64"),
    )
}
