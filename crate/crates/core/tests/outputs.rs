use rainbow_core::experiments::{run_sweep, ExperimentConfig, SweepRow, SweepTable};
use rainbow_core::output::{emit_outputs, parse_csv, to_csv, to_json, to_plot_data, OutputFormat, CSV_HEADER, SWEEP_SCHEMA};
use rainbow_core::SearchBudget;
use serde_json::Value;

/// Checks `value` against the keyword subset the shipped schema uses.
fn validate(schema: &Value, value: &Value, path: &str) -> Vec<String> {
    let mut errs = Vec::new();
    if let Some(t) = schema.get("type") {
        let types: Vec<&str> = match t {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().filter_map(Value::as_str).collect(),
            _ => panic!("bad type keyword at {path}"),
        };
        let ok = types.iter().any(|&ty| match ty {
            "object" => value.is_object(),
            "array" => value.is_array(),
            "integer" => value.is_u64() || value.is_i64(),
            "number" => value.is_number(),
            "null" => value.is_null(),
            "string" => value.is_string(),
            "boolean" => value.is_boolean(),
            other => panic!("unsupported type {other}"),
        });
        if !ok {
            errs.push(format!("{path}: expected {types:?}, got {value}"));
            return errs;
        }
    }
    if let Some(x) = value.as_f64() {
        if let Some(min) = schema.get("minimum").and_then(Value::as_f64) {
            if x < min {
                errs.push(format!("{path}: {x} < {min}"));
            }
        }
        if let Some(max) = schema.get("maximum").and_then(Value::as_f64) {
            if x > max {
                errs.push(format!("{path}: {x} > {max}"));
            }
        }
    }
    if let Some(obj) = value.as_object() {
        for key in schema.get("required").and_then(Value::as_array).into_iter().flatten() {
            let key = key.as_str().unwrap();
            if !obj.contains_key(key) {
                errs.push(format!("{path}: missing {key}"));
            }
        }
        let props = schema.get("properties").and_then(Value::as_object);
        for (key, v) in obj {
            match props.and_then(|p| p.get(key)) {
                Some(sub) => errs.extend(validate(sub, v, &format!("{path}.{key}"))),
                None if schema.get("additionalProperties") == Some(&Value::Bool(false)) => {
                    errs.push(format!("{path}: unexpected {key}"))
                }
                None => {}
            }
        }
    }
    if let Some(items) = value.as_array() {
        if let Some(min) = schema.get("minItems").and_then(Value::as_u64) {
            if (items.len() as u64) < min {
                errs.push(format!("{path}: fewer than {min} items"));
            }
        }
        if let Some(sub) = schema.get("items") {
            for (i, v) in items.iter().enumerate() {
                errs.extend(validate(sub, v, &format!("{path}[{i}]")));
            }
        }
    }
    errs
}

fn config() -> ExperimentConfig {
    ExperimentConfig {
        n: 7,
        m: 2,
        r_values: vec![1, 2, 3, 4],
        trials_per_r: 60,
        master_seed: 77,
        budget: SearchBudget::unlimited(),
        omega: 0.5,
    }
}

#[test]
fn json_output_matches_schema() {
    let schema: Value = serde_json::from_str(SWEEP_SCHEMA).unwrap();
    let c = config();
    let table = run_sweep(&c).unwrap();
    let doc: Value = serde_json::from_str(&to_json(&table, &c)).unwrap();
    let errs = validate(&schema, &doc, "$");
    assert!(errs.is_empty(), "{errs:?}");
    assert_eq!(doc["rows"].as_array().unwrap().len(), 4);
    assert_eq!(doc["max_nodes"], Value::Null);
}

#[test]
fn validator_rejects_bad_documents() {
    let schema: Value = serde_json::from_str(SWEEP_SCHEMA).unwrap();
    let c = config();
    let table = run_sweep(&c).unwrap();
    let good: Value = serde_json::from_str(&to_json(&table, &c)).unwrap();

    let mut missing = good.clone();
    missing.as_object_mut().unwrap().remove("omega");
    assert!(!validate(&schema, &missing, "$").is_empty());

    let mut extra = good.clone();
    extra["rows"][0]["bogus"] = Value::from(1);
    assert!(!validate(&schema, &extra, "$").is_empty());

    let mut out_of_range = good.clone();
    out_of_range["rows"][1]["p_hat"] = Value::from(1.5);
    assert!(!validate(&schema, &out_of_range, "$").is_empty());

    let mut empty = good;
    empty["rows"] = Value::Array(vec![]);
    assert!(!validate(&schema, &empty, "$").is_empty());
}

#[test]
fn csv_round_trips_a_real_sweep() {
    let table = run_sweep(&config()).unwrap();
    let text = to_csv(&table);
    assert_eq!(text.lines().next(), Some(CSV_HEADER));
    assert_eq!(text.lines().count(), 5);
    assert_eq!(parse_csv(&text).unwrap(), table);
}

#[test]
fn csv_round_trips_undefined_estimates() {
    let table = SweepTable {
        rows: vec![SweepRow {
            r: 3,
            found: 0,
            exhausted: 0,
            timeout: 4,
            p_hat: None,
            ci_lo: None,
            ci_hi: None,
            r_star: 1.25,
            r_lower: 1.0,
            r_upper: 2.0,
        }],
    };
    assert_eq!(parse_csv(&to_csv(&table)).unwrap(), table);
    assert!(parse_csv("r,found\n1,2\n").is_err());
}

#[test]
fn emitted_files_agree_with_renderers() {
    let dir = tempfile::tempdir().unwrap();
    let c = config();
    let table = run_sweep(&c).unwrap();
    let stem = dir.path().join("sweep");
    let paths = emit_outputs(&table, &c, OutputFormat::Both, &stem).unwrap();
    assert_eq!(paths.len(), 3);
    let read = |ext: &str| std::fs::read_to_string(stem.with_extension(ext)).unwrap();
    assert_eq!(read("csv"), to_csv(&table));
    assert_eq!(read("json"), to_json(&table, &c));
    assert_eq!(read("dat"), to_plot_data(&table));
    assert!(read("dat").contains("# marker r_star"));
}
