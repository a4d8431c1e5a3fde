//! Record layouts shared by the writers and by `schema-check`.

use std::path::Path;

use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    Int,
    /// Decimal digits of arbitrary length.
    BigInt,
    /// `a/b` or an integer.
    Rational,
    /// Any float, including `inf`, `-inf` and `NaN`.
    Float,
    /// A float or empty.
    OptFloat,
    Bool,
    Text,
}

pub struct CsvSchema {
    pub command: &'static str,
    pub columns: &'static [(&'static str, Column)],
}

impl CsvSchema {
    pub fn header(&self) -> Vec<&'static str> {
        self.columns.iter().map(|(name, _)| *name).collect()
    }
}

use Column::*;

pub const COUPON: CsvSchema = CsvSchema {
    command: "coupon",
    columns: &[
        ("q", Int),
        ("k", Int),
        ("delta", Int),
        ("eps", Float),
        ("trials", Int),
        ("seed", Int),
        ("exact_mean", Float),
        ("exact_mean_rational", Rational),
        ("jensen_lower", Float),
        ("rho_sum", Rational),
        ("ell", Float),
        ("d", Float),
        ("small_list_tail", Float),
        ("small_list_se", Float),
        ("high_degree_tail", Float),
        ("high_degree_se", Float),
        ("analytic_small_list", Float),
        ("analytic_high_degree", Float),
    ],
};

pub const RANDOM_REGULAR: CsvSchema = CsvSchema {
    command: "random-regular",
    columns: &[
        ("n", Int),
        ("delta", Int),
        ("q", Int),
        ("trials", Int),
        ("mean_x", Float),
        ("stderr", Float),
        ("ceiling", Float),
        ("ratio", Float),
        ("simple_fraction", Float),
        ("simple_triangle_free_fraction", Float),
    ],
};

pub const BOUNDS: CsvSchema = CsvSchema {
    command: "bounds",
    columns: &[
        ("formula_id", Text),
        ("delta", Int),
        ("q", Int),
        ("n", Int),
        ("m", Int),
        ("eps", Float),
        ("log_value", Float),
        ("value_if_small", OptFloat),
        ("vacuous", Bool),
    ],
};

pub const SWEEP: CsvSchema = CsvSchema {
    command: "sweep",
    columns: &[
        ("graph", Text),
        ("n", Int),
        ("m", Int),
        ("max_degree", Int),
        ("q", Int),
        ("colorings", BigInt),
        ("method", Text),
        ("delta_formula", Float),
        ("delta_implied", Float),
    ],
};

const CSV_SCHEMAS: [&CsvSchema; 4] = [&COUPON, &RANDOM_REGULAR, &BOUNDS, &SWEEP];

pub const CONFIG_PREFIX: &str = "# config: ";

fn cell_ok(kind: Column, cell: &str) -> bool {
    match kind {
        Int => cell.parse::<i64>().is_ok(),
        BigInt => !cell.is_empty() && cell.bytes().all(|b| b.is_ascii_digit()),
        Rational => {
            let (a, b) = cell.split_once('/').unwrap_or((cell, "1"));
            cell_ok(BigInt, a.strip_prefix('-').unwrap_or(a)) && cell_ok(BigInt, b)
        }
        Float => cell.parse::<f64>().is_ok(),
        OptFloat => cell.is_empty() || cell.parse::<f64>().is_ok(),
        Bool => matches!(cell, "true" | "false"),
        Text => !cell.is_empty(),
    }
}

pub fn check_csv(text: &str) -> Result<usize, String> {
    let (first, body) = text.split_once('\n').unwrap_or((text, ""));
    let config = first
        .strip_prefix(CONFIG_PREFIX)
        .ok_or_else(|| "missing `# config:` line".to_string())?;
    let config: Value = serde_json::from_str(config).map_err(|e| format!("config line: {e}"))?;
    let command = config
        .get("command")
        .and_then(Value::as_str)
        .ok_or("config line lacks a command")?;
    config
        .get("config")
        .and_then(Value::as_object)
        .ok_or("config line lacks a config object")?;
    let schema = CSV_SCHEMAS
        .iter()
        .find(|s| s.command == command)
        .ok_or_else(|| format!("no CSV schema for command {command:?}"))?;
    let mut reader = csv::ReaderBuilder::new().from_reader(body.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| e.to_string())?
        .iter()
        .map(str::to_string)
        .collect();
    if header != schema.header() {
        return Err(format!("header {header:?} does not match {:?}", schema.header()));
    }
    let mut rows = 0;
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| format!("row {}: {e}", i + 1))?;
        for ((name, kind), cell) in schema.columns.iter().zip(record.iter()) {
            if !cell_ok(*kind, cell) {
                return Err(format!("row {}: column {name} has invalid value {cell:?}", i + 1));
            }
        }
        rows += 1;
    }
    Ok(rows)
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value, String> {
    obj.get(key).ok_or_else(|| format!("missing field {key:?}"))
}

fn require(obj: &Map<String, Value>, key: &str, ok: fn(&Value) -> bool, what: &str) -> Result<(), String> {
    if ok(field(obj, key)?) {
        Ok(())
    } else {
        Err(format!("field {key:?} is not {what}"))
    }
}

fn is_digits(v: &Value) -> bool {
    v.as_str().is_some_and(|s| cell_ok(BigInt, s))
}

fn is_log(v: &Value) -> bool {
    v.is_number() || matches!(v.as_str(), Some("-inf" | "inf"))
}

fn check_result(command: &str, r: &Map<String, Value>) -> Result<(), String> {
    match command {
        "count" => {
            require(r, "object", Value::is_string, "a string")?;
            require(r, "value", is_digits, "a decimal string")?;
            require(r, "method", Value::is_string, "a string")?;
            require(r, "work", Value::is_u64, "an integer")
        }
        "verify-corpus" => match field(r, "kind")?.as_str() {
            Some("case") => {
                require(r, "graph", Value::is_string, "a string")?;
                for key in ["n", "m", "q"] {
                    require(r, key, Value::is_u64, "an integer")?;
                }
                require(r, "pass", Value::is_boolean, "a boolean")?;
                let checks = field(r, "checks")?.as_array().ok_or("checks is not an array")?;
                for c in checks {
                    let c = c.as_object().ok_or("check is not an object")?;
                    require(c, "name", Value::is_string, "a string")?;
                    require(c, "holds", Value::is_boolean, "a boolean")?;
                    require(c, "vacuous", Value::is_boolean, "a boolean")?;
                }
                Ok(())
            }
            Some("rejected") => {
                require(r, "graph", Value::is_string, "a string")?;
                require(r, "reason", Value::is_string, "a string")
            }
            Some("summary") => {
                for key in ["graphs", "cases", "failures", "rejected"] {
                    require(r, key, Value::is_u64, "an integer")?;
                }
                require(r, "pass", Value::is_boolean, "a boolean")
            }
            _ => Err("kind must be case, rejected or summary".into()),
        },
        "bounds" => {
            require(r, "params", Value::is_object, "an object")?;
            let rows = field(r, "bounds")?.as_array().ok_or("bounds is not an array")?;
            for row in rows {
                let row = row.as_object().ok_or("bound row is not an object")?;
                require(row, "formula_id", Value::is_string, "a string")?;
                require(row, "log_value", is_log, "a log value")?;
                require(row, "vacuous", Value::is_boolean, "a boolean")?;
            }
            Ok(())
        }
        other => Err(format!("no JSON schema for command {other:?}")),
    }
}

pub fn check_json_record(line: &str) -> Result<(), String> {
    let v: Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
    let obj = v.as_object().ok_or("record is not an object")?;
    let command = field(obj, "command")?.as_str().ok_or("command is not a string")?;
    require(obj, "config", Value::is_object, "an object")?;
    let result = field(obj, "result")?.as_object().ok_or("result is not an object")?;
    check_result(command, result)
}

/// Validates a JSON-lines or CSV output file, returning the record count and
/// the detected format.
pub fn check_file(path: &Path) -> Result<(usize, &'static str), String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    if text.starts_with(CONFIG_PREFIX) {
        return check_csv(&text).map(|n| (n, "csv"));
    }
    let mut n = 0;
    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        check_json_record(line).map_err(|e| format!("line {}: {e}", i + 1))?;
        n += 1;
    }
    if n == 0 {
        return Err("no records".into());
    }
    Ok((n, "jsonl"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_checks() {
        let good = "# config: {\"command\":\"bounds\",\"config\":{}}\n\
                    formula_id,delta,q,n,m,eps,log_value,value_if_small,vacuous\n\
                    main-lower,3,12,10,15,0.5,17.9,,false\n";
        assert_eq!(check_csv(good), Ok(1));
        let bad = good.replace("false", "maybe");
        assert!(check_csv(&bad).unwrap_err().contains("vacuous"));
        assert!(check_csv("formula_id\n").is_err());
        assert!(cell_ok(Rational, "12/7") && cell_ok(Rational, "3") && !cell_ok(Rational, "x/2"));
    }

    #[test]
    fn json_checks() {
        let ok = r#"{"command":"count","config":{},"result":{"object":"colorings","value":"30","method":"enumeration","work":9}}"#;
        assert!(check_json_record(ok).is_ok());
        let bad = ok.replace("\"30\"", "30");
        assert!(check_json_record(&bad).is_err());
        assert!(check_json_record(r#"{"command":"count"}"#).is_err());
    }
}
