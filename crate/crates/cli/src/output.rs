use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::schema::{CsvSchema, CONFIG_PREFIX};

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

/// Floats as JSON, with non-finite values spelled out instead of `null`.
pub fn json_f64(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("NaN")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

pub fn record<C: Serialize>(command: &str, config: &C, result: Value) -> Value {
    json!({ "command": command, "config": config, "result": result })
}

pub fn write_jsonl(records: &[Value], path: Option<&Path>) -> Result<(), CliError> {
    let mut out = sink(path)?;
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_csv<C: Serialize>(
    schema: &CsvSchema,
    config: &C,
    rows: &[Vec<String>],
    path: Option<&Path>,
) -> Result<(), CliError> {
    let mut out = sink(path)?;
    let head = json!({ "command": schema.command, "config": config });
    writeln!(out, "{CONFIG_PREFIX}{head}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(schema.header())?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}
