//! JSON envelopes and CSV writers.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::{json, Value};

use crate::args::Command;

pub fn provenance(cmd: &Command, extra: Option<Value>) -> Value {
    let mut p = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "seed": cmd.seed(),
    });
    if let (Some(Value::Object(extra)), Value::Object(map)) = (extra, &mut p) {
        map.extend(extra);
    }
    p
}

pub fn envelope(cmd: &Command, result: Value, extra: Option<Value>) -> Value {
    json!({
        "config": cmd,
        "result": result,
        "provenance": provenance(cmd, extra),
    })
}

/// Pretty JSON to `path`, or to stdout when `path` is `None`.
pub fn emit_json(value: &Value, path: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match path {
        Some(p) => std::fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = io::stdout().lock();
            writeln!(out, "{text}")?;
            Ok(())
        }
    }
}

/// Shortest round-trip scientific notation.
pub fn sci(v: f64) -> String {
    format!("{v:e}")
}

pub fn write_csv<R: AsRef<[String]>>(path: Option<&Path>, header: &[&str], rows: &[R]) -> Result<()> {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r.as_ref())?;
    }
    w.flush()?;
    Ok(())
}
