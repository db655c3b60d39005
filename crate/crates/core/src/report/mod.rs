//! Report assembly and serialization for the command-line driver.
//!
//! Every float written to JSON or CSV goes through [`format_number`], so the
//! two outputs of one run agree string for string.

pub mod commands;
pub mod config;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{Number, Value};

use crate::dynamics::EvolutionReport;

pub use commands::{run_axioms, run_evolve, run_invariants, run_sweep, AxiomsOptions, CommandError, Outcome};
pub use config::{ConfigError, RunConfig};

pub const VERSION: &str = concat!("qdfs ", env!("CARGO_PKG_VERSION"));

pub const CSV_HEADER: &str = "t,fidelity,trace_distance,purity,energy";

/// Process exit status of a command.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Success,
    UsageOrConfig,
    AxiomFailure,
    TheoremRegression,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::UsageOrConfig => 1,
            Status::AxiomFailure => 2,
            Status::TheoremRegression => 3,
        }
    }
}

/// Informational finding; never affects the exit status.
#[derive(Clone, Debug, Serialize)]
pub struct Warning {
    pub code: String,
    pub message: String,
    pub data: Value,
}

/// Top-level JSON document.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub config: Value,
    pub version: String,
    pub results: Value,
    pub warnings: Vec<Warning>,
    pub timings: BTreeMap<String, f64>,
}

impl Report {
    pub fn to_value(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report is serializable");
        normalize_numbers(&mut v);
        v
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("report is serializable");
        s.push('\n');
        s
    }
}

/// 15 significant digits in scientific notation with a signed exponent
/// (`1.00000000000000e+0`), ties to even.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        let s = format!("{x:.14e}");
        match s.find('e') {
            Some(i) if !s[i + 1..].starts_with('-') => format!("{}e+{}", &s[..i], &s[i + 1..]),
            _ => s,
        }
    }
}

fn number_value(x: f64) -> Value {
    let s = format_number(x);
    match s.parse::<Number>() {
        Ok(n) if x.is_finite() => Value::Number(n),
        _ => Value::String(s),
    }
}

/// Rewrites every non-integer JSON number with [`format_number`].
pub fn normalize_numbers(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x: f64 = n.to_string().parse().expect("JSON number parses as f64");
            *v = number_value(x);
        }
        Value::Array(items) => items.iter_mut().for_each(normalize_numbers),
        Value::Object(map) => map.values_mut().for_each(normalize_numbers),
        _ => {}
    }
}

/// CSV rendering of a time series, LF line endings.
pub fn series_csv(r: &EvolutionReport) -> String {
    let mut out = String::with_capacity(64 * (r.times.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for i in 0..r.times.len() {
        let row = [r.times[i], r.fidelity[i], r.trace_distance[i], r.purity[i], r.energy[i]];
        let cells: Vec<String> = row.iter().map(|x| format_number(*x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
