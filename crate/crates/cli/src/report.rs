//! Run reports and their JSON / CSV renderings.

use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};

/// One result row. Every subcommand uses the same columns.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Record {
    /// `method`, `delta`, `bound`, `check`, `constant`, `q_table`, `violation`, ...
    pub kind: String,
    pub name: String,
    pub value: Option<f64>,
    pub error_bound: Option<f64>,
    /// The quantity `value` is compared against, when there is one.
    pub reference: Option<f64>,
    pub pass: Option<bool>,
    pub detail: String,
}

impl Record {
    pub fn new(kind: &str, name: impl Into<String>, value: f64) -> Self {
        Self { kind: kind.into(), name: name.into(), value: Some(value), ..Self::default() }
    }

    pub fn error_bound(mut self, e: f64) -> Self {
        self.error_bound = Some(e);
        self
    }

    pub fn reference(mut self, r: f64) -> Self {
        self.reference = Some(r);
        self
    }

    pub fn pass(mut self, ok: bool) -> Self {
        self.pass = Some(ok);
        self
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = d.into();
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub tool_version: &'static str,
    pub parameters: Map<String, Value>,
    pub seeds: Vec<u64>,
    pub results: Vec<Record>,
    pub warnings: Vec<String>,
    pub wall_time_s: f64,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            tool_version: env!("CARGO_PKG_VERSION"),
            parameters: Map::new(),
            seeds: Vec::new(),
            results: Vec::new(),
            warnings: Vec::new(),
            wall_time_s: 0.0,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        self.parameters.insert(key.into(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    pub fn push(&mut self, r: Record) {
        self.results.push(r);
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        let msg = msg.into();
        eprintln!("warning: {msg}");
        self.warnings.push(msg);
    }

    /// Whether every record carrying a pass flag passed.
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass != Some(false))
    }

    pub fn write_json(&self, out: &mut impl Write) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut *out, self)?;
        writeln!(out)
    }

    /// Header row, then one row per record; floats carry 17 significant digits.
    pub fn write_csv(&self, out: &mut impl Write) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["command", "kind", "name", "value", "error_bound", "reference", "pass", "detail"])?;
        let num = |x: Option<f64>| x.map(|v| format!("{v:.16e}")).unwrap_or_default();
        for r in &self.results {
            w.write_record([
                self.command.as_str(),
                &r.kind,
                &r.name,
                &num(r.value),
                &num(r.error_bound),
                &num(r.reference),
                &r.pass.map(|p| p.to_string()).unwrap_or_default(),
                &r.detail,
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}
