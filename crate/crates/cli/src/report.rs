use std::io::Write;

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{OutputFormat, RunConfig};
use crate::CliError;

pub const SCHEMA: &str = "unicircle/1";

/// A command's result: a JSON body plus the same data as a flat table.
pub struct Report {
    pub command: String,
    pub body: Value,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// Named check failures; any entry makes the run exit with status 1.
    pub failures: Vec<String>,
}

impl Report {
    pub fn new(command: &str, body: Value, columns: Vec<&'static str>) -> Self {
        Report {
            command: command.to_string(),
            body,
            columns,
            rows: Vec::new(),
            failures: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    /// A closed pipe on the reading side is not an error.
    pub fn write(&self, cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
        match self.write_inner(cfg, out) {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            r => r.map_err(|e| CliError::Failure(format!("cannot write output: {e}"))),
        }
    }

    fn write_inner(&self, cfg: &RunConfig, out: &mut dyn Write) -> std::io::Result<()> {
        match cfg.output_format {
            OutputFormat::Json => {
                let envelope = json!({
                    "schema": SCHEMA,
                    "command": self.command,
                    "config": header(cfg),
                    "passed": self.failures.is_empty(),
                    "failures": self.failures,
                    "result": self.body,
                });
                serde_json::to_writer_pretty(&mut *out, &envelope)?;
                writeln!(out)?;
            }
            OutputFormat::Csv => {
                writeln!(
                    out,
                    "# schema={SCHEMA} command={} precision_bits={} tol={:e} samples={} parallelism={}",
                    self.command,
                    cfg.precision_bits,
                    cfg.tol(),
                    cfg.samples,
                    cfg.parallelism
                )?;
                let mut w = csv::Writer::from_writer(&mut *out);
                w.write_record(&self.columns).map_err(csv_io)?;
                for r in &self.rows {
                    w.write_record(r).map_err(csv_io)?;
                }
                w.flush()?;
            }
        }
        Ok(())
    }
}

fn csv_io(e: csv::Error) -> std::io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => std::io::Error::other(format!("{other:?}")),
    }
}

#[derive(Serialize)]
struct Header<'a> {
    #[serde(flatten)]
    cfg: &'a RunConfig,
    tol: f64,
}

fn header(cfg: &RunConfig) -> Value {
    serde_json::to_value(Header { cfg, tol: cfg.tol() }).expect("config serializes")
}

/// Shortest round-trip decimal, in exponent form outside `[1e-4, 1e16)`.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !a.is_finite() || (1e-4..1e16).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::PartialConfig;

    fn sample() -> Report {
        let mut r = Report::new("demo", json!({"x": 1}), vec!["a", "b"]);
        r.row(vec!["1".into(), "two, three".into()]);
        r
    }

    #[test]
    fn json_envelope_carries_schema_and_config() {
        let cfg = PartialConfig::default().resolve().unwrap();
        let mut buf = Vec::new();
        sample().write(&cfg, &mut buf).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["config"]["precision_bits"], 256);
        assert_eq!(v["config"]["tol"], 1e-20);
        assert_eq!(v["result"]["x"], 1);
        assert_eq!(v["passed"], true);
    }

    #[test]
    fn csv_has_comment_header_and_quoting() {
        let cfg = PartialConfig {
            output_format: Some(OutputFormat::Csv),
            ..Default::default()
        }
        .resolve()
        .unwrap();
        let mut buf = Vec::new();
        sample().write(&cfg, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# schema=unicircle/1 command=demo precision_bits=256"));
        assert_eq!(lines[1], "a,b");
        assert_eq!(lines[2], "1,\"two, three\"");
    }

    #[test]
    fn number_formatting_round_trips() {
        for x in [0.0, 1.5, -0.019, 6.05e-77, 1e20, 0.00012] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(6.05e-77), "6.05e-77");
        assert_eq!(num(0.25), "0.25");
    }
}
