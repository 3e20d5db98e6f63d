//! Result records and their CSV / JSON renderings.
//!
//! Floats are written in shortest round-trip form, so parsing a written
//! value gives back the same bits.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::{Command, OutputFormat, RunConfig};
use crate::error::{HarnessError, Result};

/// Bumped whenever the record shape changes.
pub const SCHEMA_VERSION: u32 = 1;

/// The published JSON schema for [`ResultRecord`].
pub const RECORD_SCHEMA: &str = include_str!("../schema/result_record.schema.json");

pub fn code_version() -> String {
    format!("zeta-arclen {}", zeta_arclen::VERSION)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub seed: u64,
    pub code_version: String,
    pub started_at: String,
    pub finished_at: String,
    /// Wall-clock seconds per stage.
    pub timings: BTreeMap<String, f64>,
    /// `hit` or `miss` when the critical-point cache was consulted.
    pub cache: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Diagnostics {
    pub warnings: Vec<String>,
    pub quadrature: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultRecord {
    pub schema_version: u32,
    pub config: RunConfig,
    pub results: BTreeMap<String, f64>,
    pub tables: BTreeMap<String, Table>,
    pub provenance: Provenance,
    pub diagnostics: Diagnostics,
}

/// Everything in a record that must be reproducible: results, tables and
/// diagnostics. Timestamps, timings and the config echo are left out.
#[derive(Serialize)]
struct Payload<'a> {
    results: &'a BTreeMap<String, f64>,
    tables: &'a BTreeMap<String, Table>,
    diagnostics: &'a Diagnostics,
}

impl ResultRecord {
    pub fn numeric_payload(&self) -> String {
        let payload = Payload { results: &self.results, tables: &self.tables, diagnostics: &self.diagnostics };
        serde_json::to_string(&payload).expect("payload serializes")
    }

    /// Name of the table written in CSV mode, if the command has one.
    pub fn primary_table(&self) -> Option<&'static str> {
        match self.config.command {
            Command::Eval => Some("grid"),
            Command::Arclength => Some("critical_points"),
            Command::Verify => Some("criteria"),
            _ => None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| HarnessError::Validation(format!("record: {e}")))
    }

    /// CSV rendering: the primary table, or `name,value` rows of the results.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        match self.primary_table().and_then(|name| self.tables.get(name)) {
            Some(table) => {
                writer.write_record(&table.columns).expect("in-memory write");
                for row in &table.rows {
                    writer.write_record(row.iter().map(|v| render(*v))).expect("in-memory write");
                }
            }
            None => {
                writer.write_record(["name", "value"]).expect("in-memory write");
                for (name, value) in &self.results {
                    writer.write_record([name.clone(), render(*value)]).expect("in-memory write");
                }
            }
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(),
        }
    }

    /// Writes to `config.out`, or stdout when no path is set.
    pub fn emit(&self) -> Result<()> {
        let text = self.render(self.config.format);
        match &self.config.out {
            Some(path) => write_file(path, &text),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(text.as_bytes())
                    .and_then(|_| if text.ends_with('\n') { Ok(()) } else { stdout.write_all(b"\n") })
                    .map_err(|e| HarnessError::io("writing", "<stdout>", e))
            }
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| HarnessError::io("writing", path, e))
}

/// Shortest decimal that parses back to the same `f64`.
pub fn render(value: f64) -> String {
    format!("{value:?}")
}

/// Reads a numeric CSV table back.
pub fn read_csv_table(text: &str) -> Result<Table> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let bad = |e: csv::Error| HarnessError::Validation(format!("csv: {e}"));
    let columns = reader.headers().map_err(bad)?.iter().map(str::to_owned).collect();
    let mut table = Table { columns, rows: Vec::new() };
    for row in reader.records() {
        let row = row.map_err(bad)?;
        let values = row
            .iter()
            .map(|cell| cell.parse::<f64>().map_err(|e| HarnessError::Validation(format!("csv cell `{cell}`: {e}"))))
            .collect::<Result<Vec<f64>>>()?;
        table.rows.push(values);
    }
    Ok(table)
}

/// Reads a `name,value` CSV back into a results map.
pub fn read_csv_results(text: &str) -> Result<BTreeMap<String, f64>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut results = BTreeMap::new();
    for row in reader.records() {
        let row = row.map_err(|e| HarnessError::Validation(format!("csv: {e}")))?;
        let value = row[1].parse::<f64>().map_err(|e| HarnessError::Validation(format!("csv value: {e}")))?;
        results.insert(row[0].to_owned(), value);
    }
    Ok(results)
}

/// Collects named results, rejecting values that cannot be written as numbers.
#[derive(Debug, Default)]
pub struct Results(BTreeMap<String, f64>);

impl Results {
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(HarnessError::Consistency(format!("result `{name}` is not finite ({value})")));
        }
        self.0.insert(name.to_owned(), value);
        Ok(())
    }

    pub fn flag(&mut self, name: &str, value: bool) {
        self.0.insert(name.to_owned(), if value { 1.0 } else { 0.0 });
    }

    pub fn into_inner(self) -> BTreeMap<String, f64> {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rendering_round_trips() {
        for v in [0.1, 1.0e6, 1.0e6 + 1.0 / 3.0, f64::MIN_POSITIVE, 5e-324, -2.5e300, 0.0] {
            assert_eq!(render(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
    }

    #[test]
    fn non_finite_rejected() {
        let mut r = Results::default();
        assert!(r.set("x", f64::NAN).is_err());
        assert!(r.set("x", 1.5).is_ok());
    }
}
