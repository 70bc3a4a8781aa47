use std::io::Write;

use serde_json::{json, Map, Value};

use crate::error::Result;

/// Version of the machine-readable output layout.
pub const OUTPUT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

/// One command's output. Every value is already a string, so the JSON and
/// CSV renderings carry byte-identical numbers.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub params: Vec<(&'static str, String)>,
    pub summary: Vec<(&'static str, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// `false` maps to exit status 1.
    pub passed: bool,
}

impl Report {
    pub fn new(command: &'static str, columns: Vec<&'static str>) -> Self {
        Report {
            command,
            params: Vec::new(),
            summary: Vec::new(),
            columns,
            rows: Vec::new(),
            passed: true,
        }
    }

    pub fn param(&mut self, key: &'static str, value: impl Into<String>) {
        self.params.push((key, value.into()));
    }

    pub fn note(&mut self, key: &'static str, value: impl Into<String>) {
        self.summary.push((key, value.into()));
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_json(&self) -> Value {
        let pairs = |items: &[(&str, String)]| {
            let mut map = Map::new();
            for (k, v) in items {
                map.insert((*k).to_string(), Value::String(v.clone()));
            }
            Value::Object(map)
        };
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut map = Map::new();
                for (c, v) in self.columns.iter().zip(row) {
                    map.insert((*c).to_string(), Value::String(v.clone()));
                }
                Value::Object(map)
            })
            .collect();
        json!({
            "output_version": OUTPUT_VERSION,
            "command": self.command,
            "status": if self.passed { "pass" } else { "fail" },
            "params": pairs(&self.params),
            "summary": pairs(&self.summary),
            "columns": self.columns,
            "rows": rows,
        })
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.to_json())?;
                writeln!(out)?;
            }
            Format::Csv => {
                let mut writer = csv::Writer::from_writer(&mut *out);
                writer.write_record(&self.columns).map_err(csv_error)?;
                for row in &self.rows {
                    writer.write_record(row).map_err(csv_error)?;
                }
                writer.flush()?;
            }
            Format::Plain => self.write_plain(out)?,
        }
        Ok(())
    }

    fn write_plain(&self, out: &mut dyn Write) -> Result<()> {
        for (k, v) in self.params.iter().chain(&self.summary) {
            writeln!(out, "{k}: {v}")?;
        }
        if self.rows.is_empty() {
            return Ok(());
        }
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(i, c)| {
                self.rows
                    .iter()
                    .map(|r| r[i].chars().count())
                    .chain(std::iter::once(c.chars().count()))
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        writeln!(out)?;
        let line = |cells: Vec<&str>| {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        writeln!(out, "{}", line(self.columns.clone()))?;
        for row in &self.rows {
            writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
        }
        Ok(())
    }
}

fn csv_error(e: csv::Error) -> crate::error::Error {
    crate::error::Error::Io(std::io::Error::other(e))
}
