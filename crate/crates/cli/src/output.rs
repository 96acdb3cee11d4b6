//! Tabular output in CSV or JSON with deterministic formatting: floats are
//! written in Rust's shortest round-trip decimal form, rows end in `\n`,
//! and the column order is fixed by the command that builds the table.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde_json::{Map, Number, Value};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub enum Cell {
    Float(f64),
    Str(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Str(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Str(s)
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: Vec<S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row
                .iter()
                .map(|cell| match cell {
                    Cell::Float(x) => format!("{x}"),
                    Cell::Int(n) => format!("{n}"),
                    Cell::Str(s) => s.clone(),
                })
                .collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let mut rows = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let mut obj = Map::new();
            for (name, cell) in self.columns.iter().zip(row) {
                let value = match cell {
                    Cell::Float(x) => Number::from_f64(*x)
                        .map(Value::Number)
                        .ok_or_else(|| {
                            CliError::Overflow(format!("non-finite value in column {name}"))
                        })?,
                    Cell::Int(n) => Value::Number((*n).into()),
                    Cell::Str(s) => Value::String(s.clone()),
                };
                obj.insert(name.clone(), value);
            }
            rows.push(Value::Object(obj));
        }
        serde_json::to_string_pretty(&Value::Array(rows))
            .map_err(|e| CliError::Config(format!("json serialization: {e}")))
    }

    pub fn render(&self, format: OutputFormat) -> Result<String, CliError> {
        match format {
            OutputFormat::Csv => Ok(self.to_csv()),
            OutputFormat::Json => {
                let mut text = self.to_json()?;
                text.push('\n');
                Ok(text)
            }
        }
    }

    /// Write to the path, or to stdout when no path is given.
    pub fn emit(&self, format: OutputFormat, out: Option<&Path>) -> Result<(), CliError> {
        let text = self.render(format)?;
        match out {
            Some(path) => fs::write(path, text)
                .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display()))),
            None => {
                io::stdout()
                    .write_all(text.as_bytes())
                    .map_err(|e| CliError::Config(format!("stdout: {e}")))
            }
        }
    }
}
