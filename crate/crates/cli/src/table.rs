//! Tables and their CSV / JSON encodings.
//!
//! CSV numbers are written with 17 significant digits in scientific notation,
//! independent of locale; missing values are empty fields. JSON documents are
//! a single object `{"inputs", "results", "meta"}`.

use std::io::Write;
use std::path::Path;

use anyhow::Context;
use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Bool(bool),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

impl Cell {
    fn csv_field(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // serde_json writes the shortest string that parses back to the same f64
            Cell::Num(x) if x.is_finite() => json!(x),
            Cell::Num(_) | Cell::Empty => Value::Null,
            Cell::Bool(b) => json!(b),
            Cell::Text(s) => json!(s),
        }
    }
}

/// `{:.16e}`: 17 significant digits, enough to round-trip any `f64`.
pub fn format_number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".to_owned()
    } else if x > 0.0 {
        "inf".to_owned()
    } else {
        "-inf".to_owned()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> anyhow::Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_field))?;
        }
        Ok(w.into_inner().map_err(|e| e.into_error())?)
    }

    pub fn to_json_rows(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> =
                        self.columns.iter().zip(row).map(|(c, v)| ((*c).to_owned(), v.json())).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// A command's result: the main table plus optional summary values, which
/// go into the JSON results object or, for CSV, onto the console.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub table: Table,
    pub summary: Vec<(&'static str, Cell)>,
}

impl From<Table> for Report {
    fn from(table: Table) -> Self {
        Self { table, summary: Vec::new() }
    }
}

impl Report {
    pub fn to_json(&self, config: &RunConfig) -> anyhow::Result<Vec<u8>> {
        let results = if self.summary.is_empty() {
            self.table.to_json_rows()
        } else {
            let mut obj = Map::new();
            obj.insert("rows".to_owned(), self.table.to_json_rows());
            for (k, v) in &self.summary {
                obj.insert((*k).to_owned(), v.json());
            }
            Value::Object(obj)
        };
        let doc = json!({
            "inputs": serde_json::to_value(config)?,
            "results": results,
            "meta": {
                "version": env!("CARGO_PKG_VERSION"),
                "tolerances": {
                    "quadrature_rel_tol": config.tol,
                    "cutoff": config.cutoff,
                },
            },
        });
        let mut out = serde_json::to_vec_pretty(&doc)?;
        out.push(b'\n');
        Ok(out)
    }

    pub fn summary_lines(&self) -> String {
        self.summary.iter().map(|(k, v)| format!("# {k} = {}\n", v.csv_field())).collect()
    }

    /// Writes the report to `config.output`, or to stdout when unset.
    pub fn emit(&self, config: &RunConfig) -> anyhow::Result<()> {
        let bytes = match config.format {
            Format::Csv => self.table.to_csv()?,
            Format::Json => self.to_json(config)?,
        };
        match &config.output {
            Some(path) => {
                write_file(path, &bytes)?;
                if config.format == Format::Csv {
                    print!("{}", self.summary_lines());
                }
            }
            None => {
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                lock.write_all(&bytes)?;
                if config.format == Format::Csv {
                    // keep stdout a clean CSV
                    eprint!("{}", self.summary_lines());
                }
            }
        }
        Ok(())
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["p", "alpha", "flag"]);
        t.push(vec![0.0.into(), Cell::Empty, true.into()]);
        t.push(vec![1.25.into(), Some(-0.1).into(), false.into()]);
        let text = String::from_utf8(t.to_csv().unwrap()).unwrap();
        assert_eq!(
            text,
            "p,alpha,flag\n0.0000000000000000e0,,true\n1.2500000000000000e0,-1.0000000000000001e-1,false\n"
        );
    }

    #[test]
    fn numbers_round_trip() {
        for &x in &[0.1, 1.0 / 3.0, 2.0f64.sqrt() * 1e-300, 123456.789e200, f64::MIN_POSITIVE] {
            assert_eq!(format_number(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = Table::new(&["p", "epsilon", "alpha", "beta", "w"]);
        assert_eq!(t.to_csv().unwrap(), b"p,epsilon,alpha,beta,w\n");
    }

    #[test]
    fn json_document_shape() {
        let mut t = Table::new(&["x"]);
        t.push(vec![f64::NAN.into()]);
        let report = Report { table: t, summary: vec![("M_ef", 1.5.into())] };
        let v: Value = serde_json::from_slice(&report.to_json(&RunConfig::default()).unwrap()).unwrap();
        assert!(v["inputs"]["params"].is_object());
        assert_eq!(v["results"]["rows"][0]["x"], Value::Null);
        assert_eq!(v["results"]["M_ef"], json!(1.5));
        assert!(v["meta"]["version"].is_string());
    }
}
