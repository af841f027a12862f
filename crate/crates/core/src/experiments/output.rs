//! Tabular results, CSV/JSON emission and the CSV round-trip audit.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Tolerance used when a re-parsed CSV row is checked against its bounds.
pub const ROUND_TRIP_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    /// Floats use Rust's shortest round-trip formatting.
    fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format_float(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(t) => t.clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            Cell::Float(x) if x.is_finite() => json!(x),
            Cell::Float(x) => json!(format_float(*x)),
            Cell::Bool(b) => json!(b),
            Cell::Text(t) => json!(t),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(i) => Some(*i as f64),
            Cell::Float(x) => Some(*x),
            Cell::Bool(_) | Cell::Text(_) => None,
        }
    }
}

pub(crate) fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        // Adding 0.0 turns -0 into 0.
        format!("{}", x + 0.0)
    }
}

/// Rows of one experiment with a fixed column order.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    pub fn float_column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        self.rows.iter().map(|r| r[i].as_f64()).collect()
    }

    /// First `(row, column)` whose boolean flag is false.
    pub fn first_false_flag(&self) -> Option<(usize, &'static str)> {
        for (r, row) in self.rows.iter().enumerate() {
            for (c, cell) in row.iter().enumerate() {
                if *cell == Cell::Bool(false) {
                    return Some((r, self.columns[c]));
                }
            }
        }
        None
    }

    /// Header plus one line per row, LF endings.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn rows_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    Value::Object(
                        self.columns
                            .iter()
                            .zip(row)
                            .map(|(c, v)| (c.to_string(), v.to_json()))
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Writes via a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error.to_string()))?;
    Ok(())
}

/// Re-parses a CSV produced by [`Table::to_csv`] and re-checks every row:
/// the `hidden` value against `lower`/`upper`, and that each flag column
/// agrees with what the parsed numbers imply. Returns the number of rows.
pub fn revalidate_csv(text: &str) -> Result<usize> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(csv_err)?.clone();
    let idx = |name: &str| headers.iter().position(|h| h == name);
    let bound_cols = (idx("hidden").or(idx("gain")), idx("lower"), idx("upper"), idx("boundsOk"));
    let mut n = 0;
    for (r, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        if rec.len() != headers.len() {
            return Err(Error::NumericalFailure(format!("row {r} has {} fields", rec.len())));
        }
        let num = |i: usize| -> Result<f64> {
            rec[i]
                .parse::<f64>()
                .map_err(|_| Error::NumericalFailure(format!("row {r}: {:?} is not a number", &rec[i])))
        };
        if let (Some(h), Some(lo), Some(hi), Some(ok)) = bound_cols {
            let (h, lo, hi) = (num(h)?, num(lo)?, num(hi)?);
            let holds = h >= lo - ROUND_TRIP_TOL && h <= hi + ROUND_TRIP_TOL;
            let flag = &rec[ok] == "true";
            if holds != flag {
                return Err(Error::NumericalFailure(format!(
                    "row {r}: boundsOk={flag} but {lo} <= {h} <= {hi} is {holds}"
                )));
            }
        }
        n += 1;
    }
    Ok(n)
}
