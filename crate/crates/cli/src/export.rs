//! CSV tables and JSON documents. Floats carry 17 significant digits.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Float(v) => format_float(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Float)
    }
}

pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

/// Column names plus rows of cells.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(CliError::Csv)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(CliError::Csv)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_csv_string()?)
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_owned(), source })?;
    }
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(CliError::Json)?;
    text.push('\n');
    write_text(path, &text)
}

/// `out` with `suffix` appended to its file stem: `trace.csv` → `trace.ledger.csv`.
pub fn sibling(out: &Path, suffix: &str, extension: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.{suffix}.{extension}"))
}

/// Numeric columns of a CSV file, keyed by header name.
pub fn read_columns(path: &Path) -> Result<Vec<(String, Vec<Option<f64>>)>> {
    let mut r = csv::Reader::from_path(path).map_err(CliError::Csv)?;
    let header: Vec<String> = r.headers().map_err(CliError::Csv)?.iter().map(str::to_owned).collect();
    let mut columns: Vec<(String, Vec<Option<f64>>)> = header.into_iter().map(|h| (h, Vec::new())).collect();
    for record in r.records() {
        let record = record.map_err(CliError::Csv)?;
        for (col, field) in columns.iter_mut().zip(record.iter()) {
            col.1.push(field.trim().parse().ok());
        }
    }
    Ok(columns)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(0.1).parse::<f64>().unwrap(), 0.1);
        assert_eq!(format_float(f64::NAN), "NaN");
    }

    #[test]
    fn table_renders_header_and_rows() {
        let mut t = Table::new(&["t", "P", "converged"]);
        t.push(vec![Cell::from(0.0), Cell::Empty, Cell::from(true)]);
        assert_eq!(t.to_csv_string().unwrap(), "t,P,converged\n0.0000000000000000e0,,true\n");
    }

    #[test]
    fn sibling_paths() {
        assert_eq!(sibling(Path::new("out/trace.csv"), "ledger", "csv"), PathBuf::from("out/trace.ledger.csv"));
    }
}
