//! Column tables written as commented CSV.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

impl Column {
    pub fn new(name: impl Into<String>, unit: impl Into<String>) -> Self {
        Column {
            name: name.into(),
            unit: unit.into(),
        }
    }
}

/// A sweep result: metadata, named columns with units, and finite rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub name: String,
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<Column>,
    rows: Vec<Vec<f64>>,
}

impl SweepTable {
    pub fn new(name: impl Into<String>, columns: Vec<Column>) -> Self {
        SweepTable {
            name: name.into(),
            metadata: Vec::new(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.metadata.push((key.into(), value.to_string()));
        self
    }

    /// Appends a row; rejects wrong lengths and non-finite values.
    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::InvalidState(format!(
                "table {}: row has {} values for {} columns",
                self.name,
                row.len(),
                self.columns.len()
            )));
        }
        if let Some(k) = row.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidState(format!(
                "table {}: non-finite value in column {}",
                self.name, self.columns[k].name
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# table = {}", self.name);
        let _ = writeln!(out, "# schema_version = {SCHEMA_VERSION}");
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k} = {v}");
        }
        let units: Vec<String> = self
            .columns
            .iter()
            .map(|c| format!("{} [{}]", c.name, c.unit))
            .collect();
        let _ = writeln!(out, "# units: {}", units.join(", "));
        let header: Vec<&str> = self.columns.iter().map(|c| c.name.as_str()).collect();
        let _ = writeln!(out, "{}", header.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.17e}")).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_file(path, &self.to_csv())
    }
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(io)?;
        }
    }
    fs::write(path, contents).map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = SweepTable::new(
            "demo",
            vec![Column::new("tau_s", "s"), Column::new("T", "1")],
        );
        t.meta("epsilon_rad", 0.01);
        t.push(vec![1e-17, 0.1]).unwrap();
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[..4].iter().all(|l| l.starts_with('#')));
        assert_eq!(lines[4], "tau_s,T");
        let cells: Vec<f64> = lines[5].split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cells, vec![1e-17, 0.1]);
    }

    #[test]
    fn rejects_bad_rows() {
        let mut t = SweepTable::new("demo", vec![Column::new("a", "1")]);
        assert!(t.push(vec![f64::NAN]).is_err());
        assert!(t.push(vec![1.0, 2.0]).is_err());
        assert!(t.rows().is_empty());
    }
}
