//! CSV tables, assertion records and run manifests.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
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

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Floats carry 17 significant digits so that values round-trip exactly.
fn format_cell(cell: &Cell, out: &mut String) {
    match cell {
        Cell::Float(v) => write!(out, "{v:.16e}").expect("write to String"),
        Cell::Int(v) => write!(out, "{v}").expect("write to String"),
        Cell::Text(s) => out.push_str(s),
    }
}

/// One measured curve with a fixed column order.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// Appended to the output stem; empty for the primary table.
    pub name: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, header: &[&'static str]) -> Self {
        Table {
            name: name.to_string(),
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// UTF-8 CSV with a header row and LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                format_cell(cell, &mut out);
            }
            out.push('\n');
        }
        out
    }

    pub fn file_name(&self, stem: &str) -> String {
        if self.name.is_empty() {
            format!("{stem}.csv")
        } else {
            format!("{stem}_{}.csv", self.name)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// Measured and reported without an assertion.
    Recorded,
}

/// How `measured` is compared with `expected`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// `|measured − expected| ≤ tolerance`.
    Within,
    /// `measured ≤ expected + tolerance`.
    AtMost,
    /// `measured ≥ expected − tolerance`.
    AtLeast,
    /// `measured > expected`.
    Above,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub name: String,
    pub status: Status,
    pub measured: Option<f64>,
    pub expected: Option<f64>,
    pub tolerance: Option<f64>,
    pub comparison: Comparison,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

impl Criterion {
    pub fn compare(name: impl Into<String>, measured: f64, comparison: Comparison, expected: f64, tolerance: f64) -> Self {
        let ok = match comparison {
            Comparison::Within => (measured - expected).abs() <= tolerance,
            Comparison::AtMost => measured <= expected + tolerance,
            Comparison::AtLeast => measured >= expected - tolerance,
            Comparison::Above => measured > expected,
            Comparison::None => true,
        };
        Criterion {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            measured: finite(measured),
            expected: finite(expected),
            tolerance: finite(tolerance),
            comparison,
            note: String::new(),
        }
    }

    pub fn within(name: impl Into<String>, measured: f64, expected: f64, tolerance: f64) -> Self {
        Self::compare(name, measured, Comparison::Within, expected, tolerance)
    }

    pub fn at_most(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self::compare(name, measured, Comparison::AtMost, bound, 0.0)
    }

    pub fn at_least(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self::compare(name, measured, Comparison::AtLeast, bound, 0.0)
    }

    pub fn above(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self::compare(name, measured, Comparison::Above, bound, 0.0)
    }

    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Criterion {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            measured: None,
            expected: None,
            tolerance: None,
            comparison: Comparison::None,
            note: String::new(),
        }
    }

    pub fn recorded(name: impl Into<String>, measured: f64) -> Self {
        Criterion {
            name: name.into(),
            status: Status::Recorded,
            measured: finite(measured),
            expected: None,
            tolerance: None,
            comparison: Comparison::None,
            note: String::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// What an experiment produced, before anything is written.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub tables: Vec<Table>,
    pub criteria: Vec<Criterion>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(Criterion::passed)
    }

    pub fn criterion(&self, name: &str) -> Option<&Criterion> {
        self.criteria.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub experiment: String,
    pub config: ExperimentConfig,
    pub version: String,
    pub started_unix_seconds: u64,
    pub wall_clock_seconds: f64,
    pub threads: usize,
    pub csv_files: Vec<String>,
    pub criteria: Vec<Criterion>,
    pub warnings: Vec<String>,
    pub passed: bool,
}
