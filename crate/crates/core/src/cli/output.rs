use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::checks::CheckOutcome;

pub const UNITS: &str = "natural units: hbar = m = c = 1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Int(u64),
    Num(f64),
    Flag(bool),
    Text(String),
}

impl Cell {
    /// Shortest text that parses back to the same value.
    pub fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => format!("{v:?}"),
            Cell::Flag(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            _ => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Flag(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[idx]).collect())
    }

    pub fn write_csv<W: Write>(&self, sink: W) -> std::io::Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(sink);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckEntry {
    pub fn new(value: f64, tolerance: f64) -> Self {
        Self { value, tolerance, passed: value <= tolerance }
    }
}

impl From<&CheckOutcome> for CheckEntry {
    fn from(c: &CheckOutcome) -> Self {
        Self { value: c.value, tolerance: c.tolerance, passed: c.passed }
    }
}

/// Everything one run produces. `sidecars` are extra CSV tables written next
/// to the main output as `<stem>.<name>.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mode: String,
    pub units: String,
    pub params: BTreeMap<String, Value>,
    pub derived: BTreeMap<String, Value>,
    pub checks: BTreeMap<String, CheckEntry>,
    pub table: Table,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sidecars: BTreeMap<String, Table>,
}

impl Summary {
    pub fn new(mode: &str, table: Table) -> Self {
        Self {
            mode: mode.to_string(),
            units: UNITS.to_string(),
            params: BTreeMap::new(),
            derived: BTreeMap::new(),
            checks: BTreeMap::new(),
            table,
            sidecars: BTreeMap::new(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.values().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summary serialises");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_is_shortest_round_trip() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![0.1.into(), 1e-20.into()]);
        t.push(vec![(1.0f64 / 3.0).into(), 2.0.into()]);
        let text = t.to_csv_string();
        assert_eq!(text, "a,b\n0.1,1e-20\n0.3333333333333333,2.0\n");
        for line in text.lines().skip(1) {
            for field in line.split(',') {
                let v: f64 = field.parse().unwrap();
                assert_eq!(format!("{v:?}"), field);
            }
        }
    }

    #[test]
    fn summary_round_trip() {
        let mut t = Table::new(&["check", "value", "pass"]);
        t.push(vec!["x".into(), 1.2345678901234567e-11.into(), true.into()]);
        let mut s = Summary::new("kernels-check", t);
        s.checks.insert("x".into(), CheckEntry::new(1e-11, 1e-10));
        s.derived.insert("eigenvalues".into(), serde_json::json!([0.5, 1.4999999999999998]));
        let back: Summary = serde_json::from_str(&s.to_json()).unwrap();
        assert_eq!(back, s);
    }
}
