//! Report tables and the atomic write of an output directory.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{ensure, Context, Result};

use crate::plot::{self, Plot};

/// Column units written into the header as `name[unit]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Turns,
    Measure,
    Dimensionless,
    /// Labels and verdicts; no unit suffix.
    Text,
}

impl Unit {
    fn suffix(self) -> &'static str {
        match self {
            Unit::Turns => "[turns]",
            Unit::Measure => "[normalized-measure]",
            Unit::Dimensionless => "[dimensionless]",
            Unit::Text => "",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            // Shortest round-trip form, so equal values always print identically.
            Cell::Num(v) => format!("{v:e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
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
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<(String, Unit)>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[(&str, Unit)]) -> Self {
        Self { columns: columns.iter().map(|&(n, u)| (n.to_string(), u)).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.columns.iter().map(|(n, u)| format!("{n}{}", u.suffix())))?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        Ok(w.into_inner().context("flushing CSV")?)
    }
}

/// A finished experiment: its table, an optional plot, and numeric flags that
/// make `--strict` fail.
#[derive(Debug)]
pub struct Report {
    pub table: Table,
    pub plot: Option<Plot>,
    pub flags: Vec<String>,
}

/// Renders everything in memory, then writes both files through temporaries and
/// renames them into place, so a failure leaves no partial output.
pub fn write_outputs(dir: &Path, report: &Report, with_plot: bool) -> Result<Vec<PathBuf>> {
    ensure!(report.table.len() > 0, "the experiment produced no rows");
    let csv = report.table.to_csv()?;
    let svg = match (&report.plot, with_plot) {
        (Some(p), true) => Some(plot::render(p)?),
        _ => None,
    };
    let created_dir = !dir.exists();
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut files = vec![("report.csv", csv)];
    if let Some(svg) = svg {
        files.push(("plot.svg", svg.into_bytes()));
    }
    let mut staged = Vec::new();
    let result = (|| -> Result<Vec<PathBuf>> {
        for (name, bytes) in &files {
            let tmp = dir.join(format!(".{name}.tmp"));
            fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
            staged.push(tmp);
        }
        let mut done = Vec::new();
        for ((name, _), tmp) in files.iter().zip(&staged) {
            let dest = dir.join(name);
            fs::rename(tmp, &dest).with_context(|| format!("renaming into {}", dest.display()))?;
            done.push(dest);
        }
        if done.len() == 1 {
            // A plot from an earlier run would no longer match the report.
            let stale = dir.join("plot.svg");
            if stale.exists() {
                fs::remove_file(&stale).with_context(|| format!("removing {}", stale.display()))?;
            }
        }
        Ok(done)
    })();
    if result.is_err() {
        for p in staged.iter().chain(files.iter().map(|(n, _)| dir.join(n)).collect::<Vec<_>>().iter()) {
            let _ = fs::remove_file(p);
        }
        if created_dir {
            let _ = fs::remove_dir(dir);
        }
    }
    result
}
