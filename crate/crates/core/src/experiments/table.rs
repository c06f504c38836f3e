use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::ScenarioKind;
use crate::{Error, Result};

/// Named numeric columns, rows in grid order, and a `key = value`
/// parameter echo.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultTable {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
    metadata: Vec<(String, String)>,
}

impl ResultTable {
    pub fn new(columns: Vec<String>, metadata: Vec<(String, String)>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            metadata,
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::DimensionMismatch(format!(
                "row has {} values, table has {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn metadata(&self) -> &[(String, String)] {
        &self.metadata
    }

    pub fn metadata_value(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Scenario kind recorded in the metadata, if any.
    pub fn kind(&self) -> Option<ScenarioKind> {
        self.metadata_value("kind").and_then(|k| k.parse().ok())
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = Vec::new();
        write_csv_to(self, &mut out).expect("writing to a Vec cannot fail");
        String::from_utf8(out).expect("CSV output is ASCII")
    }

    /// Parses CSV as written by [`write_csv`]. Metadata is not stored in
    /// the CSV and comes back empty.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Scenario("CSV is empty".into()))?;
        let columns: Vec<String> = header.split(',').map(str::to_string).collect();
        let mut table = ResultTable::new(columns, Vec::new());
        for (i, line) in lines.enumerate() {
            let row = line
                .split(',')
                .map(|field| {
                    parse_number(field).ok_or_else(|| {
                        Error::Scenario(format!("CSV line {}: bad number {field:?}", i + 2))
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            table.push_row(row)?;
        }
        Ok(table)
    }
}

fn parse_number(field: &str) -> Option<f64> {
    match field {
        "nan" => Some(f64::NAN),
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        _ => field.parse().ok(),
    }
}

/// Renders `x` like C's `%.12g`: 12 significant digits, trailing zeros
/// dropped, exponent notation outside `1e-4 <= |x| < 1e12`.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..12).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let digits = (11 - exp) as usize;
        trim_zeros(&format!("{x:.digits$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_csv_to<W: Write>(table: &ResultTable, mut w: W) -> Result<()> {
    writeln!(w, "{}", table.columns.join(","))?;
    for row in &table.rows {
        let line: Vec<String> = row.iter().map(|&x| format_number(x)).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv(table: &ResultTable, destination: &Path) -> Result<()> {
    let file = File::create(destination)?;
    write_csv_to(table, BufWriter::new(file))
}
