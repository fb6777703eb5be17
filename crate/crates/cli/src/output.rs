//! Tables, checks and their CSV/JSON renderings.

use std::io::Write;

use serde::Serialize;
use serde_json::{json, Map, Number, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => sig17(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(x) => number(*x),
            Cell::Int(n) => Value::from(*n),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
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

impl From<u64> for Cell {
    fn from(n: u64) -> Self {
        Cell::Int(n)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as u64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

/// `x` with 17 significant digits, positional where the exponent is modest.
pub fn sig17(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.16e}");
    let exp: i32 = sci
        .rsplit('e')
        .next()
        .and_then(|e| e.parse().ok())
        .unwrap_or(0);
    if (-5..=16).contains(&exp) {
        format!("{:.*}", (16 - exp) as usize, x)
    } else {
        sci
    }
}

fn number(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    sig17(x)
        .parse::<Number>()
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub expected: f64,
    pub actual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `|actual − expected| ≤ tolerance`.
    pub fn within(name: impl Into<String>, expected: f64, actual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            expected,
            actual,
            tolerance,
            pass: (actual - expected).abs() <= tolerance,
        }
    }

    fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "expected": number(self.expected),
            "actual": number(self.actual),
            "tolerance": number(self.tolerance),
            "pass": self.pass,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub config: Value,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &str, config: &impl Serialize, columns: Vec<&'static str>) -> Self {
        Self {
            command: command.to_string(),
            config: serde_json::to_value(config).unwrap_or(Value::Null),
            columns,
            rows: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(k, v)| (k.to_string(), v.to_json()))
                    .collect();
                Value::Object(obj)
            })
            .collect::<Vec<_>>();
        json!({
            "command": self.command,
            "config": self.config,
            "rows": rows,
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn write_json(&self, out: &mut dyn Write) -> anyhow::Result<()> {
        serde_json::to_writer_pretty(&mut *out, &self.to_json())?;
        writeln!(out)?;
        Ok(())
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> anyhow::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()?;
        Ok(())
    }

    /// Human-readable check lines, for stderr.
    pub fn check_summary(&self) -> String {
        self.checks
            .iter()
            .map(|c| {
                format!(
                    "{} {}: expected {} actual {} tolerance {}\n",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    sig17(c.expected),
                    sig17(c.actual),
                    sig17(c.tolerance)
                )
            })
            .collect()
    }
}
