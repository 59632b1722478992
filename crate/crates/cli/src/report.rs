use std::io::Write;

use serde_json::{json, Map, Number, Value};

use crate::args::Format;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
const SIGNIFICANT: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    UInt(u64),
    Float(f64),
    Text(String),
    Bool(bool),
    List(Vec<u64>),
    Nested(Vec<Vec<u64>>),
    Null,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::UInt(v) => v.to_string(),
            Cell::Float(v) => fmt_sig(*v, SIGNIFICANT),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::List(_) | Cell::Nested(_) => self.json().to_string(),
            Cell::Null => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::UInt(v) => json!(v),
            Cell::Float(v) => fmt_sig(*v, SIGNIFICANT)
                .parse::<f64>()
                .ok()
                .and_then(Number::from_f64)
                .map_or(Value::Null, Value::Number),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
            Cell::List(v) => json!(v),
            Cell::Nested(v) => json!(v),
            Cell::Null => Value::Null,
        }
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::UInt(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::UInt(v as u64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<Vec<u64>> for Cell {
    fn from(v: Vec<u64>) -> Self {
        Cell::List(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

/// `%.{sig}g`-style formatting.
pub fn fmt_sig(v: f64, sig: usize) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{:.*e}", sig - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}"))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

pub struct Report {
    pub command: &'static str,
    /// Recorded verbatim in the output; excludes `--jobs` and `--output`.
    pub config: Vec<(&'static str, Value)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub checks: Vec<Check>,
    seed: u64,
}

impl Report {
    pub fn new(command: &'static str, seed: u64, mode: &str) -> Self {
        Report {
            command,
            config: vec![
                ("command", json!(command)),
                ("seed", json!(seed)),
                ("mode", json!(mode)),
                ("version", json!(VERSION)),
            ],
            columns: Vec::new(),
            rows: Vec::new(),
            checks: Vec::new(),
            seed,
        }
    }

    pub fn set(&mut self, key: &'static str, value: Value) {
        self.config.push((key, value));
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn failed(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    fn header(&self) -> Vec<&str> {
        let mut h = self.columns.clone();
        h.extend(["seed", "version"]);
        h
    }

    pub fn render(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Csv => self.render_csv(out),
            Format::Json => self.render_json(out),
        }
    }

    fn render_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(self.header())?;
        for row in &self.rows {
            let mut rec: Vec<String> = row.iter().map(Cell::csv).collect();
            rec.push(self.seed.to_string());
            rec.push(VERSION.to_string());
            w.write_record(&rec)?;
        }
        w.flush()
    }

    fn render_json(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let config: Map<String, Value> = self
            .config
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect();
        let header = self.header();
        let results: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (col, cell) in header.iter().zip(row) {
                    obj.insert(col.to_string(), cell.json());
                }
                obj.insert("seed".into(), json!(self.seed));
                obj.insert("version".into(), json!(VERSION));
                Value::Object(obj)
            })
            .collect();
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
            .collect();
        let doc = json!({"config": config, "results": results, "checks": checks});
        serde_json::to_writer_pretty(&mut *out, &doc)?;
        out.write_all(b"\n")
    }
}
