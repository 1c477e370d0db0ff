//! Report model and its JSON, CSV and text renderings.

use std::fmt::Write as _;
use std::io::Write;

use clap::ValueEnum;
use serde_json::{Map, Number, Value};

use crate::error::CliResult;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    #[default]
    Text,
}

/// Where a number came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Analytic,
    Dp,
    Simulated,
    Input,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Analytic => "analytic",
            Provenance::Dp => "dp",
            Provenance::Simulated => "simulated",
            Provenance::Input => "input",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Float(f64),
    Int(u64),
    Bool(bool),
    Text(String),
}

impl Scalar {
    fn render(&self) -> String {
        match self {
            Scalar::Float(x) => format_float(*x),
            Scalar::Int(v) => v.to_string(),
            Scalar::Bool(b) => b.to_string(),
            Scalar::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Scalar::Float(x) if x.is_finite() => {
                Value::Number(format_float(*x).parse::<Number>().expect("decimal literal"))
            }
            Scalar::Float(x) => Value::String(format_float(*x)),
            Scalar::Int(v) => Value::Number(Number::from(*v)),
            Scalar::Bool(b) => Value::Bool(*b),
            Scalar::Text(s) => Value::String(s.clone()),
        }
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Float(x)
    }
}

impl From<u64> for Scalar {
    fn from(v: u64) -> Self {
        Scalar::Int(v)
    }
}

impl From<u32> for Scalar {
    fn from(v: u32) -> Self {
        Scalar::Int(u64::from(v))
    }
}

impl From<bool> for Scalar {
    fn from(b: bool) -> Self {
        Scalar::Bool(b)
    }
}

impl From<&str> for Scalar {
    fn from(s: &str) -> Self {
        Scalar::Text(s.to_owned())
    }
}

impl From<String> for Scalar {
    fn from(s: String) -> Self {
        Scalar::Text(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Quantity {
    pub name: String,
    pub value: Scalar,
    pub provenance: Provenance,
    /// Extra annotations, rendered in JSON and text only.
    pub notes: Vec<(&'static str, Scalar)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub inputs: Vec<(String, Scalar)>,
    pub quantities: Vec<Quantity>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report { command, inputs: Vec::new(), quantities: Vec::new() }
    }

    pub fn input(&mut self, name: impl Into<String>, value: impl Into<Scalar>) -> &mut Self {
        self.inputs.push((name.into(), value.into()));
        self
    }

    pub fn push(&mut self, name: impl Into<String>, value: impl Into<Scalar>, provenance: Provenance) -> &mut Self {
        self.quantities.push(Quantity { name: name.into(), value: value.into(), provenance, notes: Vec::new() });
        self
    }

    /// Attaches a note to the most recently pushed quantity.
    pub fn note(&mut self, key: &'static str, value: impl Into<Scalar>) -> &mut Self {
        if let Some(q) = self.quantities.last_mut() {
            q.notes.push((key, value.into()));
        }
        self
    }

    pub fn render(&self, format: Format) -> CliResult<String> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Text => Ok(self.to_text()),
        }
    }

    /// A single object with keys in sorted order and floats at 12
    /// significant digits, so parsing and re-printing reproduces the bytes.
    pub fn to_json(&self) -> CliResult<String> {
        let inputs: Map<String, Value> = self.inputs.iter().map(|(k, v)| (k.clone(), v.to_json())).collect();
        let mut results = Map::new();
        for q in &self.quantities {
            let mut entry = Map::new();
            entry.insert("value".into(), q.value.to_json());
            entry.insert("provenance".into(), Value::String(q.provenance.as_str().into()));
            for (k, v) in &q.notes {
                entry.insert((*k).into(), v.to_json());
            }
            results.insert(q.name.clone(), Value::Object(entry));
        }
        let mut root = Map::new();
        root.insert("command".into(), Value::String(self.command.into()));
        root.insert("inputs".into(), Value::Object(inputs));
        root.insert("results".into(), Value::Object(results));
        let mut out = serde_json::to_string_pretty(&Value::Object(root))?;
        out.push('\n');
        Ok(out)
    }

    /// Long format `quantity,value,provenance`; inputs first.
    pub fn to_csv(&self) -> CliResult<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["quantity", "value", "provenance"])?;
        for (k, v) in &self.inputs {
            w.write_record([k.as_str(), &v.render(), Provenance::Input.as_str()])?;
        }
        for q in &self.quantities {
            w.write_record([q.name.as_str(), &q.value.render(), q.provenance.as_str()])?;
        }
        Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is utf-8"))
    }

    pub fn to_text(&self) -> String {
        let width = self
            .inputs
            .iter()
            .map(|(k, _)| k.len())
            .chain(self.quantities.iter().map(|q| q.name.len()))
            .max()
            .unwrap_or(0);
        let mut out = format!("{}\n", self.command);
        for (k, v) in &self.inputs {
            let _ = writeln!(out, "  {k:<width$}  {}", v.render());
        }
        out.push('\n');
        for q in &self.quantities {
            let _ = write!(out, "  {:<width$}  {:<16}  {}", q.name, q.value.render(), q.provenance.as_str());
            for (k, v) in &q.notes {
                let _ = write!(out, "  {k}={}", v.render());
            }
            out.push('\n');
        }
        out
    }
}

/// 12 significant digits without trailing zeros; scientific notation below
/// `1e-4` and from `1e15`.
pub fn format_float(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-4..15).contains(&magnitude) {
        let s = format!("{x:.11e}");
        let (mantissa, exponent) = s.split_once('e').expect("exponent form");
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        return format!("{mantissa}e{exponent}");
    }
    let decimals = (11 - magnitude).clamp(0, 40) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.truncate(s.trim_end_matches('0').trim_end_matches('.').len());
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// Writes `header` and the rows to a CSV file.
pub fn write_csv<P, I, R>(path: P, header: &[&str], rows: I) -> CliResult<()>
where
    P: AsRef<std::path::Path>,
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let file = std::fs::File::create(path.as_ref())
        .map_err(|e| crate::error::CliError::Io(format!("{}: {e}", path.as_ref().display())))?;
    let mut w = csv::Writer::from_writer(std::io::BufWriter::new(file));
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    w.into_inner().map_err(|e| e.into_error())?.flush()?;
    Ok(())
}
