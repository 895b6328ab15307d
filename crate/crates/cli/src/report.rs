//! Ordered key/value reports rendered either as text or as json.

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

pub const SCHEMA: &str = "gaussfid-report/1";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Real(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    Texts(Vec<String>),
    Reals(Vec<f64>),
    Matrix(Vec<Vec<f64>>),
    /// Rows of a table; every row has the same keys.
    Rows(Vec<Section>),
    Group(Section),
    Null,
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Real(x)
    }
}

impl From<usize> for Value {
    fn from(x: usize) -> Self {
        Value::Int(x as u64)
    }
}

impl From<bool> for Value {
    fn from(x: bool) -> Self {
        Value::Bool(x)
    }
}

impl From<&str> for Value {
    fn from(x: &str) -> Self {
        Value::Text(x.to_owned())
    }
}

impl From<String> for Value {
    fn from(x: String) -> Self {
        Value::Text(x)
    }
}

impl From<Vec<f64>> for Value {
    fn from(x: Vec<f64>) -> Self {
        Value::Reals(x)
    }
}

impl From<Section> for Value {
    fn from(x: Section) -> Self {
        Value::Group(x)
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(x: Option<T>) -> Self {
        x.map_or(Value::Null, Into::into)
    }
}

/// Insertion-ordered fields.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Section(Vec<(String, Value)>);

impl Section {
    pub fn new() -> Self {
        Section::default()
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.push(key, value);
        self
    }

    pub fn push(&mut self, key: &str, value: impl Into<Value>) {
        self.0.push((key.to_owned(), value.into()));
    }

    fn render(&self, indent: usize, out: &mut String) {
        let pad = " ".repeat(indent);
        for (key, value) in &self.0 {
            match value {
                Value::Group(inner) => {
                    out.push_str(&format!("{pad}{key}:\n"));
                    inner.render(indent + 2, out);
                }
                Value::Matrix(rows) => {
                    out.push_str(&format!("{pad}{key}:\n"));
                    for row in rows {
                        let cells: Vec<String> = row.iter().map(|x| format!("{:>20}", sig12(*x))).collect();
                        out.push_str(&format!("{pad}  {}\n", cells.join("")));
                    }
                }
                Value::Rows(rows) => {
                    out.push_str(&format!("{pad}{key}:\n"));
                    render_table(rows, indent + 2, out);
                }
                scalar => out.push_str(&format!("{pad}{key}: {}\n", inline(scalar))),
            }
        }
    }
}

fn inline(value: &Value) -> String {
    match value {
        Value::Real(x) => sig12(*x),
        Value::Int(x) => x.to_string(),
        Value::Bool(x) => x.to_string(),
        Value::Text(x) => x.clone(),
        Value::Texts(xs) => xs.join(", "),
        Value::Reals(xs) => {
            let cells: Vec<String> = xs.iter().map(|x| sig12(*x)).collect();
            format!("[{}]", cells.join(", "))
        }
        Value::Null => "-".into(),
        Value::Matrix(_) | Value::Rows(_) | Value::Group(_) => "...".into(),
    }
}

fn render_table(rows: &[Section], indent: usize, out: &mut String) {
    let Some(first) = rows.first() else {
        return;
    };
    let headers: Vec<&str> = first.0.iter().map(|(k, _)| k.as_str()).collect();
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| r.0.iter().map(|(_, v)| inline(v)).collect())
        .collect();
    let widths: Vec<usize> = (0..headers.len())
        .map(|c| {
            cells
                .iter()
                .map(|r| r[c].len())
                .chain([headers[c].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let pad = " ".repeat(indent);
    let line = |items: Vec<&str>| {
        let padded: Vec<String> = items
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:>w$}"))
            .collect();
        format!("{pad}{}\n", padded.join("  "))
    };
    out.push_str(&line(headers.clone()));
    for row in &cells {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
}

/// Round to 12 significant digits, plain notation for moderate magnitudes.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..12).contains(&exp) {
        let rounded: f64 = sci.parse().expect("round trip");
        trim_zeros(&format!("{:.*}", (11 - exp).max(0) as usize, rounded))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        s.to_owned()
    }
}

impl Serialize for Section {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            // serde_json writes non-finite floats as null
            Value::Real(x) => serializer.serialize_f64(*x),
            Value::Int(x) => serializer.serialize_u64(*x),
            Value::Bool(x) => serializer.serialize_bool(*x),
            Value::Text(x) => serializer.serialize_str(x),
            Value::Texts(xs) => xs.serialize(serializer),
            Value::Reals(xs) => xs.serialize(serializer),
            Value::Matrix(rows) => rows.serialize(serializer),
            Value::Rows(rows) => {
                let mut seq = serializer.serialize_seq(Some(rows.len()))?;
                for row in rows {
                    seq.serialize_element(row)?;
                }
                seq.end()
            }
            Value::Group(section) => section.serialize(serializer),
            Value::Null => serializer.serialize_unit(),
        }
    }
}

/// Full command report.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub inputs: Vec<String>,
    pub result: Section,
    pub verify: Option<Section>,
}

impl Report {
    fn envelope(&self) -> Section {
        let mut top = Section::new()
            .with("schema", SCHEMA)
            .with("version", VERSION)
            .with("command", self.command)
            .with("inputs", Value::Texts(self.inputs.clone()))
            .with("result", self.result.clone());
        if let Some(verify) = &self.verify {
            top.push("verify", verify.clone());
        }
        top
    }

    pub fn to_json(&self) -> String {
        to_json(&self.envelope())
    }

    pub fn to_human(&self) -> String {
        let mut out = format!("gaussfid {VERSION} {}\n", self.command);
        let mut body = Section::new().with("inputs", Value::Texts(self.inputs.clone()));
        body.0.extend(self.result.0.iter().cloned());
        if let Some(verify) = &self.verify {
            body.push("verify", verify.clone());
        }
        body.render(0, &mut out);
        out
    }
}

pub fn to_json(section: &Section) -> String {
    serde_json::to_string_pretty(section).expect("reports always serialize") + "\n"
}
