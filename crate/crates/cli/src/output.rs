//! Report model shared by the text and JSON renderers.
//!
//! Numbers are printed as `{:.16e}` (17 significant digits) with a signed exponent in both modes, so
//! the two renderings carry identical values. Non-finite numbers become
//! `null` in JSON and `inf`/`-inf`/`nan` in text.

use std::str::FromStr;

use clap::ValueEnum;
use gram_core::Scalar;
use serde_json::{Map, Number, Value as Json};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Ok = 0,
    InputError = 1,
    RankDeficient = 2,
    ZeroVariance = 3,
    VerificationFailed = 4,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }

    pub fn meaning(self) -> &'static str {
        match self {
            ExitStatus::Ok => "ok",
            ExitStatus::InputError => "input error",
            ExitStatus::RankDeficient => "rank deficient",
            ExitStatus::ZeroVariance => "zero variance",
            ExitStatus::VerificationFailed => "verification failure",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    Complex(Scalar),
    List(Vec<Value>),
    Null,
}

pub fn format_number(x: f64) -> String {
    if x.is_finite() {
        let s = format!("{x:.16e}");
        match s.split_once('e') {
            Some((mantissa, exp)) if !exp.starts_with('-') => format!("{mantissa}e+{exp}"),
            _ => s,
        }
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

impl Value {
    fn to_json(&self) -> Json {
        match self {
            Value::Num(x) if x.is_finite() => {
                Json::Number(Number::from_str(&format_number(*x)).expect("valid json number"))
            }
            Value::Num(_) | Value::Null => Json::Null,
            Value::Int(i) => Json::from(*i),
            Value::Bool(b) => Json::Bool(*b),
            Value::Text(s) => Json::String(s.clone()),
            Value::Complex(z) => {
                Json::Array(vec![Value::Num(z.re).to_json(), Value::Num(z.im).to_json()])
            }
            Value::List(items) => Json::Array(items.iter().map(Value::to_json).collect()),
        }
    }

    fn to_text(&self) -> String {
        match self {
            Value::Num(x) => format_number(*x),
            Value::Int(i) => i.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => s.clone(),
            Value::Complex(z) => {
                let im = format_number(z.im);
                let sign = if im.starts_with('-') { "" } else { "+" };
                format!("{}{sign}{im}i", format_number(z.re))
            }
            Value::List(items) => {
                let parts: Vec<String> = items.iter().map(Value::to_text).collect();
                format!("[{}]", parts.join(", "))
            }
            Value::Null => "null".into(),
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Num(x)
    }
}

impl From<Option<f64>> for Value {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Value::Null, Value::Num)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_owned())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

/// One command's output, in insertion order.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub inputs: Vec<(String, Value)>,
    pub results: Vec<(String, Value)>,
    pub deviations: Vec<(String, Value)>,
    pub errors: Vec<String>,
    pub status: ExitStatus,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            inputs: Vec::new(),
            results: Vec::new(),
            deviations: Vec::new(),
            errors: Vec::new(),
            status: ExitStatus::Ok,
        }
    }

    pub fn input(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        self.inputs.push((key.into(), value.into()));
    }

    pub fn result(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        self.results.push((key.into(), value.into()));
    }

    pub fn deviation(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        self.deviations.push((key.into(), value.into()));
    }

    /// Records an error and raises the exit status to `status` unless a
    /// status was already set.
    pub fn fail(&mut self, status: ExitStatus, message: impl Into<String>) {
        if self.status == ExitStatus::Ok {
            self.status = status;
        }
        self.errors.push(message.into());
    }

    pub fn to_json(&self) -> Json {
        let section = |items: &[(String, Value)]| {
            Json::Object(
                items
                    .iter()
                    .map(|(k, v)| (k.clone(), v.to_json()))
                    .collect::<Map<_, _>>(),
            )
        };
        let mut exit = Map::new();
        exit.insert("code".into(), Json::from(self.status.code()));
        exit.insert("meaning".into(), Json::String(self.status.meaning().into()));
        exit.insert(
            "errors".into(),
            Json::Array(self.errors.iter().cloned().map(Json::String).collect()),
        );
        let mut doc = Map::new();
        doc.insert("command".into(), Json::String(self.command.into()));
        doc.insert("inputs".into(), section(&self.inputs));
        doc.insert("results".into(), section(&self.results));
        doc.insert("deviations".into(), section(&self.deviations));
        doc.insert("exit_semantics".into(), Json::Object(exit));
        Json::Object(doc)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        for (section, items) in [
            ("inputs", &self.inputs),
            ("results", &self.results),
            ("deviations", &self.deviations),
        ] {
            for (k, v) in items {
                out.push_str(&format!("{section}.{k}: {}\n", v.to_text()));
            }
        }
        for e in &self.errors {
            out.push_str(&format!("error: {e}\n"));
        }
        out.push_str(&format!(
            "exit: {} ({})\n",
            self.status.code(),
            self.status.meaning()
        ));
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
                s.push('\n');
                s
            }
        }
    }
}
