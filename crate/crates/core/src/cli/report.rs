//! Structured reports with aligned-text and JSON-lines renderings.

use std::fmt::Write as _;

use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// A reported value with no pass/fail meaning.
    Info,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Info => "info",
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// One line of a report.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub residual: Option<f64>,
    pub value: Option<String>,
    /// The formula or rule the check evaluates.
    pub formula: String,
    /// Extra key/value fields; text output keeps insertion order.
    pub fields: Vec<(String, String)>,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status) -> Self {
        Self {
            name: name.into(),
            status,
            residual: None,
            value: None,
            formula: String::new(),
            fields: Vec::new(),
        }
    }

    pub fn info(name: impl Into<String>, value: impl Into<String>) -> Self {
        Self::new(name, Status::Info).value(value)
    }

    pub fn residual(mut self, r: f64) -> Self {
        self.residual = Some(r);
        self
    }

    pub fn value(mut self, v: impl Into<String>) -> Self {
        self.value = Some(v.into());
        self
    }

    pub fn formula(mut self, f: impl Into<String>) -> Self {
        self.formula = f.into();
        self
    }

    pub fn field(mut self, k: impl Into<String>, v: impl Into<String>) -> Self {
        self.fields.push((k.into(), v.into()));
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Records,
}

/// Fixed 17-significant-digit rendering.
pub fn format_real(x: f64) -> String {
    // adding 0.0 maps -0.0 to 0.0
    format!("{:.16e}", x + 0.0)
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    /// No check has status `fail`.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| c.status == Status::Fail)
            .count()
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.render_text(),
            Format::Records => self.render_records(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let pass = self
            .checks
            .iter()
            .filter(|c| c.status == Status::Pass)
            .count();
        writeln!(
            out,
            "# {} ({} checks, {} pass, {} fail)",
            self.title,
            self.checks.len(),
            pass,
            self.failures()
        )
        .unwrap();
        let name_w = self
            .checks
            .iter()
            .map(|c| c.name.chars().count())
            .max()
            .unwrap_or(0);
        let value_w = self
            .checks
            .iter()
            .map(|c| c.value.as_deref().map_or(0, |v| v.chars().count()))
            .max()
            .unwrap_or(0);
        for c in &self.checks {
            let residual = c.residual.map(format_real).unwrap_or_default();
            let value = c.value.as_deref().unwrap_or("");
            let mut line = format!(
                "{:<name_w$}  {:<4}  {:>23}  {:<value_w$}",
                c.name,
                c.status.name(),
                residual,
                value,
            );
            if !c.formula.is_empty() {
                line.push_str("  ");
                line.push_str(&c.formula);
            }
            for (k, v) in &c.fields {
                write!(line, "  {k}={v}").unwrap();
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }

    fn render_records(&self) -> String {
        let mut out = String::new();
        let mut header = Map::new();
        header.insert("record".into(), Value::from("header"));
        header.insert("title".into(), Value::from(self.title.clone()));
        header.insert("checks".into(), Value::from(self.checks.len()));
        header.insert("failures".into(), Value::from(self.failures()));
        out.push_str(&Value::Object(header).to_string());
        out.push('\n');
        for c in &self.checks {
            let mut m = Map::new();
            m.insert("record".into(), Value::from("check"));
            m.insert("name".into(), Value::from(c.name.clone()));
            m.insert("status".into(), Value::from(c.status.name()));
            if let Some(r) = c.residual {
                m.insert("residual".into(), Value::from(format_real(r)));
            }
            if let Some(v) = &c.value {
                m.insert("value".into(), Value::from(v.clone()));
            }
            if !c.formula.is_empty() {
                m.insert("formula".into(), Value::from(c.formula.clone()));
            }
            for (k, v) in &c.fields {
                m.insert(k.clone(), Value::from(v.clone()));
            }
            out.push_str(&Value::Object(m).to_string());
            out.push('\n');
        }
        out
    }
}
