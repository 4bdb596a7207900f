//! Command reports, rendered as text or as versioned JSON.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: &str = "nonnoether/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    fn of(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    /// Nonzero residual components in normal form.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub residual: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measured: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Section {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub lines: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Table>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Invocation {
    pub name: String,
    pub model: String,
    /// Effective options.
    pub options: serde_json::Map<String, Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Invocation,
    pub seed: u64,
    pub status: Status,
    pub checks: Vec<Check>,
    pub sections: Vec<Section>,
}

impl Report {
    pub fn new(command: &str, model: &str, seed: u64) -> Report {
        Report {
            schema: SCHEMA,
            tool: "nonnoether",
            version: env!("CARGO_PKG_VERSION"),
            command: Invocation {
                name: command.to_string(),
                model: model.to_string(),
                options: serde_json::Map::new(),
            },
            seed,
            status: Status::Pass,
            checks: Vec::new(),
            sections: Vec::new(),
        }
    }

    pub fn option(&mut self, name: &str, v: impl Into<Value>) {
        self.command.options.insert(name.to_string(), v.into());
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    fn push(&mut self, c: Check) {
        if c.status == Status::Fail {
            self.status = Status::Fail;
        }
        self.checks.push(c);
    }

    /// An exact check: passes when `residual` is empty.
    pub fn exact(&mut self, name: impl Into<String>, residual: Vec<String>) {
        self.push(Check {
            name: name.into(),
            status: Status::of(residual.is_empty()),
            residual,
            measured: None,
            tolerance: None,
            note: None,
        });
    }

    /// A numeric check: passes when `measured < tolerance`.
    pub fn bound(&mut self, name: impl Into<String>, measured: f64, tolerance: f64) {
        self.push(Check {
            name: name.into(),
            status: Status::of(measured < tolerance),
            residual: Vec::new(),
            measured: Some(measured),
            tolerance: Some(tolerance),
            note: None,
        });
    }

    pub fn flag(&mut self, name: impl Into<String>, ok: bool, note: impl Into<String>) {
        let note = note.into();
        self.push(Check {
            name: name.into(),
            status: Status::of(ok),
            residual: Vec::new(),
            measured: None,
            tolerance: None,
            note: (!note.is_empty()).then_some(note),
        });
    }

    pub fn value(&mut self, name: &str, v: impl Into<Value>) {
        self.sections.push(Section {
            name: name.to_string(),
            value: Some(v.into()),
            lines: Vec::new(),
            table: None,
        });
    }

    pub fn lines(&mut self, name: &str, lines: Vec<String>) {
        self.sections.push(Section {
            name: name.to_string(),
            value: None,
            lines,
            table: None,
        });
    }

    pub fn table(&mut self, name: &str, columns: &[&str], rows: Vec<Vec<Value>>) {
        self.sections.push(Section {
            name: name.to_string(),
            value: None,
            lines: Vec::new(),
            table: Some(Table {
                columns: columns.iter().map(|c| c.to_string()).collect(),
                rows,
            }),
        });
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} {}: {} on {} (seed {})",
            self.tool, self.version, self.command.name, self.command.model, self.seed
        );
        for c in &self.checks {
            let mut line = format!("{}  {}", c.status.label(), c.name);
            if let (Some(m), Some(t)) = (c.measured, c.tolerance) {
                let _ = write!(line, "  {m:.3e} (< {t:.0e})");
            }
            if let Some(n) = &c.note {
                let _ = write!(line, "  {n}");
            }
            let _ = writeln!(out, "{line}");
            for r in &c.residual {
                let _ = writeln!(out, "      {r}");
            }
        }
        for s in &self.sections {
            if let Some(v) = &s.value {
                let _ = writeln!(out, "{}: {}", s.name, plain(v));
                continue;
            }
            let _ = writeln!(out, "{}:", s.name);
            for l in &s.lines {
                let _ = writeln!(out, "  {l}");
            }
            if let Some(t) = &s.table {
                let _ = writeln!(out, "  {}", t.columns.join("\t"));
                for r in &t.rows {
                    let cells: Vec<String> = r.iter().map(plain).collect();
                    let _ = writeln!(out, "  {}", cells.join("\t"));
                }
            }
        }
        let _ = writeln!(out, "result: {}", self.status.label());
        out
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => format!("{x:.6e}"),
            _ => n.to_string(),
        },
        other => other.to_string(),
    }
}
