//! Run reports. The machine-readable form is canonical JSON with no clock
//! readings; timing only appears in the human rendering.

use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Section {
    pub name: String,
    pub passed: bool,
    pub details: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub arguments: Vec<String>,
    pub sections: Vec<Section>,
    pub passed: bool,
}

impl RunReport {
    pub fn new(command: &str, arguments: Vec<String>) -> Self {
        RunReport {
            command: command.into(),
            arguments,
            sections: Vec::new(),
            passed: true,
        }
    }

    pub fn section(&mut self, name: impl Into<String>, passed: bool, details: impl Serialize) {
        self.passed &= passed;
        self.sections.push(Section {
            name: name.into(),
            passed,
            details: serde_json::to_value(details).expect("report details serialize"),
        });
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_human(&self, elapsed: Duration) -> String {
        let mut out = format!("linfty {} {}\n", self.command, self.arguments.join(" "));
        for s in &self.sections {
            out.push_str(&format!("  [{}] {}\n", if s.passed { "pass" } else { "FAIL" }, s.name));
            for line in summarize(&s.details) {
                out.push_str(&format!("      {line}\n"));
            }
        }
        out.push_str(&format!(
            "{} in {:.3}s\n",
            if self.passed { "PASSED" } else { "FAILED" },
            elapsed.as_secs_f64()
        ));
        out
    }
}

/// Top-level scalar fields of a section, for the terse human view.
fn summarize(v: &Value) -> Vec<String> {
    match v {
        Value::Object(map) => map
            .iter()
            .filter_map(|(k, v)| match v {
                Value::String(s) if !s.is_empty() => Some(format!("{k}: {s}")),
                Value::Bool(b) => Some(format!("{k}: {b}")),
                Value::Number(n) => Some(format!("{k}: {n}")),
                _ => None,
            })
            .collect(),
        Value::String(s) => vec![s.clone()],
        _ => Vec::new(),
    }
}
