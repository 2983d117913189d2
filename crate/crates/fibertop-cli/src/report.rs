//! Deterministic plain-text reports with a parallel CSV row stream.
//!
//! Every `field` call appends one text line and one `(section, name, value)`
//! row; free-form notes go to the text only. Reports never hold floats in
//! any formatting other than `{}` so reruns are byte-identical.

use fibertop::claims::{ClaimCheck, Verdict};
use std::fmt::Display;

pub struct Report {
    text: String,
    rows: Vec<(String, String, String)>,
    section: String,
    counterexample: bool,
}

impl Report {
    pub fn new(command: &str, kind: &str) -> Self {
        let mut report = Report {
            text: String::from("fibertop report\n"),
            rows: Vec::new(),
            section: String::from("meta"),
            counterexample: false,
        };
        report.field("command", command);
        report.field("kind", kind);
        report
    }

    pub fn section(&mut self, name: &str) {
        self.text.push('\n');
        self.text.push('[');
        self.text.push_str(name);
        self.text.push_str("]\n");
        self.section = name.to_string();
    }

    pub fn field(&mut self, name: &str, value: impl Display) {
        let value = value.to_string();
        self.text.push_str(name);
        self.text.push_str(": ");
        self.text.push_str(&value);
        self.text.push('\n');
        self.rows.push((self.section.clone(), name.to_string(), value));
    }

    /// Text-only line; never mirrored into the CSV rows.
    pub fn note(&mut self, line: &str) {
        self.text.push_str(line);
        self.text.push('\n');
    }

    /// Echoes the normalized document so a report pins down its input.
    pub fn input_echo(&mut self, normalized: &str) {
        self.section("input");
        self.text.push_str(normalized);
        if !normalized.ends_with('\n') {
            self.text.push('\n');
        }
    }

    pub fn claims(&mut self, checks: &[ClaimCheck]) {
        self.section("claims");
        if checks.is_empty() {
            self.note("none applicable");
        }
        for check in checks {
            self.field(check.name, format!("{}; {}", check.verdict, check.details));
            if check.verdict == Verdict::CounterexampleCandidate {
                self.counterexample = true;
            }
        }
    }

    pub fn has_counterexample(&self) -> bool {
        self.counterexample
    }

    pub fn timing(&mut self, elapsed_ms: u128) {
        self.section("timing");
        self.field("elapsed_ms", elapsed_ms);
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn rows(&self) -> &[(String, String, String)] {
        &self.rows
    }
}
