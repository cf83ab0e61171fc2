//! Verification reports: named check results with failure witnesses,
//! rendered as human-readable text or machine-parsable `key = value` lines.

use std::fmt::Write as _;

/// Concrete failing instance of a check, with named inputs and the nonzero
/// residual that certifies the failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub inputs: Vec<(String, String)>,
    pub residual: String,
}

impl Witness {
    pub fn new(inputs: Vec<(String, String)>, residual: String) -> Self {
        Witness { inputs, residual }
    }
}

/// Outcome of one named check over all of its instances.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub instances: usize,
    pub witness: Option<Witness>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Full report for one verification command.
#[derive(Debug, Clone, Default)]
pub struct VerificationReport {
    pub title: String,
    pub meta: Vec<(String, String)>,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn new(title: impl Into<String>) -> Self {
        VerificationReport { title: title.into(), meta: Vec::new(), checks: Vec::new() }
    }

    pub fn push_meta(&mut self, key: impl Into<String>, value: impl ToString) {
        self.meta.push((key.into(), value.to_string()));
    }

    pub fn push_check(&mut self, check: CheckResult) {
        self.checks.push(check);
    }

    /// Append all checks and meta entries of `other` under a section prefix.
    pub fn absorb(&mut self, prefix: &str, other: VerificationReport) {
        for (k, v) in other.meta {
            if !self.meta.iter().any(|(mk, mv)| *mk == k && *mv == v) {
                self.meta.push((k, v));
            }
        }
        for mut c in other.checks {
            c.name = format!("{prefix}{}", c.name);
            self.checks.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed())
    }

    /// Human-readable rendering.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.title);
        for (k, v) in &self.meta {
            let _ = writeln!(out, "  {k} = {v}");
        }
        if !self.checks.is_empty() {
            let _ = writeln!(out);
        }
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0).max(12);
        for c in &self.checks {
            let status = if c.passed() { "pass" } else { "FAIL" };
            let _ = writeln!(
                out,
                "  {:<width$}  {status}  ({} instance{})",
                c.name,
                c.instances,
                if c.instances == 1 { "" } else { "s" },
                width = width
            );
            if let Some(w) = &c.witness {
                for (slot, value) in &w.inputs {
                    let _ = writeln!(out, "      {slot} = {value}");
                }
                let _ = writeln!(out, "      residual = {}", w.residual);
            }
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "result: {}", if self.passed() { "PASS" } else { "FAIL" });
        out
    }

    /// Machine rendering: one `key = value` per line, stable key order.
    pub fn render_machine(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(out, "meta.{k} = {v}");
        }
        for c in &self.checks {
            let _ = writeln!(
                out,
                "check.{}.status = {}",
                c.name,
                if c.passed() { "pass" } else { "fail" }
            );
            let _ = writeln!(out, "check.{}.instances = {}", c.name, c.instances);
            if let Some(w) = &c.witness {
                for (slot, value) in &w.inputs {
                    let _ = writeln!(out, "check.{}.witness.{slot} = {value}", c.name);
                }
                let _ = writeln!(out, "check.{}.witness.residual = {}", c.name, w.residual);
            }
        }
        let _ = writeln!(out, "result = {}", if self.passed() { "pass" } else { "fail" });
        out
    }
}
