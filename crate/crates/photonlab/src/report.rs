//! Verification and scenario reports. Nothing time- or host-dependent goes
//! into a report, so identical inputs give identical bytes.

use std::fmt::Write as _;
use std::io;

use crate::checks::CheckResult;
use crate::output::{fmt_f, Table};

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub title: String,
    /// Resolved configuration, one `key = value` per line.
    pub header: String,
    /// Informational values that are not checked.
    pub notes: Vec<(String, String)>,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn new(title: &str, header: String) -> VerificationReport {
        VerificationReport { title: title.to_string(), header, notes: Vec::new(), checks: Vec::new() }
    }

    pub fn note(&mut self, key: &str, value: impl Into<String>) {
        self.notes.push((key.to_string(), value.into()));
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {}", self.title);
        let _ = writeln!(s, "version = {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(s, "\n[config]");
        s.push_str(&self.header);
        if !self.notes.is_empty() {
            let _ = writeln!(s, "\n[values]");
            for (k, v) in &self.notes {
                let _ = writeln!(s, "{k} = {v}");
            }
        }
        if !self.checks.is_empty() {
            let _ = writeln!(s, "\n[checks]");
            let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
            for c in &self.checks {
                let verdict = if c.pass { "PASS" } else { "FAIL" };
                let cmp = if c.lower_bound { ">=" } else { "<=" };
                let _ = write!(s, "{verdict}  {:width$}  {} {cmp} {}", c.name, fmt_f(c.value), fmt_f(c.tolerance));
                if let (Some(o), false) = (c.order, c.lower_bound) {
                    let _ = write!(s, "  order {}", fmt_f(o));
                }
                s.push('\n');
            }
            let passed = self.checks.iter().filter(|c| c.pass).count();
            let _ = writeln!(s, "\n{passed}/{} checks passed", self.checks.len());
        }
        s
    }

    pub fn to_csv(&self) -> io::Result<Vec<u8>> {
        let mut t = Table::new(&["name", "value", "comparison", "tolerance", "pass", "order"])?;
        for c in &self.checks {
            t.row([
                c.name.clone(),
                fmt_f(c.value),
                if c.lower_bound { ">=" } else { "<=" }.to_string(),
                fmt_f(c.tolerance),
                c.pass.to_string(),
                c.order.map(fmt_f).unwrap_or_default(),
            ])?;
        }
        t.into_bytes()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_csv_list_every_check() {
        let mut r = VerificationReport::new("t", "kind = verify\n".into());
        r.checks.push(CheckResult::at_most("a", 1e-9, 1e-6));
        r.checks.push(CheckResult::at_least("b", 1.5, 1.9));
        assert!(!r.all_pass());
        let text = r.to_text();
        assert!(text.contains("PASS  a"));
        assert!(text.contains("FAIL  b"));
        assert!(text.contains("1/2 checks passed"));
        let csv = String::from_utf8(r.to_csv().unwrap()).unwrap();
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.starts_with("name,value,comparison,tolerance,pass,order\n"));
    }
}
