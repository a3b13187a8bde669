//! Structured `key: value` reports. Everything except `elapsed_ms` is a
//! pure function of the inputs and the seed.

use std::fmt::Write as _;

use crate::params::Params;
use crate::verdict::join_ids;
use crate::verdict::{Outcome, Verdict};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    entries: Vec<(String, String)>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report::default();
        r.push("command", command);
        r
    }

    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn add_verdict(&mut self, v: &Verdict) {
        self.push("verdict", v.outcome.label());
        match &v.outcome {
            Outcome::Stable => self.push("certificate", "none"),
            Outcome::Unstable(c) => self.push("certificate", c),
            Outcome::Exists(p) => {
                self.push("certificate", "none");
                let parts: Vec<String> = p
                    .coalitions()
                    .iter()
                    .map(|c| format!("{{{}}}", join_ids(c)))
                    .collect();
                self.push("partition", parts.join(" "));
            }
            Outcome::NotExists(why) => {
                self.push("certificate", "none");
                self.push("reason", why);
            }
        }
        self.push("algorithm", &v.algorithm);
        for (k, val) in &v.notes {
            self.push(&format!("note.{k}"), val);
        }
    }

    pub fn add_params(&mut self, p: &Params) {
        let kappa = p.kappa.map_or_else(|| "-".to_string(), |k| k.to_string());
        self.push(
            "params",
            format!("delta={} kappa={} fas={}", p.delta, kappa, p.fas),
        );
    }

    /// One `key: value` line per entry, then `elapsed_ms` when given.
    pub fn render(&self, elapsed_ms: Option<u128>) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{k}: {v}");
        }
        if let Some(ms) = elapsed_ms {
            let _ = writeln!(out, "elapsed_ms: {ms}");
        }
        out
    }
}

/// Drops the timing line so two reports can be compared byte for byte.
pub fn strip_timing(report: &str) -> String {
    report
        .lines()
        .filter(|l| !l.starts_with("elapsed_ms:"))
        .map(|l| format!("{l}\n"))
        .collect()
}
