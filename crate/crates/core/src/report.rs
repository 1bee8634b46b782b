//! Check reports: trees of named results where every failure carries a witness.

use std::fmt::{self, Write as _};

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    /// Hypotheses of the checked claim do not hold on this instance.
    NotApplicable,
    /// A computed fact, not a claim.
    Info,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::NotApplicable => "N/A",
            Outcome::Info => "INFO",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<Check>,
}

impl Check {
    fn leaf(name: impl Into<String>, outcome: Outcome) -> Self {
        Check {
            name: name.into(),
            outcome,
            witness: None,
            detail: None,
            children: Vec::new(),
        }
    }

    pub fn pass(name: impl Into<String>) -> Self {
        Self::leaf(name, Outcome::Pass)
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        Check {
            witness: Some(witness.into()),
            ..Self::leaf(name, Outcome::Fail)
        }
    }

    /// Pass when no counterexample was found, otherwise fail with it.
    pub fn from_witness(name: impl Into<String>, counterexample: Option<String>) -> Self {
        match counterexample {
            None => Self::pass(name),
            Some(w) => Self::fail(name, w),
        }
    }

    pub fn not_applicable(name: impl Into<String>, why: impl Into<String>) -> Self {
        Self::leaf(name, Outcome::NotApplicable).with_detail(why)
    }

    pub fn info(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Self::leaf(name, Outcome::Info).with_detail(detail)
    }

    /// A group of checks; fails iff some child fails.
    pub fn section(name: impl Into<String>, children: Vec<Check>) -> Self {
        let outcome = if children.iter().any(|c| !c.passed()) {
            Outcome::Fail
        } else if children
            .iter()
            .any(|c| matches!(c.outcome, Outcome::Pass | Outcome::Fail))
            || children.is_empty()
        {
            Outcome::Pass
        } else {
            Outcome::Info
        };
        Check {
            children,
            ..Self::leaf(name, outcome)
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.outcome != Outcome::Fail && self.children.iter().all(Check::passed)
    }

    /// Failing leaves, with their `/`-joined paths.
    pub fn failures(&self) -> Vec<(String, &Check)> {
        let mut out = Vec::new();
        self.collect_failures(String::new(), &mut out);
        out
    }

    fn collect_failures<'a>(&'a self, prefix: String, out: &mut Vec<(String, &'a Check)>) {
        let path = if prefix.is_empty() {
            self.name.clone()
        } else {
            format!("{prefix}/{}", self.name)
        };
        if self.children.is_empty() {
            if self.outcome == Outcome::Fail {
                out.push((path, self));
            }
        } else {
            for c in &self.children {
                c.collect_failures(path.clone(), out);
            }
        }
    }

    /// Finds a direct or nested child by name.
    pub fn find(&self, name: &str) -> Option<&Check> {
        if self.name == name {
            return Some(self);
        }
        self.children.iter().find_map(|c| c.find(name))
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        out
    }

    fn render_into(&self, out: &mut String, depth: usize) {
        let pad = "  ".repeat(depth);
        let _ = write!(out, "{pad}[{}] {}", self.outcome, self.name);
        if let Some(w) = &self.witness {
            let _ = write!(out, " -- witness: {w}");
        }
        if let Some(d) = &self.detail {
            let _ = write!(out, " ({d})");
        }
        out.push('\n');
        for c in &self.children {
            c.render_into(out, depth + 1);
        }
    }
}
