//! Findings produced by model checks, rendered as text or as one JSON record
//! per line.

use std::fmt;

use serde_json::json;

use crate::coupled::{Approach, Role};
use crate::lts::{StateId, Transition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Info,
    Warning,
    Error,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Info => "info",
            Severity::Warning => "warning",
            Severity::Error => "error",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// 1-based line and column in a model file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl Position {
    pub fn new(line: usize, column: usize) -> Self {
        Self { line, column }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// The model element a finding is about. Used to attach source positions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subject {
    Model,
    Behavior(Role),
    State(Role, StateId),
    Transition(Role, Transition),
    MappingEntry(StateId),
    Exemption(StateId),
    ApproachMember {
        approach: Approach,
        role: Role,
        state: StateId,
    },
    Property(String),
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Model => f.write_str("model"),
            Subject::Behavior(role) => write!(f, "behavior {role}"),
            Subject::State(role, s) => write!(f, "{role} state {s}"),
            Subject::Transition(role, t) => write!(f, "{role} transition {t}"),
            Subject::MappingEntry(s) => write!(f, "map {s}"),
            Subject::Exemption(s) => write!(f, "exempt {s}"),
            Subject::ApproachMember {
                approach,
                role,
                state,
            } => write!(f, "approach {approach} {role} {state}"),
            Subject::Property(name) => write!(f, "spec {name}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub severity: Severity,
    pub code: &'static str,
    pub subject: Subject,
    pub detail: String,
    pub position: Option<Position>,
}

impl Finding {
    pub fn new(severity: Severity, code: &'static str, subject: Subject, detail: impl Into<String>) -> Self {
        Self {
            severity,
            code,
            subject,
            detail: detail.into(),
            position: None,
        }
    }

    pub fn error(code: &'static str, subject: Subject, detail: impl Into<String>) -> Self {
        Self::new(Severity::Error, code, subject, detail)
    }

    pub fn warning(code: &'static str, subject: Subject, detail: impl Into<String>) -> Self {
        Self::new(Severity::Warning, code, subject, detail)
    }

    pub fn info(code: &'static str, subject: Subject, detail: impl Into<String>) -> Self {
        Self::new(Severity::Info, code, subject, detail)
    }

    pub fn at(mut self, position: Option<Position>) -> Self {
        self.position = position;
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "kind": "finding",
            "severity": self.severity.as_str(),
            "code": self.code,
            "subject": self.subject.to_string(),
            "detail": self.detail,
            "line": self.position.map(|p| p.line),
            "column": self.position.map(|p| p.column),
        })
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = self.position {
            write!(f, "{p}: ")?;
        }
        write!(f, "{}[{}] {}: {}", self.severity, self.code, self.subject, self.detail)
    }
}

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub check: &'static str,
    pub findings: Vec<Finding>,
}

impl CheckReport {
    pub fn new(check: &'static str) -> Self {
        Self {
            check,
            findings: Vec::new(),
        }
    }

    pub fn push(&mut self, finding: Finding) {
        self.findings.push(finding);
    }

    pub fn passed(&self) -> bool {
        self.findings.iter().all(|f| f.severity != Severity::Error)
    }

    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Error)
    }

    pub fn status(&self) -> &'static str {
        if self.passed() {
            "pass"
        } else {
            "fail"
        }
    }
}
