use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{InvocationRecord, MethodId, MethodIdentity, MethodRef, TestId, TestRef, TraceSession, SUPPORTED_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagnosticCode {
    /// Not a JSON object, wrong field type, or missing required field.
    Syntax,
    MissingMeta,
    DuplicateMeta,
    UnsupportedVersion,
    UnknownRecord,
    DuplicateId,
    DuplicateIdentity,
    UnresolvedReference,
    InvalidField,
    SeqOrder,
}

/// Where a diagnostic points: a line of a trace file, or a record of an
/// in-memory session.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "at", content = "value", rename_all = "snake_case")]
pub enum Locus {
    Line(usize),
    Meta,
    Method(MethodId),
    Test(TestId),
    /// Index into `TraceSession::invocations`.
    Invocation(usize),
}

impl fmt::Display for Locus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Locus::Line(n) => write!(f, "line {n}"),
            Locus::Meta => f.write_str("meta record"),
            Locus::Method(id) => write!(f, "method {}", id.0),
            Locus::Test(id) => write!(f, "test {}", id.0),
            Locus::Invocation(i) => write!(f, "invocation #{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: DiagnosticCode,
    pub locus: Locus,
    pub message: String,
}

impl Diagnostic {
    pub fn error(code: DiagnosticCode, locus: Locus, message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Error, code, locus, message: message.into() }
    }

    pub fn warning(code: DiagnosticCode, locus: Locus, message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Warning, code, locus, message: message.into() }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{level}: {}: {}", self.locus, self.message)
    }
}

pub(super) type Problem = (DiagnosticCode, String);

pub(super) fn check_version(version: u32) -> Option<Problem> {
    (version != SUPPORTED_VERSION).then(|| {
        (
            DiagnosticCode::UnsupportedVersion,
            format!("unsupported trace version {version} (supported: {SUPPORTED_VERSION})"),
        )
    })
}

pub(super) fn check_method(method: &MethodRef) -> Vec<Problem> {
    let mut out = Vec::new();
    if method.firstline < 1 {
        out.push((DiagnosticCode::InvalidField, format!("method {} has firstline 0", method.id.0)));
    }
    out
}

pub(super) fn check_test(test: &TestRef) -> Vec<Problem> {
    let mut out = Vec::new();
    if test.name.trim().is_empty() {
        out.push((DiagnosticCode::InvalidField, format!("test {} has an empty name", test.id.0)));
    }
    out
}

/// Field-level checks that need no context beyond the record itself.
pub(super) fn check_invocation(inv: &InvocationRecord) -> Vec<Problem> {
    let mut out = Vec::new();
    if inv.lines.is_empty() {
        out.push((DiagnosticCode::InvalidField, "invocation has no executed lines".to_string()));
    } else if let Some(bad) = inv.lines.iter().find(|&&l| l < 2) {
        out.push((
            DiagnosticCode::InvalidField,
            format!("executed line {bad} is out of range; method-relative lines start at 2"),
        ));
    }
    if inv.depth < 1 {
        out.push((DiagnosticCode::InvalidField, "invocation depth must be at least 1".to_string()));
    }
    if inv.seq < 1 {
        out.push((DiagnosticCode::InvalidField, "invocation seq must be at least 1".to_string()));
    }
    out
}

/// Tracks cross-record invariants while records are visited in order.
#[derive(Default)]
pub(super) struct Tracker {
    identities: HashMap<MethodIdentity, MethodId>,
    last_seq: HashMap<TestId, u64>,
}

impl Tracker {
    pub(super) fn method_identity(&mut self, method: &MethodRef) -> Option<Problem> {
        match self.identities.get(&method.identity()) {
            Some(other) if *other != method.id => Some((
                DiagnosticCode::DuplicateIdentity,
                format!("method {} duplicates the identity of method {}: {}", method.id.0, other.0, method.identity()),
            )),
            Some(_) => None,
            None => {
                self.identities.insert(method.identity(), method.id);
                None
            }
        }
    }

    pub(super) fn seq(&mut self, inv: &InvocationRecord) -> Option<Problem> {
        let problem = match self.last_seq.get(&inv.test) {
            Some(&prev) if inv.seq <= prev => Some((
                DiagnosticCode::SeqOrder,
                format!("seq {} of test {} does not follow seq {prev}", inv.seq, inv.test.0),
            )),
            _ => None,
        };
        self.last_seq.insert(inv.test, inv.seq);
        problem
    }
}

pub(super) fn check_references(
    inv: &InvocationRecord,
    has_test: impl Fn(TestId) -> bool,
    has_method: impl Fn(MethodId) -> bool,
) -> Vec<Problem> {
    let mut out = Vec::new();
    if !has_test(inv.test) {
        out.push((DiagnosticCode::UnresolvedReference, format!("undeclared test id {}", inv.test.0)));
    }
    if !has_method(inv.method) {
        out.push((DiagnosticCode::UnresolvedReference, format!("undeclared method id {}", inv.method.0)));
    }
    out
}

/// Checks every session invariant. Returns an empty list iff the session is
/// valid; otherwise one diagnostic per violation.
pub fn validate_session(session: &TraceSession) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut push = |locus: Locus, (code, message): Problem| out.push(Diagnostic::error(code, locus, message));

    if let Some(p) = check_version(session.version) {
        push(Locus::Meta, p);
    }

    let mut tracker = Tracker::default();
    for (key, method) in &session.methods {
        let locus = Locus::Method(*key);
        if *key != method.id {
            push(
                locus,
                (DiagnosticCode::DuplicateId, format!("method stored under id {} carries id {}", key.0, method.id.0)),
            );
        }
        check_method(method).into_iter().for_each(|p| push(locus, p));
        if let Some(p) = tracker.method_identity(method) {
            push(locus, p);
        }
    }

    for (key, test) in &session.tests {
        let locus = Locus::Test(*key);
        if *key != test.id {
            push(
                locus,
                (DiagnosticCode::DuplicateId, format!("test stored under id {} carries id {}", key.0, test.id.0)),
            );
        }
        check_test(test).into_iter().for_each(|p| push(locus, p));
    }

    for (idx, inv) in session.invocations.iter().enumerate() {
        let locus = Locus::Invocation(idx);
        check_references(inv, |t| session.tests.contains_key(&t), |m| session.methods.contains_key(&m))
            .into_iter()
            .for_each(|p| push(locus, p));
        check_invocation(inv).into_iter().for_each(|p| push(locus, p));
        if let Some(p) = tracker.seq(inv) {
            push(locus, p);
        }
    }

    out
}
