//! Per-test runtime trace data model.
//!
//! A [`TraceSession`] holds the production methods and tests observed during
//! one instrumented test run, plus one [`InvocationRecord`] per production
//! method call. Executed lines are stored relative to the method definition:
//! the `def` line is line 1 and is never recorded, so the first body line is 2.

mod format;
mod merge;
mod validate;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use format::{parse_trace, parse_trace_lenient, parse_trace_str, write_trace, write_trace_string, Parsed};
pub use merge::merge_sessions;
pub use validate::{validate_session, Diagnostic, DiagnosticCode, Locus, Severity};

/// The only trace format version this crate reads and writes.
pub const SUPPORTED_VERSION: u32 = 1;

/// Session-local identifier of a production method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MethodId(pub u64);

/// Session-local identifier of a test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TestId(pub u64);

impl fmt::Display for MethodId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}", self.0)
    }
}

impl fmt::Display for TestId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodKind {
    Function,
    Constructor,
}

/// Test lifecycle stage an invocation happened in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Setup,
    Call,
    Teardown,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Setup => "setup",
            Phase::Call => "call",
            Phase::Teardown => "teardown",
        }
    }
}

/// A production method observed during the run.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MethodRef {
    pub id: MethodId,
    /// Dotted module name.
    pub module: String,
    /// Qualified name within the module, e.g. `Calendar.setfirstweekday`.
    pub qualname: String,
    pub file: String,
    /// Absolute 1-based line of the definition in `file`.
    pub firstline: u32,
    pub kind: MethodKind,
}

/// Cross-session identity of a method. Raw ids are only meaningful inside
/// one session.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MethodIdentity {
    pub module: String,
    pub qualname: String,
    pub file: String,
    pub firstline: u32,
}

impl fmt::Display for MethodIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{} ({}:{})", self.module, self.qualname, self.file, self.firstline)
    }
}

impl MethodRef {
    pub fn identity(&self) -> MethodIdentity {
        MethodIdentity {
            module: self.module.clone(),
            qualname: self.qualname.clone(),
            file: self.file.clone(),
            firstline: self.firstline,
        }
    }

    /// `module.qualname`, the name shown in reports and matched by globs.
    pub fn dotted_name(&self) -> String {
        format!("{}.{}", self.module, self.qualname)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TestRef {
    pub id: TestId,
    /// Fully qualified test identifier as reported by the runner.
    pub name: String,
}

/// One call of a production method made while a test was running.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InvocationRecord {
    pub test: TestId,
    pub method: MethodId,
    /// Per-test invocation counter, strictly increasing in file order.
    pub seq: u64,
    pub phase: Phase,
    /// Frames between the test body and the method; 1 = called directly.
    pub depth: u32,
    /// Method-relative executed lines, in execution order (may repeat).
    pub lines: Vec<u32>,
    pub thread: String,
}

/// A fully parsed run.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TraceSession {
    pub version: u32,
    pub session_id: String,
    pub methods: BTreeMap<MethodId, MethodRef>,
    pub tests: BTreeMap<TestId, TestRef>,
    pub invocations: Vec<InvocationRecord>,
}

impl TraceSession {
    pub fn new(session_id: impl Into<String>) -> Self {
        TraceSession { version: SUPPORTED_VERSION, session_id: session_id.into(), ..Default::default() }
    }

    pub fn method(&self, id: MethodId) -> Option<&MethodRef> {
        self.methods.get(&id)
    }

    pub fn test(&self, id: TestId) -> Option<&TestRef> {
        self.tests.get(&id)
    }

    /// Copy of the declarations with a replacement invocation list.
    pub fn with_invocations(&self, invocations: Vec<InvocationRecord>) -> TraceSession {
        TraceSession {
            version: self.version,
            session_id: self.session_id.clone(),
            methods: self.methods.clone(),
            tests: self.tests.clone(),
            invocations,
        }
    }
}
