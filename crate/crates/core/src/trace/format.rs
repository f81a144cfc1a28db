//! `.trace.jsonl` reader and writer.
//!
//! One JSON object per line, discriminated by its `record` field:
//!
//! ```text
//! {"record":"meta","version":1,"session":"<text>"}
//! {"record":"method","id":1,"module":"m","qualname":"f","file":"m.py","firstline":10,"kind":"function"}
//! {"record":"test","id":1,"name":"suite.Class.test_x"}
//! {"record":"invocation","test":1,"method":1,"seq":1,"phase":"call","depth":1,"lines":[2,3],"thread":"MainThread"}
//! ```
//!
//! The meta record comes first and declarations precede use. Unknown record
//! types are skipped with a warning; unknown fields are ignored.

use std::collections::HashSet;
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::validate::{check_invocation, check_method, check_references, check_test, check_version, Tracker};
use super::{Diagnostic, DiagnosticCode, InvocationRecord, Locus, MethodRef, TestRef, TraceSession};
use crate::error::TraceError;

const KNOWN_RECORDS: [&str; 4] = ["meta", "method", "test", "invocation"];

#[derive(Serialize)]
#[serde(tag = "record", rename_all = "lowercase")]
enum RecordOut<'a> {
    Meta { version: u32, session: &'a str },
    Method(&'a MethodRef),
    Test(&'a TestRef),
    Invocation(&'a InvocationRecord),
}

#[derive(Deserialize)]
#[serde(tag = "record", rename_all = "lowercase")]
enum RecordIn {
    Meta { version: u32, session: String },
    Method(MethodRef),
    Test(TestRef),
    Invocation(InvocationRecord),
}

/// Result of a lenient parse: every valid record that could be placed, plus
/// one diagnostic per problem found, each located by line number.
#[derive(Debug, Clone, PartialEq)]
pub struct Parsed {
    pub session: TraceSession,
    pub diagnostics: Vec<Diagnostic>,
}

impl Parsed {
    pub fn has_errors(&self) -> bool {
        self.diagnostics.iter().any(Diagnostic::is_error)
    }

    /// Fails on the first error diagnostic; otherwise yields the session and
    /// any warnings.
    pub fn into_result(self) -> Result<(TraceSession, Vec<Diagnostic>), TraceError> {
        if let Some(first) = self.diagnostics.iter().find(|d| d.is_error()) {
            return Err(TraceError::from_diagnostic(first));
        }
        Ok((self.session, self.diagnostics))
    }
}

/// Strict parse. Rejects any stream that [`parse_trace_lenient`] reports an
/// error for; warnings (unknown record types) are dropped.
pub fn parse_trace<R: BufRead>(reader: R) -> Result<TraceSession, TraceError> {
    parse_trace_lenient(reader)?.into_result().map(|(session, _)| session)
}

pub fn parse_trace_str(text: &str) -> Result<TraceSession, TraceError> {
    parse_trace(text.as_bytes())
}

/// Reads a whole trace, collecting diagnostics instead of stopping at the
/// first problem. Only I/O failures are returned as `Err`.
pub fn parse_trace_lenient<R: BufRead>(mut reader: R) -> io::Result<Parsed> {
    let mut state = ParseState::default();
    let mut buf = Vec::new();
    let mut lineno = 0usize;
    loop {
        buf.clear();
        if reader.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        lineno += 1;
        match std::str::from_utf8(&buf) {
            Ok(text) => state.line(lineno, text),
            Err(e) => state.error(lineno, DiagnosticCode::Syntax, format!("invalid UTF-8: {e}")),
        }
    }
    if !state.saw_meta {
        state.error(lineno.max(1), DiagnosticCode::MissingMeta, "trace has no meta record".to_string());
    }
    Ok(Parsed { session: state.session, diagnostics: state.diagnostics })
}

#[derive(Default)]
struct ParseState {
    session: TraceSession,
    diagnostics: Vec<Diagnostic>,
    tracker: Tracker,
    saw_meta: bool,
    saw_record: bool,
    test_ids_seen: HashSet<u64>,
    method_ids_seen: HashSet<u64>,
}

impl ParseState {
    fn error(&mut self, line: usize, code: DiagnosticCode, message: String) {
        self.diagnostics.push(Diagnostic::error(code, Locus::Line(line), message));
    }

    fn report(&mut self, line: usize, problems: Vec<(DiagnosticCode, String)>) -> bool {
        let clean = problems.is_empty();
        for (code, message) in problems {
            self.error(line, code, message);
        }
        clean
    }

    fn line(&mut self, lineno: usize, text: &str) {
        let text = text.trim();
        if text.is_empty() {
            return;
        }
        let value: Value = match serde_json::from_str(text) {
            Ok(v) => v,
            Err(e) => return self.error(lineno, DiagnosticCode::Syntax, format!("malformed record: {e}")),
        };
        let kind = match value.get("record").and_then(Value::as_str) {
            Some(k) => k.to_string(),
            None => {
                return self.error(lineno, DiagnosticCode::Syntax, "record has no string `record` field".to_string())
            }
        };
        if !KNOWN_RECORDS.contains(&kind.as_str()) {
            self.diagnostics.push(Diagnostic::warning(
                DiagnosticCode::UnknownRecord,
                Locus::Line(lineno),
                format!("skipping unknown record type `{kind}`"),
            ));
            return;
        }
        let record: RecordIn = match serde_json::from_value(value) {
            Ok(r) => r,
            Err(e) => return self.error(lineno, DiagnosticCode::Syntax, format!("malformed {kind} record: {e}")),
        };

        let first = !self.saw_record;
        self.saw_record = true;
        if first && !matches!(record, RecordIn::Meta { .. }) {
            self.error(lineno, DiagnosticCode::MissingMeta, "first record must be meta".to_string());
        }

        match record {
            RecordIn::Meta { version, session } => {
                if self.saw_meta {
                    return self.error(lineno, DiagnosticCode::DuplicateMeta, "duplicate meta record".to_string());
                }
                if !first {
                    self.error(lineno, DiagnosticCode::MissingMeta, "meta record must come first".to_string());
                }
                self.saw_meta = true;
                if let Some((code, message)) = check_version(version) {
                    self.error(lineno, code, message);
                }
                self.session.version = version;
                self.session.session_id = session;
            }
            RecordIn::Method(method) => {
                if !self.method_ids_seen.insert(method.id.0) {
                    return self.error(
                        lineno,
                        DiagnosticCode::DuplicateId,
                        format!("duplicate method id {}", method.id.0),
                    );
                }
                let mut problems = check_method(&method);
                problems.extend(self.tracker.method_identity(&method));
                if self.report(lineno, problems) {
                    self.session.methods.insert(method.id, method);
                }
            }
            RecordIn::Test(test) => {
                if !self.test_ids_seen.insert(test.id.0) {
                    return self.error(lineno, DiagnosticCode::DuplicateId, format!("duplicate test id {}", test.id.0));
                }
                if self.report(lineno, check_test(&test)) {
                    self.session.tests.insert(test.id, test);
                }
            }
            RecordIn::Invocation(inv) => {
                let session = &self.session;
                let mut problems =
                    check_references(&inv, |t| session.tests.contains_key(&t), |m| session.methods.contains_key(&m));
                problems.extend(check_invocation(&inv));
                problems.extend(self.tracker.seq(&inv));
                if self.report(lineno, problems) {
                    self.session.invocations.push(inv);
                }
            }
        }
    }
}

/// Writes the canonical form: meta, methods by id, tests by id, then
/// invocations in their original order.
pub fn write_trace<W: Write>(session: &TraceSession, mut out: W) -> io::Result<()> {
    let mut emit = |record: RecordOut<'_>| -> io::Result<()> {
        serde_json::to_writer(&mut out, &record)?;
        out.write_all(b"\n")
    };
    emit(RecordOut::Meta { version: session.version, session: &session.session_id })?;
    for method in session.methods.values() {
        emit(RecordOut::Method(method))?;
    }
    for test in session.tests.values() {
        emit(RecordOut::Test(test))?;
    }
    for inv in &session.invocations {
        emit(RecordOut::Invocation(inv))?;
    }
    Ok(())
}

pub fn write_trace_string(session: &TraceSession) -> String {
    let mut buf = Vec::new();
    write_trace(session, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}
