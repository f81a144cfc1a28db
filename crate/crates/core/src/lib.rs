//! Detection of *Tests Obsessed by Methods*: tests that cover several
//! execution paths of a single production method, found from per-test
//! runtime traces.
//!
//! The pipeline is parse → filter → profile → detect → advise → render:
//!
//! ```
//! use pathsmell_core::{find_obsessed, parse_trace_str, suggest_split, FilterConfig};
//!
//! let trace = r#"{"record":"meta","version":1,"session":"doc"}
//! {"record":"method","id":1,"module":"calendar","qualname":"setfirstweekday","file":"calendar.py","firstline":40,"kind":"function"}
//! {"record":"test","id":1,"name":"CalendarTestCase.test_setfirstweekday"}
//! {"record":"invocation","test":1,"method":1,"seq":1,"phase":"call","depth":1,"lines":[2],"thread":"MainThread"}
//! {"record":"invocation","test":1,"method":1,"seq":2,"phase":"call","depth":1,"lines":[2,3],"thread":"MainThread"}
//! "#;
//! let session = parse_trace_str(trace).unwrap();
//! let findings = find_obsessed(&session, &FilterConfig::default()).unwrap();
//! assert_eq!(findings[0].path_count, 2);
//! assert_eq!(suggest_split(&findings[0]).suggested.len(), 2);
//! ```

pub mod advice;
pub mod detect;
pub mod error;
pub mod path;
pub mod report;
#[cfg(feature = "synth")]
pub mod synth;
pub mod trace;

pub use advice::{split_totals, suggest_split, SplitPlan, SuggestedTest};
pub use detect::{
    apply_filters, detect_eager, detect_obsessed, find_obsessed, CoveredPath, EagerFinding, FilterConfig,
    ObsessionFinding, DEFAULT_EAGER_THRESHOLD, DEFAULT_MIN_PATHS,
};
pub use error::{ConfigError, MergeError, TraceError};
pub use path::{build_profiles, distinct_paths, path_signature, profiles, MethodCoverageProfile, PathSignature};
pub use report::{
    comparison_matrix, histogram, parse_machine, render, ComparisonRow, Histogram, Report, ReportFormat, UnknownFormat,
};
pub use trace::{
    merge_sessions, parse_trace, parse_trace_lenient, parse_trace_str, validate_session, write_trace,
    write_trace_string, Diagnostic, DiagnosticCode, InvocationRecord, Locus, MethodId, MethodKind, MethodRef, Parsed,
    Phase, Severity, TestId, TestRef, TraceSession,
};
