#![allow(dead_code)]

pub mod oracle;

use std::path::PathBuf;

use pathsmell_core::{merge_sessions, parse_trace, TraceSession};

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn golden(name: &str) -> TraceSession {
    let path = corpus_dir().join("golden").join(name);
    let file = std::fs::File::open(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_trace(std::io::BufReader::new(file)).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// The six traces mirroring the worked examples, in reporting order.
pub const SIX_CASES: [(&str, &str, &str, usize); 6] = [
    ("calendar_setfirstweekday.trace.jsonl", "test_setfirstweekday", "setfirstweekday", 3),
    ("argparse_namespace.trace.jsonl", "test_constructor", "Namespace", 2),
    ("pathlib_splitroot.trace.jsonl", "test_splitroot", "splitroot", 3),
    ("configparser_parsing_error.trace.jsonl", "test_parsing_error", "ParsingError", 3),
    ("tarfile_is_tarfile.trace.jsonl", "test_is_tarfile_erroneous", "is_tarfile", 2),
    ("pathlib_is_absolute.trace.jsonl", "test_is_absolute", "PureWindowsPath.is_absolute", 2),
];

pub fn six_cases_merged() -> TraceSession {
    SIX_CASES.iter().map(|(file, ..)| golden(file)).reduce(|a, b| merge_sessions(&a, &b).unwrap()).unwrap()
}
