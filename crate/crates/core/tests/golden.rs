mod common;

use std::fs;

use common::{corpus_dir, golden, six_cases_merged, SIX_CASES};
use pathsmell_core::{
    build_profiles, comparison_matrix, detect_eager, detect_obsessed, distinct_paths, find_obsessed, merge_sessions,
    parse_trace, parse_trace_lenient, suggest_split, validate_session, DiagnosticCode, FilterConfig, TraceError,
};

fn signatures(finding: &pathsmell_core::ObsessionFinding) -> Vec<String> {
    finding.paths.iter().map(|p| p.signature.to_string()).collect()
}

#[test]
fn calendar_profile_has_three_groups() {
    let session = golden("calendar_setfirstweekday.trace.jsonl");
    assert!(validate_session(&session).is_empty());
    let profiles = build_profiles(&session, &FilterConfig::default()).unwrap();
    let sfw = profiles.iter().find(|p| p.method.qualname == "setfirstweekday").unwrap();
    assert_eq!(distinct_paths(sfw), 3);
    assert_eq!(sfw.invocation_total, 5);
    let fw = profiles.iter().find(|p| p.method.qualname == "firstweekday").unwrap();
    assert_eq!(distinct_paths(fw), 1);
}

#[test]
fn calendar_single_finding_and_split() {
    let session = golden("calendar_setfirstweekday.trace.jsonl");
    let findings = find_obsessed(&session, &FilterConfig::default()).unwrap();
    assert_eq!(findings.len(), 1);
    let f = &findings[0];
    assert_eq!(f.method.qualname, "setfirstweekday");
    assert_eq!(f.path_count, 3);
    assert_eq!(signatures(f), ["(2)", "(2,3)", "(2,4)"]);
    let seqs: Vec<_> = f.paths.iter().map(|p| p.seqs.clone()).collect();
    assert_eq!(seqs, vec![vec![1], vec![2, 3], vec![5, 7]]);

    let plan = suggest_split(f);
    assert_eq!(plan.suggested.len(), 3);
    assert_eq!(plan.suggested[0].name, "test_calendar_lite.CalendarTestCase.test_setfirstweekday_path1");
}

#[test]
fn every_corpus_case_is_obsessed_with_expected_paths() {
    for (file, test, method, paths) in SIX_CASES {
        let findings = find_obsessed(&golden(file), &FilterConfig::default()).unwrap();
        assert_eq!(findings.len(), 1, "{file}");
        assert!(findings[0].test.name.ends_with(test), "{file}");
        assert_eq!(findings[0].method.qualname, method, "{file}");
        assert_eq!(findings[0].path_count, paths, "{file}");
    }
}

#[test]
fn eager_thresholds_on_setfirstweekday() {
    let session = golden("calendar_setfirstweekday.trace.jsonl");
    let at2 = detect_eager(&session, 2, true);
    assert_eq!(at2.len(), 1);
    let called: Vec<_> = at2[0].called_methods.iter().map(|m| m.qualname.as_str()).collect();
    assert_eq!(called, ["setfirstweekday", "firstweekday"]);
    assert!(detect_eager(&session, 4, true).is_empty());
}

#[test]
fn constructor_only_test_is_not_eager() {
    let session = golden("argparse_namespace.trace.jsonl");
    assert!(detect_eager(&session, 2, true).is_empty());
    assert!(detect_eager(&session, 1, true).is_empty());
    assert_eq!(detect_eager(&session, 1, false).len(), 1);
}

#[test]
fn six_case_comparison_matrix() {
    let rows = comparison_matrix(&six_cases_merged(), &FilterConfig::default()).unwrap();
    assert_eq!(rows.len(), 6);
    for ((_, test, ..), row) in SIX_CASES.iter().zip(&rows) {
        assert!(row.test.name.ends_with(test));
        assert!(row.obsessed);
        assert_eq!(row.eager_at_2, *test == "test_setfirstweekday", "{test}");
        assert!(!row.eager_at_4);
    }
}

#[test]
fn clean_trace_has_no_findings() {
    let session = golden("clean_bag_add.trace.jsonl");
    assert!(find_obsessed(&session, &FilterConfig::default()).unwrap().is_empty());
    let rows = comparison_matrix(&session, &FilterConfig::default()).unwrap();
    // Bag.add and Bag.size make it eager at 2 even though it is not obsessed.
    assert_eq!(rows.len(), 1);
    assert!(rows[0].eager_at_2 && !rows[0].obsessed);
}

#[test]
fn setup_phase_false_positive_is_filtered_by_default() {
    let session = golden("tarfile_is_tarfile.trace.jsonl");
    assert_eq!(find_obsessed(&session, &FilterConfig::default()).unwrap().len(), 1);
    let with_setup = find_obsessed(&session, &FilterConfig::disabled()).unwrap();
    let methods: Vec<_> = with_setup.iter().map(|f| f.method.qualname.as_str()).collect();
    assert_eq!(methods, ["is_tarfile", "open"]);
}

#[test]
fn direct_only_drops_helper_calls() {
    let session = golden("configparser_parsing_error.trace.jsonl");
    let filters = FilterConfig { direct_only: true, ..FilterConfig::default() };
    let profiles = build_profiles(&session, &filters).unwrap();
    assert!(profiles.iter().all(|p| p.method.qualname != "Error"));
    assert_eq!(detect_obsessed(&profiles, &filters).len(), 1);
}

#[test]
fn shards_merge_into_the_full_run() {
    let a = golden("shards/calendar_shard_a.trace.jsonl");
    let b = golden("shards/calendar_shard_b.trace.jsonl");
    let full = golden("calendar_setfirstweekday.trace.jsonl");
    assert_eq!(find_obsessed(&a, &FilterConfig::default()).unwrap()[0].path_count, 2);
    assert!(find_obsessed(&b, &FilterConfig::default()).unwrap().is_empty());

    let merged = merge_sessions(&a, &b).unwrap();
    let got = find_obsessed(&merged, &FilterConfig::default()).unwrap();
    let want = find_obsessed(&full, &FilterConfig::default()).unwrap();
    assert_eq!(got.len(), 1);
    assert_eq!(signatures(&got[0]), signatures(&want[0]));
    assert_eq!(got[0].paths, want[0].paths);
}

#[test]
fn forward_compatible_records_warn() {
    let text = fs::read(corpus_dir().join("compat/unknown_record.trace.jsonl")).unwrap();
    let parsed = parse_trace_lenient(text.as_slice()).unwrap();
    assert!(!parsed.has_errors());
    assert_eq!(parsed.diagnostics.len(), 1);
    assert_eq!(parsed.diagnostics[0].code, DiagnosticCode::UnknownRecord);
    assert_eq!(parsed.session.invocations.len(), 7);
}

#[test]
fn invalid_fixtures_are_rejected() {
    let expect = |name: &str| {
        let text = fs::read(corpus_dir().join("invalid").join(name)).unwrap();
        parse_trace(text.as_slice()).unwrap_err()
    };
    assert!(matches!(expect("undeclared_method.trace.jsonl"), TraceError::Reference { line: 9, .. }));
    assert!(matches!(expect("definition_line.trace.jsonl"), TraceError::Parse { line: 6, .. }));
    assert!(matches!(expect("unsupported_version.trace.jsonl"), TraceError::Version { line: 1, .. }));
    assert!(matches!(expect("truncated_record.trace.jsonl"), TraceError::Parse { line: 4, .. }));
    assert!(matches!(expect("missing_meta.trace.jsonl"), TraceError::Parse { line: 1, .. }));
}
