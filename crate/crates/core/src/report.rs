//! Report building and rendering.
//!
//! Three output formats: plain `text`, `markdown` tables, and `machine`, a
//! single JSON document carrying the full evidence (path signatures and
//! invocation seqs) so CI tooling never has to re-run the analysis.
//!
//! Machine documents look like
//! `{"schema":"pathsmell-report","schema_version":1,"report":{"kind":"<kind>","data":...}}`
//! where `kind` is one of `histogram`, `comparison`, `findings`, `plans`,
//! `detection` or `eager`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::advice::{split_totals, SplitPlan};
use crate::detect::{apply_filters, detect_eager, find_obsessed, EagerFinding, FilterConfig, ObsessionFinding};
use crate::error::ConfigError;
use crate::trace::{TestId, TestRef, TraceSession};

pub const MACHINE_SCHEMA: &str = "pathsmell-report";
pub const MACHINE_SCHEMA_VERSION: u32 = 1;

/// Number of findings per covered-path count.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    pub buckets: BTreeMap<usize, usize>,
    pub total: usize,
}

impl Histogram {
    /// Σ count × findings, i.e. how many focused tests the findings split into.
    pub fn split_total(&self) -> usize {
        self.buckets.iter().map(|(paths, n)| paths * n).sum()
    }
}

pub fn histogram(findings: &[ObsessionFinding]) -> Histogram {
    let mut buckets = BTreeMap::new();
    for f in findings {
        *buckets.entry(f.path_count).or_insert(0) += 1;
    }
    Histogram { buckets, total: findings.len() }
}

/// Verdicts of both detectors for one test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub test: TestRef,
    pub eager_at_2: bool,
    pub eager_at_4: bool,
    pub obsessed: bool,
}

/// Runs the Eager Test detector at 2 and 4 calls (constructors excluded) and
/// the obsession detector at 2 paths over the filtered session. Tests no
/// detector flags are left out.
pub fn comparison_matrix(session: &TraceSession, filters: &FilterConfig) -> Result<Vec<ComparisonRow>, ConfigError> {
    let filters = FilterConfig { min_paths: 2, ..filters.clone() };
    let filtered = apply_filters(session, &filters)?;
    let tests_of = |found: Vec<EagerFinding>| found.into_iter().map(|f| f.test.id).collect::<BTreeSet<TestId>>();
    let eager2 = tests_of(detect_eager(&filtered, 2, true));
    let eager4 = tests_of(detect_eager(&filtered, 4, true));
    let obsessed: BTreeSet<TestId> = find_obsessed(session, &filters)?.into_iter().map(|f| f.test.id).collect();

    Ok(session
        .tests
        .values()
        .filter_map(|test| {
            let row = ComparisonRow {
                test: test.clone(),
                eager_at_2: eager2.contains(&test.id),
                eager_at_4: eager4.contains(&test.id),
                obsessed: obsessed.contains(&test.id),
            };
            (row.eager_at_2 || row.eager_at_4 || row.obsessed).then_some(row)
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum Report {
    Histogram(Histogram),
    Comparison(Vec<ComparisonRow>),
    Findings(Vec<ObsessionFinding>),
    Plans(Vec<SplitPlan>),
    /// Findings together with their split plans, index-aligned.
    Detection {
        findings: Vec<ObsessionFinding>,
        plans: Vec<SplitPlan>,
    },
    Eager(Vec<EagerFinding>),
}

impl Report {
    /// Whether the report carries at least one flagged test.
    pub fn has_findings(&self) -> bool {
        match self {
            Report::Histogram(h) => h.total > 0,
            Report::Comparison(rows) => !rows.is_empty(),
            Report::Findings(f) => !f.is_empty(),
            Report::Plans(p) => !p.is_empty(),
            Report::Detection { findings, .. } => !findings.is_empty(),
            Report::Eager(f) => !f.is_empty(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Text,
    Markdown,
    Machine,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown report format `{0}` (expected text, markdown or machine)")]
pub struct UnknownFormat(pub String);

impl FromStr for ReportFormat {
    type Err = UnknownFormat;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            "machine" | "json" => Ok(ReportFormat::Machine),
            other => Err(UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct MachineDocument {
    schema: String,
    schema_version: u32,
    report: Report,
}

#[derive(Debug, Error)]
pub enum MachineReportError {
    #[error("not a report document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported report schema {schema} v{version}")]
    Schema { schema: String, version: u32 },
}

/// Reads a document produced by `render(.., ReportFormat::Machine)`.
pub fn parse_machine(text: &str) -> Result<Report, MachineReportError> {
    let doc: MachineDocument = serde_json::from_str(text)?;
    if doc.schema != MACHINE_SCHEMA || doc.schema_version != MACHINE_SCHEMA_VERSION {
        return Err(MachineReportError::Schema { schema: doc.schema, version: doc.schema_version });
    }
    Ok(doc.report)
}

pub fn render(report: &Report, format: ReportFormat) -> String {
    match format {
        ReportFormat::Machine => render_machine(report),
        ReportFormat::Text => render_text(report),
        ReportFormat::Markdown => render_markdown(report),
    }
}

fn render_machine(report: &Report) -> String {
    let doc = MachineDocument {
        schema: MACHINE_SCHEMA.to_string(),
        schema_version: MACHINE_SCHEMA_VERSION,
        report: report.clone(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("report types always serialize");
    out.push('\n');
    out
}

fn mark(flag: bool) -> &'static str {
    if flag {
        "✓"
    } else {
        "✗"
    }
}

fn seq_list(seqs: &[u64]) -> String {
    let joined = seqs.iter().map(u64::to_string).collect::<Vec<_>>().join(", ");
    if seqs.len() == 1 {
        format!("seq {joined}")
    } else {
        format!("seqs {joined}")
    }
}

fn plural(n: usize, one: &str, many: &str) -> String {
    format!("{n} {}", if n == 1 { one } else { many })
}

fn text_finding(out: &mut String, f: &ObsessionFinding) {
    let _ = writeln!(
        out,
        "{} covers {} of {} ({}:{})",
        f.test.name,
        plural(f.path_count, "path", "paths"),
        f.method.dotted_name(),
        f.method.file,
        f.method.firstline
    );
    for p in &f.paths {
        let _ = writeln!(out, "  path {}: {}", p.signature, seq_list(&p.seqs));
    }
}

fn text_plan(out: &mut String, plan: &SplitPlan, indent: &str) {
    for s in &plan.suggested {
        let _ = writeln!(out, "{indent}{}  {}  {}", s.name, s.path, seq_list(&s.invocation_seqs));
    }
}

fn render_text(report: &Report) -> String {
    let mut out = String::new();
    match report {
        Report::Histogram(h) => {
            if h.total == 0 {
                out.push_str("no findings\n");
                return out;
            }
            out.push_str("Tests Obsessed by Methods by covered paths\n");
            let _ = writeln!(out, "  total: {}", h.total);
            for (paths, n) in &h.buckets {
                let _ = writeln!(out, "  {paths} paths: {n}");
            }
            let _ = writeln!(out, "split into {} tests", h.split_total());
        }
        Report::Comparison(rows) => {
            if rows.is_empty() {
                out.push_str("no findings\n");
                return out;
            }
            let width = rows.iter().map(|r| r.test.name.len()).max().unwrap_or(0).max("test".len());
            let _ = writeln!(out, "{:width$}  eager@2  eager@4  obsessed", "test");
            for r in rows {
                let _ = writeln!(
                    out,
                    "{:width$}  {:7}  {:7}  {}",
                    r.test.name,
                    mark(r.eager_at_2),
                    mark(r.eager_at_4),
                    mark(r.obsessed)
                );
            }
        }
        Report::Findings(findings) => {
            if findings.is_empty() {
                out.push_str("no findings\n");
                return out;
            }
            findings.iter().for_each(|f| text_finding(&mut out, f));
        }
        Report::Plans(plans) => {
            if plans.is_empty() {
                out.push_str("no findings\n");
                return out;
            }
            for plan in plans {
                let _ = writeln!(out, "{} ({}):", plan.original_test.name, plan.method.dotted_name());
                text_plan(&mut out, plan, "  ");
            }
        }
        Report::Detection { findings, plans } => {
            if findings.is_empty() {
                out.push_str("no findings\n");
                return out;
            }
            for (f, plan) in findings.iter().zip(plans) {
                text_finding(&mut out, f);
                out.push_str("  split into:\n");
                text_plan(&mut out, plan, "    ");
            }
            let tests = BTreeSet::<TestId>::from_iter(findings.iter().map(|f| f.test.id)).len();
            let _ = writeln!(
                out,
                "{} in {}; split into {}",
                plural(findings.len(), "finding", "findings"),
                plural(tests, "test", "tests"),
                plural(split_totals(findings), "test", "tests")
            );
        }
        Report::Eager(findings) => {
            if findings.is_empty() {
                out.push_str("no findings\n");
                return out;
            }
            for f in findings {
                let called: Vec<String> = f.called_methods.iter().map(|m| m.dotted_name()).collect();
                let _ = writeln!(
                    out,
                    "{} directly calls {} (threshold {}): {}",
                    f.test.name,
                    plural(f.call_count, "production method", "production methods"),
                    f.threshold,
                    called.join(", ")
                );
            }
        }
    }
    out
}

fn md_findings_table(out: &mut String, findings: &[ObsessionFinding]) {
    out.push_str("| Test Method | Production Method | Covered Paths | Signatures |\n");
    out.push_str("|---|---|---:|---|\n");
    for f in findings {
        let sigs: Vec<String> = f.paths.iter().map(|p| p.signature.to_string()).collect();
        let _ = writeln!(
            out,
            "| `{}` | `{}` | {} | {} |",
            f.test.name,
            f.method.dotted_name(),
            f.path_count,
            sigs.join(" ")
        );
    }
}

fn md_plans(out: &mut String, plans: &[SplitPlan]) {
    for plan in plans {
        let _ = writeln!(out, "### `{}` → `{}`\n", plan.original_test.name, plan.method.dotted_name());
        for s in &plan.suggested {
            let _ = writeln!(out, "- `{}`: path {} ({})", s.name, s.path, seq_list(&s.invocation_seqs));
        }
        out.push('\n');
    }
}

fn render_markdown(report: &Report) -> String {
    let mut out = String::new();
    match report {
        Report::Histogram(h) => {
            out.push_str("## Tests Obsessed by Methods by covered paths\n\n");
            let mut header = String::from("| | Total |");
            let mut rule = String::from("|---|---:|");
            let mut row = format!("| #Tests Obsessed by Methods | {} |", h.total);
            for (paths, n) in &h.buckets {
                let _ = write!(header, " {paths} |");
                rule.push_str("---:|");
                let _ = write!(row, " {n} |");
            }
            let _ = writeln!(out, "{header}\n{rule}\n{row}\n");
            let _ = writeln!(
                out,
                "Numbered columns give the count of covered paths. Split into {} tests.",
                h.split_total()
            );
        }
        Report::Comparison(rows) => {
            out.push_str("## Eager Test vs. Test Obsessed by Method\n\n");
            out.push_str("| Test Method | Eager Test (2 calls) | Eager Test (4 calls) | Test Obsessed by Method |\n");
            out.push_str("|---|:-:|:-:|:-:|\n");
            for r in rows {
                let _ = writeln!(
                    out,
                    "| `{}` | {} | {} | {} |",
                    r.test.name,
                    mark(r.eager_at_2),
                    mark(r.eager_at_4),
                    mark(r.obsessed)
                );
            }
        }
        Report::Findings(findings) => {
            out.push_str("## Tests Obsessed by Methods\n\n");
            if findings.is_empty() {
                out.push_str("No findings.\n");
            } else {
                md_findings_table(&mut out, findings);
            }
        }
        Report::Plans(plans) => {
            out.push_str("## Split plans\n\n");
            if plans.is_empty() {
                out.push_str("No findings.\n");
            }
            md_plans(&mut out, plans);
        }
        Report::Detection { findings, plans } => {
            out.push_str("## Tests Obsessed by Methods\n\n");
            if findings.is_empty() {
                out.push_str("No findings.\n");
                return out;
            }
            md_findings_table(&mut out, findings);
            let _ = writeln!(out, "\nSplit into {} focused tests.\n", split_totals(findings));
            out.push_str("## Split plans\n\n");
            md_plans(&mut out, plans);
        }
        Report::Eager(findings) => {
            out.push_str("## Eager Tests (runtime approximation)\n\n");
            if findings.is_empty() {
                out.push_str("No findings.\n");
                return out;
            }
            out.push_str("| Test Method | Direct production calls | Threshold | Methods |\n");
            out.push_str("|---|---:|---:|---|\n");
            for f in findings {
                let called: Vec<String> = f.called_methods.iter().map(|m| format!("`{}`", m.dotted_name())).collect();
                let _ =
                    writeln!(out, "| `{}` | {} | {} | {} |", f.test.name, f.call_count, f.threshold, called.join(", "));
            }
        }
    }
    out
}
