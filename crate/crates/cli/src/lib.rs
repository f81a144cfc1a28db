//! `pathsmell` command-line driver: parse → filter → profile → detect →
//! advise → render.
//!
//! Exit codes: 0 ran with no findings, 1 ran with at least one finding,
//! 2 usage or configuration error, 3 trace parse/validation error.

use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use pathsmell_core::{
    apply_filters, comparison_matrix, detect_eager, find_obsessed, histogram, merge_sessions, parse_trace_lenient,
    render, suggest_split, ConfigError, FilterConfig, Report, ReportFormat, TraceSession,
};

pub const EXIT_CLEAN: i32 = 0;
pub const EXIT_FINDINGS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_TRACE: i32 = 3;

/// Environment variable naming the default output format; `--format` wins.
pub const FORMAT_ENV: &str = "PATHSMELL_FORMAT";

#[derive(Parser, Debug)]
#[command(name = "pathsmell", version, about = "Find tests that cover several paths of one production method")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report Tests Obsessed by Methods with one-test-per-path split plans
    Detect(AnalysisArgs),
    /// Report Eager Tests: direct calls to many distinct production methods
    Eager {
        #[command(flatten)]
        args: AnalysisArgs,
        /// Count constructors as production calls
        #[arg(long)]
        include_constructors: bool,
    },
    /// Compare Eager Test (2 and 4 calls) with Test Obsessed by Method per test
    Compare(AnalysisArgs),
    /// Histogram of findings by number of covered paths
    Report(AnalysisArgs),
    /// Check trace files and print every diagnostic
    Validate {
        #[arg(required = true, value_name = "TRACE")]
        traces: Vec<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct AnalysisArgs {
    /// Trace files (.trace.jsonl); several files are merged before analysis
    #[arg(required = true, value_name = "TRACE")]
    traces: Vec<PathBuf>,
    /// Distinct paths of one method needed to flag a test
    #[arg(long, default_value_t = pathsmell_core::DEFAULT_MIN_PATHS, value_name = "N")]
    min_paths: usize,
    /// Distinct directly-called production methods needed to flag an Eager Test
    #[arg(long, default_value_t = pathsmell_core::DEFAULT_EAGER_THRESHOLD, value_name = "N")]
    eager_threshold: usize,
    /// Only analyse methods whose module or module.qualname matches (repeatable)
    #[arg(long = "include", value_name = "GLOB")]
    include: Vec<String>,
    /// Skip methods whose module or module.qualname matches (repeatable)
    #[arg(long = "exclude", value_name = "GLOB")]
    exclude: Vec<String>,
    /// Ignore calls made during test setup and teardown (default)
    #[arg(long, overrides_with = "include_setup")]
    exclude_setup: bool,
    /// Also analyse calls made during test setup and teardown
    #[arg(long, overrides_with = "exclude_setup")]
    include_setup: bool,
    /// Only count calls made directly from the test body
    #[arg(long)]
    direct_only: bool,
    /// text, markdown or machine [default: text, or $PATHSMELL_FORMAT]
    #[arg(long, value_name = "FORMAT")]
    format: Option<String>,
    /// Write the report here instead of standard output
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

impl AnalysisArgs {
    fn filters(&self) -> FilterConfig {
        FilterConfig {
            direct_only: self.direct_only,
            exclude_setup: !self.include_setup,
            include_globs: self.include.clone(),
            exclude_globs: self.exclude.clone(),
            min_paths: self.min_paths,
        }
    }

    fn format(&self, env_format: Option<&str>) -> Result<ReportFormat, String> {
        match self.format.as_deref().or(env_format) {
            None => Ok(ReportFormat::default()),
            Some(s) => s.parse().map_err(|e| format!("{e}")),
        }
    }
}

/// Failure that ends the run with a specific exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }

    fn trace(message: impl Into<String>) -> Self {
        Failure { code: EXIT_TRACE, message: message.into() }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::usage(e.to_string())
    }
}

/// Entry point used by the binary: reads `PATHSMELL_FORMAT` and writes to the
/// process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let env_format = std::env::var(FORMAT_ENV).ok();
    run_with(argv, env_format.as_deref(), &mut io::stdout().lock(), &mut io::stderr().lock())
}

pub fn run_with<I, T>(argv: I, env_format: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_CLEAN };
            let rendered = e.render().to_string();
            let _ =
                if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, env_format, out, err) {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(err, "pathsmell: {}", failure.message);
            failure.code
        }
    }
}

fn execute(
    command: Command,
    env_format: Option<&str>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let (args, report) = match command {
        Command::Validate { traces } => return validate(&traces, out),
        Command::Detect(args) => {
            let session = prepare(&args, env_format, err)?;
            let findings = find_obsessed(&session, &args.filters())?;
            let plans = findings.iter().map(suggest_split).collect();
            (args, Report::Detection { findings, plans })
        }
        Command::Eager { args, include_constructors } => {
            if args.eager_threshold < 1 {
                return Err(ConfigError::EagerThreshold(args.eager_threshold).into());
            }
            let session = prepare(&args, env_format, err)?;
            let filtered = apply_filters(&session, &args.filters())?;
            let found = detect_eager(&filtered, args.eager_threshold, !include_constructors);
            (args, Report::Eager(found))
        }
        Command::Compare(args) => {
            let session = prepare(&args, env_format, err)?;
            let rows = comparison_matrix(&session, &args.filters())?;
            (args, Report::Comparison(rows))
        }
        Command::Report(args) => {
            let session = prepare(&args, env_format, err)?;
            let findings = find_obsessed(&session, &args.filters())?;
            (args, Report::Histogram(histogram(&findings)))
        }
    };

    let format = args.format(env_format).map_err(Failure::usage)?;
    let rendered = render(&report, format);
    match &args.output {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?,
        None => out.write_all(rendered.as_bytes()).map_err(|e| Failure::usage(format!("cannot write report: {e}")))?,
    }
    Ok(if report.has_findings() { EXIT_FINDINGS } else { EXIT_CLEAN })
}

/// Validates configuration, then loads and merges every trace.
fn prepare(args: &AnalysisArgs, env_format: Option<&str>, err: &mut dyn Write) -> Result<TraceSession, Failure> {
    args.filters().validate()?;
    args.format(env_format).map_err(Failure::usage)?;
    load_merged(&args.traces, err)
}

/// Parses each trace and merges them. Paths are visited in sorted order so
/// the result does not depend on argument order.
fn load_merged(paths: &[PathBuf], err: &mut dyn Write) -> Result<TraceSession, Failure> {
    let mut sorted: Vec<&PathBuf> = paths.iter().collect();
    sorted.sort();
    let mut merged: Option<TraceSession> = None;
    for path in sorted {
        let session = load_one(path, err)?;
        merged = Some(match merged {
            None => session,
            Some(acc) => {
                merge_sessions(&acc, &session).map_err(|e| Failure::trace(format!("{}: {e}", path.display())))?
            }
        });
    }
    merged.ok_or_else(|| Failure::usage("no trace files given"))
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path).map(BufReader::new).map_err(|e| Failure::usage(format!("cannot open {}: {e}", path.display())))
}

fn load_one(path: &Path, err: &mut dyn Write) -> Result<TraceSession, Failure> {
    let parsed = parse_trace_lenient(open(path)?).map_err(|e| Failure::trace(format!("{}: {e}", path.display())))?;
    for diag in parsed.diagnostics.iter().filter(|d| !d.is_error()) {
        let _ = writeln!(err, "{}: {diag}", path.display());
    }
    parsed.into_result().map(|(session, _)| session).map_err(|e| Failure::trace(format!("{}: {e}", path.display())))
}

fn validate(paths: &[PathBuf], out: &mut dyn Write) -> Result<i32, Failure> {
    let mut failed = false;
    for path in paths {
        let parsed =
            parse_trace_lenient(open(path)?).map_err(|e| Failure::trace(format!("{}: {e}", path.display())))?;
        for diag in &parsed.diagnostics {
            let _ = writeln!(out, "{}: {diag}", path.display());
        }
        if parsed.has_errors() {
            failed = true;
        } else {
            let s = &parsed.session;
            let _ = writeln!(
                out,
                "{}: ok ({} methods, {} tests, {} invocations)",
                path.display(),
                s.methods.len(),
                s.tests.len(),
                s.invocations.len()
            );
        }
    }
    Ok(if failed { EXIT_TRACE } else { EXIT_CLEAN })
}
