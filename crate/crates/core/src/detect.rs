//! Smell detectors.
//!
//! [`detect_obsessed`] flags a test that covers `min_paths` or more distinct
//! paths of one production method. [`detect_eager`] is a runtime
//! approximation of the classic Eager Test rule: it counts the distinct
//! production methods a test body calls directly, where static tools count
//! call sites.

use std::collections::{BTreeMap, BTreeSet};

use globset::{Glob, GlobSet, GlobSetBuilder};
use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::path::{build_profiles, MethodCoverageProfile, PathSignature};
use crate::trace::{MethodId, MethodKind, MethodRef, Phase, TestId, TestRef, TraceSession};

pub const DEFAULT_MIN_PATHS: usize = 2;
pub const DEFAULT_EAGER_THRESHOLD: usize = 2;

/// Which invocations take part in the analysis, and the obsession threshold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterConfig {
    /// Keep only invocations made directly from the test body (depth 1).
    pub direct_only: bool,
    /// Drop invocations from the setup and teardown phases.
    pub exclude_setup: bool,
    /// Globs over `module` or `module.qualname`. When non-empty, a method
    /// must match at least one.
    pub include_globs: Vec<String>,
    /// Globs over `module` or `module.qualname`; a match drops the method.
    pub exclude_globs: Vec<String>,
    pub min_paths: usize,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            direct_only: false,
            exclude_setup: true,
            include_globs: Vec::new(),
            exclude_globs: Vec::new(),
            min_paths: DEFAULT_MIN_PATHS,
        }
    }
}

impl FilterConfig {
    /// Every invocation passes; threshold stays at the default.
    pub fn disabled() -> Self {
        FilterConfig { exclude_setup: false, ..Default::default() }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.matcher().map(|_| ())
    }

    fn matcher(&self) -> Result<MethodMatcher, ConfigError> {
        if self.min_paths < 2 {
            return Err(ConfigError::MinPaths(self.min_paths));
        }
        Ok(MethodMatcher { include: compile_globs(&self.include_globs)?, exclude: compile_globs(&self.exclude_globs)? })
    }
}

fn compile_globs(patterns: &[String]) -> Result<Option<GlobSet>, ConfigError> {
    if patterns.is_empty() {
        return Ok(None);
    }
    let mut builder = GlobSetBuilder::new();
    for pattern in patterns {
        let glob =
            Glob::new(pattern).map_err(|source| ConfigError::InvalidGlob { pattern: pattern.clone(), source })?;
        builder.add(glob);
    }
    builder.build().map(Some).map_err(|source| ConfigError::InvalidGlob { pattern: patterns.join(","), source })
}

struct MethodMatcher {
    include: Option<GlobSet>,
    exclude: Option<GlobSet>,
}

impl MethodMatcher {
    fn accepts(&self, method: &MethodRef) -> bool {
        let dotted = method.dotted_name();
        let hit = |set: &GlobSet| set.is_match(&method.module) || set.is_match(&dotted);
        self.include.as_ref().is_none_or(hit) && !self.exclude.as_ref().is_some_and(hit)
    }
}

/// Keeps the invocations that pass every enabled filter. Declarations are
/// kept as-is, so filtered-out methods simply produce no profiles.
pub fn apply_filters(session: &TraceSession, filters: &FilterConfig) -> Result<TraceSession, ConfigError> {
    let matcher = filters.matcher()?;
    let allowed: BTreeSet<MethodId> = session.methods.values().filter(|m| matcher.accepts(m)).map(|m| m.id).collect();
    let kept = session
        .invocations
        .iter()
        .filter(|inv| !filters.exclude_setup || inv.phase == Phase::Call)
        .filter(|inv| !filters.direct_only || inv.depth == 1)
        .filter(|inv| allowed.contains(&inv.method))
        .cloned()
        .collect();
    Ok(session.with_invocations(kept))
}

/// One covered path with the seqs of the invocations that took it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveredPath {
    pub signature: PathSignature,
    pub seqs: Vec<u64>,
}

/// A test that covers several paths of one production method.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObsessionFinding {
    pub test: TestRef,
    pub method: MethodRef,
    /// In signature order.
    pub paths: Vec<CoveredPath>,
    pub path_count: usize,
}

/// One finding per profile with at least `filters.min_paths` distinct paths,
/// in (test id, method id) order.
pub fn detect_obsessed(profiles: &[MethodCoverageProfile], filters: &FilterConfig) -> Vec<ObsessionFinding> {
    let mut findings: Vec<ObsessionFinding> = profiles
        .iter()
        .filter(|p| p.distinct_paths() >= filters.min_paths)
        .map(|p| ObsessionFinding {
            test: p.test.clone(),
            method: p.method.clone(),
            paths: p
                .groups
                .iter()
                .map(|(signature, seqs)| CoveredPath { signature: signature.clone(), seqs: seqs.clone() })
                .collect(),
            path_count: p.distinct_paths(),
        })
        .collect();
    findings.sort_by_key(|f| (f.test.id, f.method.id));
    findings
}

/// Filters, profiles and detects in one step.
pub fn find_obsessed(session: &TraceSession, filters: &FilterConfig) -> Result<Vec<ObsessionFinding>, ConfigError> {
    Ok(detect_obsessed(&build_profiles(session, filters)?, filters))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EagerFinding {
    pub test: TestRef,
    /// Distinct methods called directly from the test body, by id.
    pub called_methods: Vec<MethodRef>,
    pub call_count: usize,
    pub threshold: usize,
}

/// Flags tests whose body directly calls at least `threshold` distinct
/// production methods. Only `call`-phase invocations at depth 1 count;
/// constructors are skipped when `exclude_constructors` is set.
pub fn detect_eager(session: &TraceSession, threshold: usize, exclude_constructors: bool) -> Vec<EagerFinding> {
    let mut called: BTreeMap<TestId, BTreeSet<MethodId>> = BTreeMap::new();
    for inv in &session.invocations {
        if inv.phase != Phase::Call || inv.depth != 1 {
            continue;
        }
        let Some(method) = session.method(inv.method) else {
            continue;
        };
        if exclude_constructors && method.kind == MethodKind::Constructor {
            continue;
        }
        called.entry(inv.test).or_default().insert(inv.method);
    }
    called
        .into_iter()
        .filter(|(_, methods)| methods.len() >= threshold)
        .filter_map(|(test, methods)| {
            Some(EagerFinding {
                test: session.test(test)?.clone(),
                call_count: methods.len(),
                called_methods: methods.iter().filter_map(|m| session.method(*m).cloned()).collect(),
                threshold,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::{InvocationRecord, TestId};

    fn method(id: u64, module: &str, qualname: &str, kind: MethodKind) -> MethodRef {
        MethodRef {
            id: MethodId(id),
            module: module.into(),
            qualname: qualname.into(),
            file: format!("{module}.py"),
            firstline: 10 * id as u32,
            kind,
        }
    }

    fn inv(seq: u64, method: u64, phase: Phase, depth: u32, lines: &[u32]) -> InvocationRecord {
        InvocationRecord {
            test: TestId(1),
            method: MethodId(method),
            seq,
            phase,
            depth,
            lines: lines.to_vec(),
            thread: "MainThread".into(),
        }
    }

    fn sample() -> TraceSession {
        let mut s = TraceSession::new("sample");
        for m in [
            method(1, "calendar", "setfirstweekday", MethodKind::Function),
            method(2, "calendar", "firstweekday", MethodKind::Function),
            method(3, "argparse", "Namespace", MethodKind::Constructor),
        ] {
            s.methods.insert(m.id, m);
        }
        s.tests.insert(TestId(1), TestRef { id: TestId(1), name: "t.test".into() });
        s.invocations = vec![
            inv(1, 1, Phase::Setup, 1, &[2, 4]),
            inv(2, 1, Phase::Call, 1, &[2]),
            inv(3, 1, Phase::Call, 3, &[2, 3]),
            inv(4, 2, Phase::Call, 1, &[2]),
            inv(5, 3, Phase::Call, 1, &[2]),
            inv(6, 1, Phase::Teardown, 2, &[2, 5]),
        ];
        s
    }

    fn seqs(s: &TraceSession) -> Vec<u64> {
        s.invocations.iter().map(|i| i.seq).collect()
    }

    #[test]
    fn setup_phase_is_dropped() {
        let s = apply_filters(&sample(), &FilterConfig::default()).unwrap();
        assert_eq!(seqs(&s), vec![2, 3, 4, 5]);
        assert_eq!(s.methods, sample().methods);
    }

    #[test]
    fn direct_only_keeps_depth_one() {
        let filters = FilterConfig { direct_only: true, ..FilterConfig::disabled() };
        assert_eq!(seqs(&apply_filters(&sample(), &filters).unwrap()), vec![1, 2, 4, 5]);
    }

    #[test]
    fn disabled_filters_are_identity() {
        assert_eq!(apply_filters(&sample(), &FilterConfig::disabled()).unwrap(), sample());
    }

    #[test]
    fn globs_match_module_or_dotted_name() {
        let filters = FilterConfig {
            include_globs: vec!["calendar".into()],
            exclude_globs: vec!["*.firstweekday".into()],
            ..FilterConfig::disabled()
        };
        assert_eq!(seqs(&apply_filters(&sample(), &filters).unwrap()), vec![1, 2, 3, 6]);
        let filters = FilterConfig { include_globs: vec!["arg*".into()], ..FilterConfig::disabled() };
        assert_eq!(seqs(&apply_filters(&sample(), &filters).unwrap()), vec![5]);
    }

    #[test]
    fn bad_config_is_rejected() {
        let bad_glob = FilterConfig { exclude_globs: vec!["calendar[".into()], ..Default::default() };
        assert!(matches!(apply_filters(&sample(), &bad_glob), Err(ConfigError::InvalidGlob { .. })));
        let low = FilterConfig { min_paths: 1, ..Default::default() };
        assert!(matches!(low.validate(), Err(ConfigError::MinPaths(1))));
    }

    #[test]
    fn obsession_counts_paths_after_filtering() {
        let all = find_obsessed(&sample(), &FilterConfig::disabled()).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].method.qualname, "setfirstweekday");
        assert_eq!(all[0].path_count, 4);

        let default = find_obsessed(&sample(), &FilterConfig::default()).unwrap();
        assert_eq!(default[0].path_count, 2);
        let shown: Vec<String> = default[0].paths.iter().map(|p| p.signature.to_string()).collect();
        assert_eq!(shown, ["(2)", "(2,3)"]);

        let direct = FilterConfig { direct_only: true, ..Default::default() };
        assert!(find_obsessed(&sample(), &direct).unwrap().is_empty());
    }

    #[test]
    fn repeated_single_path_calls_are_not_a_finding() {
        let mut s = sample();
        s.invocations = (1..=50).map(|seq| inv(seq, 1, Phase::Call, 1, &[2, 3])).collect();
        assert!(find_obsessed(&s, &FilterConfig::default()).unwrap().is_empty());
    }

    #[test]
    fn eager_counts_direct_calls() {
        let s = sample();
        let found = detect_eager(&s, 2, true);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].call_count, 2);
        assert!(detect_eager(&s, 3, true).is_empty());
        assert_eq!(detect_eager(&s, 3, false)[0].call_count, 3);
    }
}
