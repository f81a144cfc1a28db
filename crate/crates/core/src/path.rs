//! Covered-path canonicalization and per-(test, method) coverage profiles.
//!
//! Two invocations cover the same path iff they executed the same *set* of
//! method lines. Execution order and loop iteration counts do not matter.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::detect::{apply_filters, FilterConfig};
use crate::error::ConfigError;
use crate::trace::{InvocationRecord, MethodId, MethodRef, TestId, TestRef, TraceSession};

/// Canonical identity of one covered path: the sorted, deduplicated
/// method-relative lines an invocation executed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct PathSignature(Vec<u32>);

impl PathSignature {
    pub fn from_lines(lines: &[u32]) -> Self {
        let mut v = lines.to_vec();
        v.sort_unstable();
        v.dedup();
        PathSignature(v)
    }

    pub fn lines(&self) -> &[u32] {
        &self.0
    }
}

impl TryFrom<Vec<u32>> for PathSignature {
    type Error = String;

    fn try_from(lines: Vec<u32>) -> Result<Self, Self::Error> {
        if lines.is_empty() {
            return Err("path signature is empty".into());
        }
        if lines[0] < 2 || lines.windows(2).any(|w| w[0] >= w[1]) {
            return Err(format!("path signature {lines:?} is not strictly increasing from 2"));
        }
        Ok(PathSignature(lines))
    }
}

impl From<PathSignature> for Vec<u32> {
    fn from(sig: PathSignature) -> Self {
        sig.0
    }
}

impl fmt::Display for PathSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, line) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{line}")?;
        }
        f.write_str(")")
    }
}

pub fn path_signature(inv: &InvocationRecord) -> PathSignature {
    PathSignature::from_lines(&inv.lines)
}

/// Invocations of one production method made by one test, grouped by path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodCoverageProfile {
    pub test: TestRef,
    pub method: MethodRef,
    /// Path -> seq numbers of the invocations that covered it.
    pub groups: BTreeMap<PathSignature, Vec<u64>>,
    pub invocation_total: usize,
}

impl MethodCoverageProfile {
    pub fn distinct_paths(&self) -> usize {
        self.groups.len()
    }
}

pub fn distinct_paths(profile: &MethodCoverageProfile) -> usize {
    profile.distinct_paths()
}

/// Groups every invocation of `session` by (test, method) and path, without
/// filtering. Ordered by test id, then method id. Threads are merged.
pub fn profiles(session: &TraceSession) -> Vec<MethodCoverageProfile> {
    let mut grouped: BTreeMap<(TestId, MethodId), BTreeMap<PathSignature, Vec<u64>>> = BTreeMap::new();
    for inv in &session.invocations {
        grouped.entry((inv.test, inv.method)).or_default().entry(path_signature(inv)).or_default().push(inv.seq);
    }
    grouped
        .into_iter()
        .filter_map(|((test, method), groups)| {
            let test = session.test(test)?.clone();
            let method = session.method(method)?.clone();
            let invocation_total = groups.values().map(Vec::len).sum();
            Some(MethodCoverageProfile { test, method, groups, invocation_total })
        })
        .collect()
}

/// Applies `filters` and builds one profile per (test, method) pair with at
/// least one surviving invocation.
pub fn build_profiles(
    session: &TraceSession,
    filters: &FilterConfig,
) -> Result<Vec<MethodCoverageProfile>, ConfigError> {
    Ok(profiles(&apply_filters(session, filters)?))
}
