//! Split plans: one suggested test per covered path of a smelly test.
//!
//! Plans are data only. Assertions and local setup still have to be divided
//! among the new tests by hand.

use serde::{Deserialize, Serialize};

use crate::detect::ObsessionFinding;
use crate::path::PathSignature;
use crate::trace::{MethodRef, TestRef};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuggestedTest {
    pub name: String,
    pub path: PathSignature,
    pub invocation_seqs: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub original_test: TestRef,
    pub method: MethodRef,
    pub suggested: Vec<SuggestedTest>,
}

/// Suggests `<original>_path<k>` for each path, k counting from 1 in
/// signature order.
pub fn suggest_split(finding: &ObsessionFinding) -> SplitPlan {
    let mut paths: Vec<_> = finding.paths.iter().collect();
    paths.sort_by(|a, b| a.signature.cmp(&b.signature));
    let suggested = paths
        .into_iter()
        .enumerate()
        .map(|(k, path)| SuggestedTest {
            name: format!("{}_path{}", finding.test.name, k + 1),
            path: path.signature.clone(),
            invocation_seqs: path.seqs.clone(),
        })
        .collect();
    SplitPlan { original_test: finding.test.clone(), method: finding.method.clone(), suggested }
}

/// Number of focused tests the findings would split into.
pub fn split_totals(findings: &[ObsessionFinding]) -> usize {
    findings.iter().map(|f| f.path_count).sum()
}
