use std::collections::HashMap;

use super::{InvocationRecord, MethodId, MethodIdentity, MethodRef, TestId, TestRef, TraceSession};
use crate::error::MergeError;

/// Combines two sessions, e.g. shards of one test run.
///
/// Methods are unified by `(module, qualname, file, firstline)` and tests by
/// name; both get fresh ids in order of first appearance. Invocations are
/// concatenated `a` then `b` and each test's seq is renumbered from 1.
pub fn merge_sessions(a: &TraceSession, b: &TraceSession) -> Result<TraceSession, MergeError> {
    if a.version != b.version {
        return Err(MergeError::VersionMismatch { left: a.version, right: b.version });
    }

    let session_id = match (a.session_id.as_str(), b.session_id.as_str()) {
        (x, y) if x == y || y.is_empty() => x.to_string(),
        ("", y) => y.to_string(),
        (x, y) => format!("{x}+{y}"),
    };
    let mut out = TraceSession { version: a.version, session_id, ..Default::default() };

    let mut by_identity: HashMap<MethodIdentity, MethodId> = HashMap::new();
    let mut by_name: HashMap<String, TestId> = HashMap::new();
    let mut next_seq: HashMap<TestId, u64> = HashMap::new();

    for part in [a, b] {
        let mut method_ids = HashMap::with_capacity(part.methods.len());
        for method in part.methods.values() {
            let identity = method.identity();
            let id = match by_identity.get(&identity) {
                Some(&id) => {
                    if out.methods[&id].kind != method.kind {
                        return Err(MergeError::Conflict { identity });
                    }
                    id
                }
                None => {
                    let id = MethodId(out.methods.len() as u64 + 1);
                    out.methods.insert(id, MethodRef { id, ..method.clone() });
                    by_identity.insert(identity, id);
                    id
                }
            };
            method_ids.insert(method.id, id);
        }

        let mut test_ids = HashMap::with_capacity(part.tests.len());
        for test in part.tests.values() {
            let id = *by_name.entry(test.name.clone()).or_insert_with(|| {
                let id = TestId(out.tests.len() as u64 + 1);
                out.tests.insert(id, TestRef { id, name: test.name.clone() });
                id
            });
            test_ids.insert(test.id, id);
        }

        for inv in &part.invocations {
            let (Some(&test), Some(&method)) = (test_ids.get(&inv.test), method_ids.get(&inv.method)) else {
                continue;
            };
            let seq = next_seq.entry(test).or_insert(0);
            *seq += 1;
            out.invocations.push(InvocationRecord { test, method, seq: *seq, ..inv.clone() });
        }
    }

    Ok(out)
}
