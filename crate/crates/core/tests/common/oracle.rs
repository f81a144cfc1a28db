//! Brute-force reference implementations, independent of the library's
//! grouping code: path identity is decided by comparing every pair of
//! invocations' line *sets*, and classes are formed with union-find.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet};

use pathsmell_core::{InvocationRecord, MethodKind, Phase, TraceSession};

/// (test id, method id) -> set of seq classes.
pub type Partition = BTreeMap<(u64, u64), BTreeSet<BTreeSet<u64>>>;

fn keep(inv: &InvocationRecord, direct_only: bool, exclude_setup: bool) -> bool {
    (!exclude_setup || matches!(inv.phase, Phase::Call)) && (!direct_only || inv.depth == 1)
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

pub fn partition(session: &TraceSession, direct_only: bool, exclude_setup: bool) -> Partition {
    let mut per_pair: BTreeMap<(u64, u64), Vec<&InvocationRecord>> = BTreeMap::new();
    for inv in session.invocations.iter().filter(|i| keep(i, direct_only, exclude_setup)) {
        per_pair.entry((inv.test.0, inv.method.0)).or_default().push(inv);
    }
    per_pair
        .into_iter()
        .map(|(key, invs)| {
            let sets: Vec<HashSet<u32>> = invs.iter().map(|i| i.lines.iter().copied().collect()).collect();
            let mut parent: Vec<usize> = (0..invs.len()).collect();
            for a in 0..invs.len() {
                for b in a + 1..invs.len() {
                    if sets[a] == sets[b] {
                        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                        parent[ra] = rb;
                    }
                }
            }
            let mut classes: BTreeMap<usize, BTreeSet<u64>> = BTreeMap::new();
            for (i, inv) in invs.iter().enumerate() {
                let root = find(&mut parent, i);
                classes.entry(root).or_default().insert(inv.seq);
            }
            (key, classes.into_values().collect())
        })
        .collect()
}

/// Pairs whose class count reaches `min_paths`, with that count.
pub fn obsessed(
    session: &TraceSession,
    direct_only: bool,
    exclude_setup: bool,
    min_paths: usize,
) -> BTreeMap<(u64, u64), usize> {
    partition(session, direct_only, exclude_setup)
        .into_iter()
        .filter(|(_, classes)| classes.len() >= min_paths)
        .map(|(k, classes)| (k, classes.len()))
        .collect()
}

/// Distinct line sets per (test name, method identity) pair, for comparing
/// sessions whose ids differ.
pub fn path_sets_by_identity(session: &TraceSession) -> BTreeMap<(String, String), BTreeSet<BTreeSet<u32>>> {
    let mut out: BTreeMap<(String, String), BTreeSet<BTreeSet<u32>>> = BTreeMap::new();
    for inv in &session.invocations {
        let test = session.tests[&inv.test].name.clone();
        let m = &session.methods[&inv.method];
        let method = format!("{}|{}|{}|{}", m.module, m.qualname, m.file, m.firstline);
        out.entry((test, method)).or_default().insert(inv.lines.iter().copied().collect());
    }
    out
}

/// Tests whose body calls at least `threshold` distinct non-constructor
/// methods directly.
pub fn eager(session: &TraceSession, threshold: usize) -> BTreeSet<u64> {
    let mut called: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
    for inv in &session.invocations {
        if inv.phase == Phase::Call && inv.depth == 1 && session.methods[&inv.method].kind != MethodKind::Constructor {
            called.entry(inv.test.0).or_default().insert(inv.method.0);
        }
    }
    called.into_iter().filter(|(_, m)| m.len() >= threshold).map(|(t, _)| t).collect()
}
