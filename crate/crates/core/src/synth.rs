//! Seeded random trace generator for property tests and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::trace::{InvocationRecord, MethodId, MethodKind, MethodRef, Phase, TestId, TestRef, TraceSession};

#[derive(Debug, Clone, Copy)]
pub struct SynthConfig {
    pub max_tests: usize,
    pub max_methods: usize,
    pub max_invocations_per_test: usize,
    /// Largest method-relative line; small values make paths collide often.
    pub max_line: u32,
    pub max_lines_per_invocation: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            max_tests: 50,
            max_methods: 20,
            max_invocations_per_test: 30,
            max_line: 7,
            max_lines_per_invocation: 6,
        }
    }
}

/// A valid session with sparse ids, interleaved tests, all phases, depths
/// 1..=3, two thread labels and repeated lines. Method and test identities
/// depend only on their index, so separately generated sessions overlap the
/// way shards of one run do.
pub fn random_session<R: Rng>(rng: &mut R, cfg: &SynthConfig) -> TraceSession {
    let mut session = TraceSession::new(format!("synth-{}", rng.gen::<u32>()));

    let n_methods = rng.gen_range(1..=cfg.max_methods.max(1));
    let mut next_id = 0u64;
    let mut method_ids = Vec::with_capacity(n_methods);
    for i in 0..n_methods {
        next_id += rng.gen_range(1..=3);
        let id = MethodId(next_id);
        let module = format!("pkg.mod{}", i % 4);
        session.methods.insert(
            id,
            MethodRef {
                id,
                file: format!("pkg/mod{}.py", i % 4),
                module,
                qualname: format!("f{i}"),
                firstline: 10 * i as u32 + 1,
                kind: if i % 4 == 3 { MethodKind::Constructor } else { MethodKind::Function },
            },
        );
        method_ids.push(id);
    }

    let n_tests = rng.gen_range(0..=cfg.max_tests);
    let mut slots = Vec::new();
    next_id = 0;
    for i in 0..n_tests {
        next_id += rng.gen_range(1..=3);
        let id = TestId(next_id);
        session.tests.insert(id, TestRef { id, name: format!("suite.Case{}.test_{i}", i % 5) });
        let n_inv = rng.gen_range(0..=cfg.max_invocations_per_test);
        slots.extend(std::iter::repeat_n(id, n_inv));
    }
    slots.shuffle(rng);

    let mut seqs = std::collections::HashMap::new();
    for test in slots {
        let seq = seqs.entry(test).or_insert(0u64);
        *seq += rng.gen_range(1..=2);
        let n_lines = rng.gen_range(1..=cfg.max_lines_per_invocation.max(1));
        let lines = (0..n_lines).map(|_| rng.gen_range(2..=cfg.max_line.max(2))).collect();
        session.invocations.push(InvocationRecord {
            test,
            method: *method_ids.choose(rng).expect("at least one method"),
            seq: *seq,
            phase: match rng.gen_range(0..10) {
                0 => Phase::Setup,
                1 => Phase::Teardown,
                _ => Phase::Call,
            },
            depth: rng.gen_range(1..=3),
            lines,
            thread: if rng.gen_bool(0.9) { "MainThread".into() } else { "Worker-1".into() },
        });
    }
    session
}

pub fn seeded_session(seed: u64, cfg: &SynthConfig) -> TraceSession {
    random_session(&mut ChaCha8Rng::seed_from_u64(seed), cfg)
}
