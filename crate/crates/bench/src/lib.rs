//! Shared inputs for the criterion benchmarks.

use pathsmell_core::synth::{seeded_session, SynthConfig};
use pathsmell_core::{write_trace_string, TraceSession};

/// A session at the upper end of the property-test size range.
pub fn large_session(seed: u64) -> TraceSession {
    seeded_session(
        seed,
        &SynthConfig { max_tests: 200, max_methods: 40, max_invocations_per_test: 60, ..Default::default() },
    )
}

pub fn large_trace_text(seed: u64) -> String {
    write_trace_string(&large_session(seed))
}
