//! Benchmark support crate; see `benches/core_benches.rs`.
