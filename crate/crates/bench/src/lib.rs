//! Criterion benchmarks for `blasius-core`; see `benches/solver.rs`.
