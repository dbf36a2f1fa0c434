//! Criterion benchmarks for `ucca-core`; see `benches/`.
