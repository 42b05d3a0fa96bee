//! Criterion benchmarks for `shimura-core`; see `benches/`.
