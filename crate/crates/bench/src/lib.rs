//! Criterion benchmarks for `bura-core`; see `benches/`.
