//! Criterion benchmarks for `valet-core` live in `benches/`.
