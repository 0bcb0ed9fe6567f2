//! Criterion benchmarks for `vietlab-core` live in `benches/`.
