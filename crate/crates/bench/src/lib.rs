//! Criterion benchmarks for the maclab kernels live in `benches/`.
