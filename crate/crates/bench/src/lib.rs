//! Criterion benchmarks for the θ(n) evaluators live in `benches/`.
