//! Criterion benchmarks for the `opconvex` kernels live under `benches/`.
