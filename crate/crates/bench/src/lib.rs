//! Benchmarks for the GKM pipeline live in `benches/`.
