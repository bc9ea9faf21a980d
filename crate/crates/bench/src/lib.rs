//! Criterion benchmarks for the toric-ghz engine live in `benches/`.
