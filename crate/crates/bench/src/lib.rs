//! Criterion benchmarks for the eqtoric pipeline; see `benches/pipeline.rs`.
