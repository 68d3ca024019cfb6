//! Criterion benchmarks for the hot kernels: the reaction-field
//! susceptibility, the decoherence quadrature and the exponential fit.
//! Run them with `cargo bench -p chromobath-bench`.
