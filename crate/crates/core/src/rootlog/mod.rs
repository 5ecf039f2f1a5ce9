//! Structured square roots and logarithms of unitary matrices.

mod log;
mod pade;
mod sqrt;

pub use log::{
    floquet_hamiltonian, floquet_hamiltonian_with, log_structured, LogOptions, StructuredLog,
};
pub use pade::{gauss_legendre_unit, pade_log, pade_log_scalar};
pub use sqrt::{
    coupled_step, sqrt_structured, sqrt_structured_traced, CancelToken, IterationMode,
    IterationRecord, SqrtOptions, SqrtOutcome, INPUT_TOL,
};
