//! Square roots, logarithms and diagonalizations of unitary matrices that
//! preserve unitarity together with a symmetry class: generic (A),
//! symmetric (AI), self-dual (AII) or chiral (AIII).

pub mod baseline;
pub mod error;
pub mod gen;
pub mod linalg;
pub mod rootlog;
pub mod specfact;
pub mod symmetry;

pub use error::{Error, Result};
pub use linalg::{CMatrix, C64};
pub use rootlog::{
    coupled_step, floquet_hamiltonian, floquet_hamiltonian_with, log_structured, pade_log,
    sqrt_structured, sqrt_structured_traced, CancelToken, IterationMode, LogOptions, SqrtOptions,
    SqrtOutcome, StructuredLog,
};
pub use specfact::{diag_from_log, diag_structured, diag_structured_with, reconstruct, DiagResult};
pub use symmetry::{
    aiii_index, dual, enforce_log_symmetry, enforce_unitary_symmetry, log_relation_defect,
    residual, unitarize_step, ResidualReport, SymmetryClass, SymmetryContext,
};

// Guide chapters run as doctests so their examples stay current.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/classes.md")]
    mod classes {}
    #[doc = include_str!("../../../book/src/sqrt.md")]
    mod sqrt {}
    #[doc = include_str!("../../../book/src/log.md")]
    mod log {}
    #[doc = include_str!("../../../book/src/diag.md")]
    mod diag {}
    #[doc = include_str!("../../../book/src/chiral-index.md")]
    mod chiral_index {}
    #[doc = include_str!("../../../book/src/floquet.md")]
    mod floquet {}
}
