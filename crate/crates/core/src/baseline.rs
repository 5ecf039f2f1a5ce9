//! Unstructured reference methods built on the backend's general
//! eigensolver (LAPACK `zgeev`): `f(U) = X f(Lambda) X^{-1}`.
//!
//! Nothing here knows about unitarity or symmetry classes; these are the
//! comparators the benchmark reports against.

use crate::error::Result;
use crate::linalg::{eig_general, inverse, CMatrix, C64};

/// Name of the comparator, written into benchmark output.
pub const BASELINE_NAME: &str = "LAPACK zgeev via ndarray-linalg (OpenBLAS)";

/// Eigenvalues and unit-norm eigenvectors from the general solver.
#[derive(Clone, Debug)]
pub struct GeneralEig {
    pub values: Vec<C64>,
    pub vectors: CMatrix,
}

pub fn diag_general(u: &CMatrix) -> Result<GeneralEig> {
    let (values, vectors) = eig_general(u)?;
    Ok(GeneralEig { values, vectors })
}

fn spectral_function(u: &CMatrix, f: impl Fn(C64) -> C64) -> Result<CMatrix> {
    let (values, x) = eig_general(u)?;
    let fx: Vec<C64> = values.into_iter().map(f).collect();
    Ok(&x.scale_columns(&fx) * &inverse(&x)?)
}

/// Principal square root through the general eigendecomposition.
pub fn sqrt_general(u: &CMatrix) -> Result<CMatrix> {
    spectral_function(u, |z| z.sqrt())
}

/// Principal logarithm through the general eigendecomposition.
pub fn log_general(u: &CMatrix) -> Result<CMatrix> {
    spectral_function(u, |z| z.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::spectral_norm;

    #[test]
    fn diagonal_inputs() {
        let u = CMatrix::from_diag(&[C64::new(0.0, 1.0), C64::new(-1.0, 1e-3).unscale(1.0)]);
        let r = sqrt_general(&u).unwrap();
        assert!(spectral_norm(&(&(&r * &r) - &u)) < 1e-14);
        let l = log_general(&CMatrix::from_diag(&[C64::new(0.0, 1.0)])).unwrap();
        assert!((l[(0, 0)] - C64::new(0.0, std::f64::consts::FRAC_PI_2)).norm() < 1e-15);
        let d = diag_general(&CMatrix::identity(3)).unwrap();
        assert!(d.values.iter().all(|&z| (z - 1.0).norm() < 1e-15));
    }
}
