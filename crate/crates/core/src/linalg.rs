//! Dense complex matrices and the handful of LAPACK-backed kernels the rest
//! of the crate is built from.
//!
//! [`CMatrix`] is a square, finite, double-precision complex matrix. Every
//! public operation here returns finite entries or an error. Norms reported
//! to users are spectral norms; the Frobenius norm is only used for cheap
//! internal tests such as convergence checks.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use lax::layout::MatrixLayout;
use lax::Lapack;
use ndarray::{Array2, ArrayView2, ShapeBuilder};
use ndarray_linalg::{Eig, Eigh, JobSvd, QR, SVDDC, UPLO};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub(crate) const EPS: f64 = f64::EPSILON;
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Dense square complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMatrix(Array2<C64>);

impl CMatrix {
    /// Wraps an array, checking that it is square, non-empty and finite.
    pub fn from_array(a: Array2<C64>) -> Result<Self> {
        let (rows, cols) = a.dim();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows == 0 {
            return Err(Error::Empty);
        }
        if !a.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        // LAPACK wrappers reject the degenerate strides slicing can leave
        // on length-1 axes
        if a.strides() == [rows as isize, 1] {
            Ok(CMatrix(a))
        } else {
            Ok(CMatrix(
                Array2::from_shape_vec((rows, cols), a.iter().copied().collect()).expect("square"),
            ))
        }
    }

    pub fn from_real(a: &Array2<f64>) -> Result<Self> {
        Self::from_array(a.mapv(|x| C64::new(x, 0.0)))
    }

    /// Builds an `n x n` matrix from row-major entries.
    pub fn from_row_slice(n: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        let a = Array2::from_shape_vec((n, n), entries.to_vec())
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
        Self::from_array(a)
    }

    pub fn from_fn(n: usize, f: impl FnMut((usize, usize)) -> C64) -> Self {
        assert!(n > 0, "matrix dimension must be positive");
        CMatrix(Array2::from_shape_fn((n, n), f))
    }

    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "matrix dimension must be positive");
        CMatrix(Array2::eye(n))
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "matrix dimension must be positive");
        CMatrix(Array2::zeros((n, n)))
    }

    pub fn from_diag(d: &[C64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &z) in d.iter().enumerate() {
            m.0[[i, i]] = z;
        }
        m
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_array(&self) -> &Array2<C64> {
        &self.0
    }

    pub fn view(&self) -> ArrayView2<'_, C64> {
        self.0.view()
    }

    pub fn into_array(self) -> Array2<C64> {
        self.0
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        CMatrix(self.0.t().mapv(|z| z.conj()))
    }

    pub fn transpose(&self) -> Self {
        CMatrix(self.0.t().to_owned())
    }

    pub fn conj(&self) -> Self {
        CMatrix(self.0.mapv(|z| z.conj()))
    }

    pub fn scale(&self, c: C64) -> Self {
        CMatrix(self.0.mapv(|z| z * c))
    }

    pub fn scale_real(&self, c: f64) -> Self {
        CMatrix(self.0.mapv(|z| z * c))
    }

    pub fn diagonal(&self) -> Vec<C64> {
        self.0.diag().to_vec()
    }

    pub fn real_part(&self) -> Array2<f64> {
        self.0.mapv(|z| z.re)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Largest imaginary-part magnitude over all entries.
    pub fn max_imag_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, z| m.max(z.im.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `self * diag(d)`.
    pub fn scale_columns(&self, d: &[C64]) -> Self {
        assert_eq!(d.len(), self.n());
        let mut out = self.0.clone();
        for (mut col, &s) in out.columns_mut().into_iter().zip(d) {
            col.mapv_inplace(|z| z * s);
        }
        CMatrix(out)
    }

    /// `self * diag(d) * self^dagger`.
    pub fn sandwich_diag(&self, d: &[C64]) -> Self {
        &self.scale_columns(d) * &self.adjoint()
    }

    pub(crate) fn checked(a: Array2<C64>) -> Result<Self> {
        Self::from_array(a)
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CMatrix({}x{}) {:?}", self.n(), self.n(), self.0)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[[i, j]]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[[i, j]]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 - &rhs.0)
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        CMatrix(self.0.mapv(|z| -z))
    }
}

/// Matrix product. Panics on a dimension mismatch; use [`mat_mul`] for a
/// checked version.
impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(self.0.dot(&rhs.0))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CMatrix {
            type Output = CMatrix;
            fn $m(self, rhs: CMatrix) -> CMatrix {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

pub fn mat_mul(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: b.n(),
        });
    }
    CMatrix::checked(a.0.dot(&b.0))
}

pub fn frobenius_norm(a: &CMatrix) -> f64 {
    a.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest singular value.
///
/// Panics only if LAPACK's divide-and-conquer SVD reports a failure, which
/// does not happen for finite input.
pub fn spectral_norm(a: &CMatrix) -> f64 {
    singular_values(a).expect("singular values of a finite matrix")[0]
}

/// Inverse by partially pivoted LU.
///
/// Fails with [`Error::SingularMatrix`] when a pivot of the factorization is
/// below `n * eps * ||a||_F`.
pub fn inverse(a: &CMatrix) -> Result<CMatrix> {
    let n = a.n();
    let threshold = n as f64 * EPS * frobenius_norm(a);
    let mut buf = a.0.as_standard_layout().into_owned();
    let layout = MatrixLayout::C {
        row: n as i32,
        lda: n as i32,
    };
    let slice = buf.as_slice_mut().expect("standard layout");
    let pivots = <C64 as Lapack>::lu(layout, slice).map_err(|_| Error::SingularMatrix)?;
    if (0..n).any(|i| slice[i * n + i].norm() <= threshold) {
        return Err(Error::SingularMatrix);
    }
    <C64 as Lapack>::inv(layout, slice, &pivots).map_err(|_| Error::SingularMatrix)?;
    CMatrix::checked(buf)
}

fn hermitian_defect(h: &CMatrix) -> (f64, f64) {
    let defect = frobenius_norm(&(h - &h.adjoint()));
    (defect, frobenius_norm(h))
}

/// Hermitian eigendecomposition `h = Q diag(e) Q^dagger`, eigenvalues ascending.
///
/// The input is symmetrized before factorization; it must be Hermitian to
/// `1e-10 * ||h||_F` in the Frobenius norm.
pub fn eigh(h: &CMatrix) -> Result<(CMatrix, Vec<f64>)> {
    let (defect, scale) = hermitian_defect(h);
    if defect > 1e-10 * scale {
        return Err(Error::NotHermitian { defect });
    }
    let sym = (h + &h.adjoint()).scale_real(0.5);
    // the complex driver mishandles row-major input (it returns conjugated
    // eigenvectors), so hand it a column-major copy
    let mut f = Array2::zeros(sym.0.dim().f());
    f.assign(&sym.0);
    let (e, q) = f
        .eigh(UPLO::Lower)
        .map_err(|_| Error::NoConvergence("eigh"))?;
    Ok((CMatrix::checked(q)?, e.to_vec()))
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn eigvalsh(h: &CMatrix) -> Result<Vec<f64>> {
    Ok(eigh(h)?.1)
}

/// Real symmetric eigendecomposition, computed entirely in real arithmetic
/// so the eigenvector matrix is exactly real.
pub fn eigh_real_symmetric(a: &Array2<f64>) -> Result<(Array2<f64>, Vec<f64>)> {
    let sym = (a + &a.t()) * 0.5;
    let (e, q) = sym
        .eigh(UPLO::Lower)
        .map_err(|_| Error::NoConvergence("eigh"))?;
    if !q.iter().all(|x| x.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok((q, e.to_vec()))
}

/// Full singular value decomposition `a = u diag(s) v^dagger`.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: CMatrix,
    /// Descending.
    pub s: Vec<f64>,
    pub v: CMatrix,
}

pub fn svd(a: &CMatrix) -> Result<Svd> {
    let (u, s, vt) =
        a.0.svddc(JobSvd::All)
            .map_err(|_| Error::NoConvergence("svd"))?;
    let u = u.ok_or(Error::NoConvergence("svd"))?;
    let vt = vt.ok_or(Error::NoConvergence("svd"))?;
    Ok(Svd {
        u: CMatrix::checked(u)?,
        s: s.to_vec(),
        v: CMatrix::checked(vt)?.adjoint(),
    })
}

/// Singular values only, descending.
pub fn singular_values(a: &CMatrix) -> Result<Vec<f64>> {
    let (_, s, _) =
        a.0.svddc(JobSvd::None)
            .map_err(|_| Error::NoConvergence("svd"))?;
    Ok(s.to_vec())
}

/// Unitary factor of `a = QR`, normalized so that `R` has a real positive
/// diagonal. For Ginibre input this is Haar distributed.
pub fn qr_unitary(a: &CMatrix) -> Result<CMatrix> {
    let n = a.n();
    let threshold = n as f64 * EPS * frobenius_norm(a);
    let (q, r) = a.0.qr().map_err(|_| Error::SingularMatrix)?;
    let mut phases = Vec::with_capacity(n);
    for i in 0..n {
        let d = r[[i, i]];
        if d.norm() <= threshold {
            return Err(Error::SingularMatrix);
        }
        phases.push(d / d.norm());
    }
    Ok(CMatrix::checked(q)?.scale_columns(&phases))
}

/// Real orthogonal factor of a real `a = QR` with `R` positive on the diagonal.
pub fn qr_orthogonal(a: &Array2<f64>) -> Result<Array2<f64>> {
    let n = a.nrows();
    let threshold = n as f64 * EPS * a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (mut q, r) = a.qr().map_err(|_| Error::SingularMatrix)?;
    for i in 0..n {
        let d = r[[i, i]];
        if d.abs() <= threshold {
            return Err(Error::SingularMatrix);
        }
        if d < 0.0 {
            q.column_mut(i).mapv_inplace(|x| -x);
        }
    }
    Ok(q)
}

/// General (non-Hermitian) eigendecomposition. Eigenvectors are unit
/// columns but carry no orthogonality guarantee.
pub fn eig_general(a: &CMatrix) -> Result<(Vec<C64>, CMatrix)> {
    let (e, v) = a.0.eig().map_err(|_| Error::NoConvergence("eig"))?;
    Ok((e.to_vec(), CMatrix::checked(v)?))
}

/// `exp(i t h)` for Hermitian `h`, through its eigendecomposition.
pub fn exp_i_hermitian(h: &CMatrix, t: f64) -> Result<CMatrix> {
    let (q, e) = eigh(h)?;
    // one Newton-Schulz step restores orthonormality of q to rounding
    let n = h.n();
    let q = &q * &(&CMatrix::identity(n).scale_real(1.5) - &(&q.adjoint() * &q).scale_real(0.5));
    let d: Vec<C64> = e.iter().map(|&x| C64::from_polar(1.0, t * x)).collect();
    Ok(q.sandwich_diag(&d))
}

/// `exp(a)` for anti-Hermitian `a`, via the eigendecomposition of `-i a`.
pub fn expm_antihermitian(a: &CMatrix) -> Result<CMatrix> {
    exp_i_hermitian(&a.scale(-I), 1.0)
}

/// General matrix exponential by scaling and squaring a degree-18 Taylor
/// polynomial. Used for baselines and as an independent cross-check.
pub fn expm(a: &CMatrix) -> Result<CMatrix> {
    let n = a.n();
    let norm1 = (0..n)
        .map(|j| a.0.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm1 > 0.25 {
        (norm1 / 0.25).log2().ceil() as i32
    } else {
        0
    };
    let b = a.scale_real(0.5f64.powi(squarings));
    let id = CMatrix::identity(n);
    let mut t = id.clone();
    for k in (1..=18).rev() {
        t = &id + &(&b * &t).scale_real(1.0 / k as f64);
    }
    for _ in 0..squarings {
        t = &t * &t;
    }
    CMatrix::checked(t.0)
}
