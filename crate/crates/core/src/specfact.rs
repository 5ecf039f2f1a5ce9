//! Structured diagonalization of unitaries through their logarithm.
//!
//! `U = Q diag(e^{i alpha}) Q^dagger` is obtained by diagonalizing the
//! Hermitian matrix `H = -i log U` with a solver matched to the class, so
//! the eigenvalues sit exactly on the unit circle and `Q` inherits the
//! class structure: real for AI, `Gamma`-paired columns for AIII.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use ndarray::s;

use crate::error::{Error, Result};
use crate::linalg::{eigh, eigh_real_symmetric, svd, CMatrix, C64};
use crate::rootlog::{log_structured, LogOptions, StructuredLog};
use crate::symmetry::{SymmetryClass, SymmetryContext};

#[derive(Clone, Debug, PartialEq)]
pub struct DiagResult {
    /// Eigenvector matrix, columns orthonormal.
    pub q: CMatrix,
    /// Eigenphases in `(-pi, pi]`, one per column of `q`.
    pub phases: Vec<f64>,
    pub class: SymmetryClass,
}

impl DiagResult {
    /// `e^{i alpha_j}`, unit modulus by construction.
    pub fn eigenvalues(&self) -> Vec<C64> {
        self.phases
            .iter()
            .map(|&a| C64::from_polar(1.0, a))
            .collect()
    }
}

/// Diagonalizes a nearly unitary `u` in class A, AI or AIII.
///
/// * A: Hermitian eigensolver on `H`; phases ascending.
/// * AI: `H` is real symmetric and is diagonalized in real arithmetic, so
///   `q` is exactly real; phases ascending.
/// * AIII: `H = [[0, A], [A^dagger, 0]]`. With `A = U_s diag(s) V_s^dagger`,
///   `q = [[U_s, U_s], [-V_s, V_s]] / sqrt(2)` and the phases are
///   `(-s, s)`, so `Gamma q_j = q_{j + n/2}` and the phases pair up as
///   `alpha_j = -alpha_{j + n/2}`. The first half is ascending. The
///   pairing is kept exact, so an eigenvalue at exactly `-1` shows up as
///   the pair `(-pi, pi)`.
///
/// Class AII is rejected with [`Error::UnsupportedClass`].
///
/// ```
/// use symlog::{diag_structured, reconstruct, CMatrix, SymmetryClass, SymmetryContext};
///
/// let theta: f64 = 0.7;
/// let (c, s) = (theta.cos(), theta.sin());
/// let u = CMatrix::from_row_slice(2, &[c.into(), (-s).into(), s.into(), c.into()]).unwrap();
/// let ctx = SymmetryContext::for_class(SymmetryClass::ChiralAIII, 2).unwrap();
/// let d = diag_structured(&u, SymmetryClass::ChiralAIII, &ctx).unwrap();
/// assert!((d.phases[0] + theta).abs() < 1e-14 && (d.phases[1] - theta).abs() < 1e-14);
/// let err = &reconstruct(&d) - &u;
/// assert!(err.max_abs() < 1e-14);
/// ```
pub fn diag_structured(
    u: &CMatrix,
    class: SymmetryClass,
    ctx: &SymmetryContext,
) -> Result<DiagResult> {
    diag_structured_with(u, class, ctx, &LogOptions::default())
}

pub fn diag_structured_with(
    u: &CMatrix,
    class: SymmetryClass,
    ctx: &SymmetryContext,
    opts: &LogOptions,
) -> Result<DiagResult> {
    if class == SymmetryClass::SelfDualAII {
        return Err(Error::UnsupportedClass(class));
    }
    diag_from_log(&log_structured(u, class, ctx, opts)?)
}

/// Diagonalizes `exp(log.h_anti)` from an already computed structured log.
pub fn diag_from_log(log: &StructuredLog) -> Result<DiagResult> {
    let class = log.class;
    if class == SymmetryClass::SelfDualAII {
        return Err(Error::UnsupportedClass(class));
    }
    // H = -i h_anti, exactly Hermitian
    let h = log.h_anti.scale(C64::new(0.0, -1.0));
    let (q, phases) = match class {
        SymmetryClass::GenericA => eigh(&h)?,
        SymmetryClass::SymmetricAI => {
            let (q, e) = eigh_real_symmetric(&h.real_part())?;
            (CMatrix::from_real(&q)?, e)
        }
        SymmetryClass::ChiralAIII => {
            return chiral_block_diag(&h).map(|(q, phases)| DiagResult { q, phases, class })
        }
        SymmetryClass::SelfDualAII => unreachable!(),
    };
    let phases = phases.into_iter().map(wrap_phase).collect();
    Ok(DiagResult { q, phases, class })
}

fn chiral_block_diag(h: &CMatrix) -> Result<(CMatrix, Vec<f64>)> {
    let n = h.n();
    let m = n / 2;
    let a = CMatrix::from_array(h.as_array().slice(s![..m, m..]).to_owned())?;
    let f = svd(&a)?;
    let us = f.u.as_array();
    let vs = f.v.as_array();
    let q = CMatrix::from_fn(n, |(i, j)| {
        let col = j % m;
        let z = match (i < m, j < m) {
            (true, _) => us[[i, col]],
            (false, true) => -vs[[i - m, col]],
            (false, false) => vs[[i - m, col]],
        };
        z * FRAC_1_SQRT_2
    });
    // Wrap once and negate so the pairing stays exact; a singular value that
    // rounds to pi gives the pair (-pi, pi).
    let pos: Vec<f64> = f.s.iter().map(|&x| wrap_phase(x)).collect();
    let phases = pos.iter().map(|&x| -x).chain(pos.iter().copied()).collect();
    Ok((q, phases))
}

// Representative in (-pi, pi]. A pair (-s, s) stays a pair.
fn wrap_phase(a: f64) -> f64 {
    if a > PI {
        a - 2.0 * PI
    } else if a <= -PI {
        a + 2.0 * PI
    } else {
        a
    }
}

/// `q diag(e^{i alpha}) q^dagger`.
pub fn reconstruct(res: &DiagResult) -> CMatrix {
    res.q.sandwich_diag(&res.eigenvalues())
}
