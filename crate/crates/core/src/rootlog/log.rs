use crate::error::{Error, Result};
use crate::linalg::{expm_antihermitian, CMatrix, C64};
use crate::symmetry::{enforce_log_unchecked, SymmetryClass, SymmetryContext};

use super::pade::pade_log;
use super::sqrt::{check_input, iterate, SqrtOptions};

#[derive(Clone, Debug)]
pub struct LogOptions {
    /// Number of structured square roots taken before the Pade step.
    pub roots: u32,
    pub pade_order: usize,
    pub sqrt: SqrtOptions,
}

impl Default for LogOptions {
    fn default() -> Self {
        LogOptions {
            roots: 5,
            pade_order: 7,
            sqrt: SqrtOptions::default(),
        }
    }
}

/// An anti-Hermitian principal logarithm carrying the class relation of the
/// unitary it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct StructuredLog {
    pub h_anti: CMatrix,
    pub class: SymmetryClass,
}

impl StructuredLog {
    /// `exp(h_anti)`, through the Hermitian eigensolver.
    pub fn exp(&self) -> Result<CMatrix> {
        expm_antihermitian(&self.h_anti)
    }
}

/// Principal logarithm of a nearly unitary matrix, anti-Hermitian and in the
/// same symmetry class.
///
/// Takes `opts.roots` structured square roots, applies the diagonal Pade
/// approximant to `R - I`, projects onto the anti-Hermitian matrices with the
/// class relation, and scales by `2^roots`.
///
/// ```
/// use symlog::{log_structured, CMatrix, LogOptions, SymmetryClass, SymmetryContext, C64};
///
/// let u = CMatrix::from_diag(&[C64::new(0.0, 1.0), C64::new(0.0, -1.0)]);
/// let ctx = SymmetryContext::new(2);
/// let log = log_structured(&u, SymmetryClass::GenericA, &ctx, &LogOptions::default()).unwrap();
/// let half_pi = std::f64::consts::FRAC_PI_2;
/// assert!((log.h_anti[(0, 0)] - C64::new(0.0, half_pi)).norm() < 1e-14);
/// assert!((log.h_anti[(1, 1)] - C64::new(0.0, -half_pi)).norm() < 1e-14);
/// ```
pub fn log_structured(
    u: &CMatrix,
    class: SymmetryClass,
    ctx: &SymmetryContext,
    opts: &LogOptions,
) -> Result<StructuredLog> {
    if opts.roots > 60 {
        return Err(Error::InvalidParameter("at most 60 square roots".into()));
    }
    if opts.pade_order == 0 {
        return Err(Error::InvalidParameter(
            "Pade order must be positive".into(),
        ));
    }
    check_input(u, class, ctx)?;
    let n = u.n();
    let mut r = u.clone();
    for _ in 0..opts.roots {
        r = iterate(&r, class, &opts.sqrt)?.root;
    }
    let x = &r - &CMatrix::identity(n);
    let h = enforce_log_unchecked(&pade_log(&x, opts.pade_order)?, class);
    // a power of two: the scaling keeps every exact relation exact
    let h_anti = h.scale_real((1u64 << opts.roots) as f64);
    Ok(StructuredLog { h_anti, class })
}

/// Floquet Hamiltonian `H_F = (i / period) log U`, so that
/// `exp(-i period H_F) = U`.
///
/// `H_F` is exactly Hermitian. For class AI it is returned real symmetric and
/// for class AIII it anticommutes with `Gamma` exactly.
pub fn floquet_hamiltonian(
    u: &CMatrix,
    period: f64,
    class: SymmetryClass,
    ctx: &SymmetryContext,
) -> Result<CMatrix> {
    floquet_hamiltonian_with(u, period, class, ctx, &LogOptions::default())
}

pub fn floquet_hamiltonian_with(
    u: &CMatrix,
    period: f64,
    class: SymmetryClass,
    ctx: &SymmetryContext,
    opts: &LogOptions,
) -> Result<CMatrix> {
    if !(period > 0.0 && period.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "period must be positive, got {period}"
        )));
    }
    let log = log_structured(u, class, ctx, opts)?;
    let mut hf = log.h_anti.scale(C64::new(0.0, 1.0 / period));
    if class == SymmetryClass::SymmetricAI {
        let residue = hf.max_imag_abs();
        if residue > 1e-12 * hf.max_abs().max(1.0) {
            return Err(Error::SymmetryDefect {
                class,
                defect: residue,
            });
        }
        hf = CMatrix::from_real(&hf.real_part())?;
    }
    Ok(hf)
}
