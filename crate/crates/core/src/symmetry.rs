//! Symmetry classes of unitaries, their involutions and projections.
//!
//! All classes are assumed to be in canonical form: time reversal with
//! `T^2 = 1` is complex conjugation (so the unitary is complex symmetric),
//! time reversal with `T^2 = -1` is `psi -> Z conj(psi)` with the fixed
//! symplectic form `Z = [[0, I], [-I, 0]]`, and the chiral grading is
//! `Gamma = diag(I, -I)`. Bringing a physical symmetry into this form is a
//! change of basis the caller performs.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{eigvalsh, inverse, spectral_norm, CMatrix, ONE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymmetryClass {
    /// No structure beyond unitarity.
    GenericA,
    /// `U^T = U`.
    SymmetricAI,
    /// `U^# = U` with `X^# = -Z X^T Z`.
    SelfDualAII,
    /// `Gamma U Gamma = U^dagger`.
    ChiralAIII,
}

impl SymmetryClass {
    pub const ALL: [SymmetryClass; 4] = [
        SymmetryClass::GenericA,
        SymmetryClass::SymmetricAI,
        SymmetryClass::SelfDualAII,
        SymmetryClass::ChiralAIII,
    ];

    /// Short lowercase tag used on the command line and in CSV output.
    pub fn tag(self) -> &'static str {
        match self {
            SymmetryClass::GenericA => "a",
            SymmetryClass::SymmetricAI => "ai",
            SymmetryClass::SelfDualAII => "aii",
            SymmetryClass::ChiralAIII => "aiii",
        }
    }

    pub fn requires_even_dimension(self) -> bool {
        matches!(self, SymmetryClass::SelfDualAII | SymmetryClass::ChiralAIII)
    }
}

impl fmt::Display for SymmetryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymmetryClass::GenericA => "A",
            SymmetryClass::SymmetricAI => "AI",
            SymmetryClass::SelfDualAII => "AII",
            SymmetryClass::ChiralAIII => "AIII",
        })
    }
}

impl FromStr for SymmetryClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" | "generic" => Ok(SymmetryClass::GenericA),
            "ai" | "symmetric" => Ok(SymmetryClass::SymmetricAI),
            "aii" | "selfdual" | "self-dual" => Ok(SymmetryClass::SelfDualAII),
            "aiii" | "chiral" => Ok(SymmetryClass::ChiralAIII),
            other => Err(Error::InvalidParameter(format!(
                "unknown symmetry class `{other}`"
            ))),
        }
    }
}

/// The fixed matrices a dimension-`n` problem needs: the grading `Gamma`
/// and the symplectic form `Z` (both only for even `n`).
#[derive(Clone, Debug)]
pub struct SymmetryContext {
    n: usize,
    gamma: Option<CMatrix>,
    zmat: Option<CMatrix>,
}

impl SymmetryContext {
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "dimension must be positive");
        if !n.is_multiple_of(2) {
            return SymmetryContext {
                n,
                gamma: None,
                zmat: None,
            };
        }
        let h = n / 2;
        let gamma = CMatrix::from_fn(n, |(i, j)| match (i == j, i < h) {
            (true, true) => ONE,
            (true, false) => -ONE,
            _ => 0.0.into(),
        });
        let zmat = CMatrix::from_fn(n, |(i, j)| {
            if i < h && j == i + h {
                ONE
            } else if i >= h && j + h == i {
                -ONE
            } else {
                0.0.into()
            }
        });
        SymmetryContext {
            n,
            gamma: Some(gamma),
            zmat: Some(zmat),
        }
    }

    /// Context for `class`, rejecting odd dimensions where they are not allowed.
    pub fn for_class(class: SymmetryClass, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        if class.requires_even_dimension() && !n.is_multiple_of(2) {
            return Err(Error::OddDimension { class, n });
        }
        Ok(Self::new(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `diag(I_{n/2}, -I_{n/2})`.
    pub fn gamma(&self) -> Result<&CMatrix> {
        self.gamma.as_ref().ok_or(Error::OddDimension {
            class: SymmetryClass::ChiralAIII,
            n: self.n,
        })
    }

    /// `[[0, I], [-I, 0]]`.
    pub fn zmat(&self) -> Result<&CMatrix> {
        self.zmat.as_ref().ok_or(Error::OddDimension {
            class: SymmetryClass::SelfDualAII,
            n: self.n,
        })
    }

    /// Checks that `m` matches this context and that `class` is admissible.
    pub fn check(&self, class: SymmetryClass, m: &CMatrix) -> Result<()> {
        if m.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: m.n(),
            });
        }
        if class.requires_even_dimension() && !self.n.is_multiple_of(2) {
            return Err(Error::OddDimension { class, n: self.n });
        }
        Ok(())
    }
}

/// Unitarity and class defects of a matrix, both in the spectral norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualReport {
    /// `||U^dagger U - I||_2`.
    pub unitarity: f64,
    /// Class relation defect; 0 for class A.
    pub symmetry: f64,
}

// Gamma X Gamma flips the sign of the off-diagonal blocks; no arithmetic.
pub(crate) fn gamma_conj(x: &CMatrix) -> CMatrix {
    let h = x.n() / 2;
    CMatrix::from_fn(x.n(), |(i, j)| {
        if (i < h) == (j < h) {
            x[(i, j)]
        } else {
            -x[(i, j)]
        }
    })
}

// -Z X^T Z = [[D^T, -B^T], [-C^T, A^T]] for X = [[A, B], [C, D]].
fn dual_unchecked(x: &CMatrix) -> CMatrix {
    let h = x.n() / 2;
    let swap = |k: usize| if k < h { k + h } else { k - h };
    CMatrix::from_fn(x.n(), |(i, j)| {
        let v = x[(swap(j), swap(i))];
        if (i < h) == (j < h) {
            v
        } else {
            -v
        }
    })
}

/// The dual `X^# = -Z X^T Z`.
pub fn dual(x: &CMatrix, ctx: &SymmetryContext) -> Result<CMatrix> {
    ctx.check(SymmetryClass::SelfDualAII, x)?;
    Ok(dual_unchecked(x))
}

/// Defect of `a - b` for the relation a class imposes on a unitary.
fn unitary_relation_defect(u: &CMatrix, class: SymmetryClass) -> f64 {
    match class {
        SymmetryClass::GenericA => 0.0,
        SymmetryClass::SymmetricAI => spectral_norm(&(u - &u.transpose())),
        SymmetryClass::SelfDualAII => spectral_norm(&(u - &dual_unchecked(u))),
        SymmetryClass::ChiralAIII => spectral_norm(&(&gamma_conj(u) - &u.adjoint())),
    }
}

pub fn residual(
    u: &CMatrix,
    class: SymmetryClass,
    ctx: &SymmetryContext,
) -> Result<ResidualReport> {
    ctx.check(class, u)?;
    let unitarity = spectral_norm(&(&(&u.adjoint() * u) - &CMatrix::identity(u.n())));
    Ok(ResidualReport {
        unitarity,
        symmetry: unitary_relation_defect(u, class),
    })
}

/// Averaging projection onto the class relation of a unitary:
/// `(U + U^T)/2`, `(U + U^#)/2` or `(U + Gamma U^dagger Gamma)/2`.
pub fn enforce_unitary_symmetry(
    u: &CMatrix,
    class: SymmetryClass,
    ctx: &SymmetryContext,
) -> Result<CMatrix> {
    ctx.check(class, u)?;
    Ok(enforce_unitary_unchecked(u, class))
}

pub(crate) fn enforce_unitary_unchecked(u: &CMatrix, class: SymmetryClass) -> CMatrix {
    match class {
        SymmetryClass::GenericA => u.clone(),
        SymmetryClass::SymmetricAI => (u + &u.transpose()).scale_real(0.5),
        SymmetryClass::SelfDualAII => (u + &dual_unchecked(u)).scale_real(0.5),
        SymmetryClass::ChiralAIII => (u + &gamma_conj(&u.adjoint())).scale_real(0.5),
    }
}

/// Projects onto anti-Hermitian matrices, then onto the class relation a
/// logarithm must satisfy (`H^T = H`, `H^# = H`, or `Gamma H Gamma = -H`).
/// Every relation holds exactly in floating point on the output.
pub fn enforce_log_symmetry(
    h: &CMatrix,
    class: SymmetryClass,
    ctx: &SymmetryContext,
) -> Result<CMatrix> {
    ctx.check(class, h)?;
    Ok(enforce_log_unchecked(h, class))
}

pub(crate) fn enforce_log_unchecked(h: &CMatrix, class: SymmetryClass) -> CMatrix {
    let anti = (h - &h.adjoint()).scale_real(0.5);
    match class {
        SymmetryClass::GenericA => anti,
        SymmetryClass::SymmetricAI => (&anti + &anti.transpose()).scale_real(0.5),
        SymmetryClass::SelfDualAII => (&anti + &dual_unchecked(&anti)).scale_real(0.5),
        SymmetryClass::ChiralAIII => {
            let k = anti.n() / 2;
            CMatrix::from_fn(anti.n(), |(i, j)| {
                if (i < k) == (j < k) {
                    0.0.into()
                } else {
                    anti[(i, j)]
                }
            })
        }
    }
}

/// Defect of the class relation for a logarithm (anti-Hermitian part excluded).
pub fn log_relation_defect(
    h: &CMatrix,
    class: SymmetryClass,
    ctx: &SymmetryContext,
) -> Result<f64> {
    ctx.check(class, h)?;
    Ok(match class {
        SymmetryClass::GenericA => 0.0,
        SymmetryClass::SymmetricAI => spectral_norm(&(h - &h.transpose())),
        SymmetryClass::SelfDualAII => spectral_norm(&(h - &dual_unchecked(h))),
        SymmetryClass::ChiralAIII => spectral_norm(&(&gamma_conj(h) + h)),
    })
}

/// One Newton step toward the unitary polar factor: `(V + (V^dagger)^{-1}) / 2`.
pub fn unitarize_step(v: &CMatrix) -> Result<CMatrix> {
    let inv_adj = inverse(&v.adjoint())?;
    Ok((v + &inv_adj).scale_real(0.5))
}

const INDEX_INPUT_TOL: f64 = 1e-6;
const SIGNATURE_TOL: f64 = 1e-8;

/// The chiral index `sig(U Gamma) / 2`.
///
/// For a chiral unitary `U Gamma` is Hermitian and unitary, so its
/// eigenvalues are `+-1` and the index is an integer. A nonzero index rules
/// out any square root or logarithm with the chiral structure.
pub fn aiii_index(u: &CMatrix, ctx: &SymmetryContext) -> Result<i64> {
    let rep = residual(u, SymmetryClass::ChiralAIII, ctx)?;
    if rep.unitarity > INDEX_INPUT_TOL || rep.symmetry > INDEX_INPUT_TOL {
        return Err(Error::NotChiral {
            unitarity: rep.unitarity,
            symmetry: rep.symmetry,
        });
    }
    let k = u.n() / 2;
    let signs: Vec<_> = (0..u.n()).map(|j| if j < k { ONE } else { -ONE }).collect();
    let ug = u.scale_columns(&signs);
    let herm = (&ug + &ug.adjoint()).scale_real(0.5);
    let ev = eigvalsh(&herm)?;
    let smallest = ev.iter().fold(f64::INFINITY, |m, x| m.min(x.abs()));
    if smallest < SIGNATURE_TOL {
        return Err(Error::AmbiguousSignature { smallest });
    }
    let pos = ev.iter().filter(|&&x| x > 0.0).count() as i64;
    let neg = ev.len() as i64 - pos;
    Ok((pos - neg) / 2)
}
