use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{frobenius_norm, inverse, spectral_norm, CMatrix, EPS};
use crate::symmetry::{
    aiii_index, enforce_unitary_unchecked, residual, unitarize_step, SymmetryClass, SymmetryContext,
};

/// Largest unitarity or class defect accepted on input.
pub const INPUT_TOL: f64 = 1e-6;

const STAGNATION_FLOOR: f64 = 1e-8;

/// Cooperative cancellation flag, checked once per iteration.
#[derive(Clone, Debug, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::Relaxed)
    }
}

/// Whether the iterates are pulled back to the unitary group and the
/// symmetry class after each step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum IterationMode {
    #[default]
    Corrected,
    /// The bare coupled iteration. Kept as a reference: its unitarity defect
    /// grows steadily near `-1`.
    Uncorrected,
}

#[derive(Clone, Debug)]
pub struct SqrtOptions {
    pub max_iters: usize,
    /// Relative Frobenius change at which the iteration stops. `None` means
    /// `10 * n * eps`.
    pub conv_tol: Option<f64>,
    /// Apply the polar step and symmetry projection every this many iterations.
    pub enforce_every: usize,
    pub mode: IterationMode,
    /// Record the spectral unitarity defect of every iterate (costs one SVD
    /// per iteration).
    pub record_trace: bool,
    pub cancel: Option<CancelToken>,
}

impl Default for SqrtOptions {
    fn default() -> Self {
        SqrtOptions {
            max_iters: 50,
            conv_tol: None,
            enforce_every: 1,
            mode: IterationMode::Corrected,
            record_trace: false,
            cancel: None,
        }
    }
}

impl SqrtOptions {
    fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter(
                "max_iters must be at least 1".into(),
            ));
        }
        if self.enforce_every == 0 {
            return Err(Error::InvalidParameter(
                "enforce_every must be at least 1".into(),
            ));
        }
        if let Some(tol) = self.conv_tol {
            if tol.is_nan() || tol <= 0.0 {
                return Err(Error::InvalidParameter("conv_tol must be positive".into()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct IterationRecord {
    /// `||Y_k - Y_{k-1}||_F / ||Y_k||_F`.
    pub change: f64,
    /// `||Y_k^dagger Y_k - I||_2`, when tracing is on.
    pub unitarity: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct SqrtOutcome {
    pub root: CMatrix,
    pub iterations: usize,
    pub trace: Vec<IterationRecord>,
}

/// One step of the coupled iteration
///
/// ```text
/// C  = (I + 8 (I + 3 Z Y)^{-1}) / 3
/// Y' = Y C
/// Z' = C Z
/// ```
///
/// For commuting scalars the factor is `(3 + zy) / (1 + 3 zy)`, which maps
/// the unit circle to itself.
pub fn coupled_step(y: &CMatrix, z: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    if y.n() != z.n() {
        return Err(Error::DimensionMismatch {
            expected: y.n(),
            found: z.n(),
        });
    }
    let n = y.n();
    let id = CMatrix::identity(n);
    let m = &id + &(z * y).scale_real(3.0);
    let inv = inverse(&m).map_err(|e| match e {
        Error::SingularMatrix => Error::SingularIteration,
        other => other,
    })?;
    let c = (&id + &inv.scale_real(8.0)).scale_real(1.0 / 3.0);
    Ok((y * &c, &c * z))
}

/// Validates the input of the structured square root and logarithm.
pub(crate) fn check_input(u: &CMatrix, class: SymmetryClass, ctx: &SymmetryContext) -> Result<()> {
    let rep = residual(u, class, ctx)?;
    if rep.unitarity.is_nan() || rep.unitarity > INPUT_TOL {
        return Err(Error::NotNearlyUnitary {
            unitarity: rep.unitarity,
        });
    }
    if rep.symmetry.is_nan() || rep.symmetry > INPUT_TOL {
        return Err(Error::SymmetryDefect {
            class,
            defect: rep.symmetry,
        });
    }
    if class == SymmetryClass::ChiralAIII {
        let index = aiii_index(u, ctx)?;
        if index != 0 {
            return Err(Error::ObstructionDetected { index });
        }
    }
    Ok(())
}

/// Principal square root of a nearly unitary matrix that keeps the result
/// unitary and in the same symmetry class.
///
/// Runs the coupled iteration from `Y = U, Z = I`; after every step both
/// iterates get one Newton polar step and are projected back onto the class
/// relation. Class AIII inputs with a nonzero chiral index are rejected
/// before iterating.
pub fn sqrt_structured(
    u: &CMatrix,
    class: SymmetryClass,
    ctx: &SymmetryContext,
    opts: &SqrtOptions,
) -> Result<CMatrix> {
    Ok(sqrt_structured_traced(u, class, ctx, opts)?.root)
}

/// [`sqrt_structured`] returning the iteration count and trace as well.
pub fn sqrt_structured_traced(
    u: &CMatrix,
    class: SymmetryClass,
    ctx: &SymmetryContext,
    opts: &SqrtOptions,
) -> Result<SqrtOutcome> {
    opts.validate()?;
    check_input(u, class, ctx)?;
    iterate(u, class, opts)
}

pub(crate) fn iterate(
    u: &CMatrix,
    class: SymmetryClass,
    opts: &SqrtOptions,
) -> Result<SqrtOutcome> {
    let n = u.n();
    let tol = opts.conv_tol.unwrap_or(10.0 * n as f64 * EPS);
    let id = CMatrix::identity(n);
    let mut y = u.clone();
    let mut z = id.clone();
    let mut trace = Vec::new();
    let mut prev_change = f64::INFINITY;
    let mut settled = false;
    let mut increases = 0;

    for k in 1..=opts.max_iters {
        if opts.cancel.as_ref().is_some_and(CancelToken::is_cancelled) {
            return Err(Error::Cancelled);
        }
        let (mut y1, mut z1) = coupled_step(&y, &z)?;
        if opts.mode == IterationMode::Corrected && k % opts.enforce_every == 0 {
            y1 = enforce_unitary_unchecked(&unitarize_step(&y1)?, class);
            z1 = enforce_unitary_unchecked(&unitarize_step(&z1)?, class);
        }
        let change = frobenius_norm(&(&y1 - &y)) / frobenius_norm(&y1);
        y = y1;
        z = z1;
        if !y.is_finite() || !z.is_finite() {
            return Err(Error::NonFinite);
        }
        trace.push(IterationRecord {
            change,
            unitarity: opts
                .record_trace
                .then(|| spectral_norm(&(&(&y.adjoint() * &y) - &id))),
        });

        if change <= tol {
            return Ok(SqrtOutcome {
                root: y,
                iterations: k,
                trace,
            });
        }
        // At rounding level the change stops decreasing; two consecutive
        // increases after that point mean there is nothing left to gain.
        if change < STAGNATION_FLOOR {
            settled = true;
        }
        if settled {
            if change > prev_change {
                increases += 1;
                if increases >= 2 {
                    return Ok(SqrtOutcome {
                        root: y,
                        iterations: k,
                        trace,
                    });
                }
            } else {
                increases = 0;
            }
        }
        prev_change = change;
    }
    Err(Error::MaxIterationsExceeded {
        iterations: opts.max_iters,
        last_change: prev_change,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{C64, ONE};

    fn scalar(z: C64) -> CMatrix {
        CMatrix::from_diag(&[z])
    }

    #[test]
    fn coupled_step_fixed_point() {
        let (y, z) = coupled_step(&scalar(ONE), &scalar(ONE)).unwrap();
        assert_eq!(y[(0, 0)], ONE);
        assert_eq!(z[(0, 0)], ONE);
    }

    #[test]
    fn coupled_step_keeps_unit_circle() {
        // (3 + i) / (1 + 3i) = (0.6 - 0.8i); times i gives 0.8 + 0.6i
        let (y, z) = coupled_step(&scalar(C64::new(0.0, 1.0)), &scalar(ONE)).unwrap();
        assert!((y[(0, 0)] - C64::new(0.8, 0.6)).norm() < 1e-15);
        assert!((z[(0, 0)] - C64::new(0.6, -0.8)).norm() < 1e-15);
        assert!((y[(0, 0)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn coupled_step_at_minus_one_swaps() {
        let (y, z) = coupled_step(&scalar(-ONE), &scalar(ONE)).unwrap();
        assert!((y[(0, 0)] - ONE).norm() < 1e-15);
        assert!((z[(0, 0)] + ONE).norm() < 1e-15);
    }

    #[test]
    fn coupled_step_detects_singular_shift() {
        let third = C64::new(-1.0 / 3.0, 0.0);
        assert_eq!(
            coupled_step(&scalar(third), &scalar(ONE)),
            Err(Error::SingularIteration)
        );
    }

    #[test]
    fn diagonal_minus_one_does_not_converge() {
        let u = CMatrix::from_diag(&[-ONE, ONE]);
        let ctx = SymmetryContext::new(2);
        let err = sqrt_structured(&u, SymmetryClass::GenericA, &ctx, &SqrtOptions::default())
            .unwrap_err();
        assert!(
            matches!(err, Error::MaxIterationsExceeded { iterations: 50, .. }),
            "{err:?}"
        );
    }

    #[test]
    fn identity_converges_immediately() {
        let ctx = SymmetryContext::new(3);
        let out = sqrt_structured_traced(
            &CMatrix::identity(3),
            SymmetryClass::GenericA,
            &ctx,
            &SqrtOptions::default(),
        )
        .unwrap();
        assert_eq!(out.iterations, 1);
        assert_eq!(out.root, CMatrix::identity(3));
    }

    #[test]
    fn options_are_validated() {
        let ctx = SymmetryContext::new(2);
        let id = CMatrix::identity(2);
        for opts in [
            SqrtOptions {
                max_iters: 0,
                ..Default::default()
            },
            SqrtOptions {
                enforce_every: 0,
                ..Default::default()
            },
            SqrtOptions {
                conv_tol: Some(0.0),
                ..Default::default()
            },
        ] {
            assert!(matches!(
                sqrt_structured(&id, SymmetryClass::GenericA, &ctx, &opts),
                Err(Error::InvalidParameter(_))
            ));
        }
    }

    #[test]
    fn cancellation_is_honoured() {
        let token = CancelToken::new();
        token.cancel();
        let opts = SqrtOptions {
            cancel: Some(token),
            ..Default::default()
        };
        let ctx = SymmetryContext::new(2);
        let u = CMatrix::from_diag(&[C64::new(0.0, 1.0), ONE]);
        assert_eq!(
            sqrt_structured(&u, SymmetryClass::GenericA, &ctx, &opts),
            Err(Error::Cancelled)
        );
    }

    #[test]
    fn rejects_non_unitary_and_asymmetric_input() {
        let ctx = SymmetryContext::new(2);
        let u = CMatrix::from_diag(&[C64::new(2.0, 0.0), ONE]);
        assert!(matches!(
            sqrt_structured(&u, SymmetryClass::GenericA, &ctx, &SqrtOptions::default()),
            Err(Error::NotNearlyUnitary { .. })
        ));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let rot = CMatrix::from_row_slice(2, &[s.into(), (-s).into(), s.into(), s.into()]).unwrap();
        assert!(matches!(
            sqrt_structured(
                &rot,
                SymmetryClass::SymmetricAI,
                &ctx,
                &SqrtOptions::default()
            ),
            Err(Error::SymmetryDefect { .. })
        ));
    }

    #[test]
    fn chiral_obstruction_fails_fast() {
        let ctx = SymmetryContext::new(2);
        let gamma = ctx.gamma().unwrap().clone();
        assert_eq!(
            sqrt_structured(
                &gamma,
                SymmetryClass::ChiralAIII,
                &ctx,
                &SqrtOptions::default()
            ),
            Err(Error::ObstructionDetected { index: 1 })
        );
    }
}
