//! Seeded test unitaries with a prescribed gap at `-1`, chiral unitaries
//! with a nonzero index, and first-order Trotter products of periodic
//! drives.
//!
//! Randomness comes from ChaCha20. A `(seed, stream)` pair names an
//! independent generator: [`seeded_rng`] seeds from the 64-bit `seed` and
//! selects `stream` as the ChaCha stream. Benchmark trial `k` uses stream `k`
//! of the master seed, so results do not depend on thread count or on the
//! order in which trials run.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use ndarray::Array2;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{eigh, exp_i_hermitian, qr_orthogonal, qr_unitary, CMatrix, C64};
use crate::symmetry::{
    dual, enforce_unitary_symmetry, unitarize_step, SymmetryClass, SymmetryContext,
};

pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Where the spectrum sits relative to `-1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapSpec {
    /// Arc distance from `-1` to the nearest eigenvalue, in `(0, pi)`.
    pub gap: f64,
    /// Number of eigenvalues placed exactly at arc distance `gap`; half at
    /// `+(pi - gap)`, half at `-(pi - gap)`.
    pub pinned: usize,
    /// Build a root with half the phases and return its square, computed by
    /// matrix multiplication.
    pub squared: bool,
}

impl GapSpec {
    pub fn new(gap: f64) -> Self {
        GapSpec {
            gap,
            pinned: 4,
            squared: false,
        }
    }

    pub fn with_pinned(mut self, pinned: usize) -> Self {
        self.pinned = pinned;
        self
    }

    pub fn squared(mut self) -> Self {
        self.squared = true;
        self
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if !(self.gap > 0.0 && self.gap < PI) {
            return Err(Error::InvalidParameter(format!(
                "gap must lie in (0, pi), got {}",
                self.gap
            )));
        }
        if self.pinned < 2 || !self.pinned.is_multiple_of(2) || self.pinned > n {
            return Err(Error::InvalidParameter(format!(
                "pinned must be even, at least 2 and at most n = {n}, got {}",
                self.pinned
            )));
        }
        Ok(())
    }
}

/// A generated unitary together with its eigendecomposition, known by
/// construction: `u ~ w diag(e^{i phases}) w^dagger`.
#[derive(Clone, Debug)]
pub struct GappedSample {
    pub u: CMatrix,
    pub w: CMatrix,
    pub phases: Vec<f64>,
    pub class: SymmetryClass,
}

impl GappedSample {
    /// `w diag(f(phase)) w^dagger`.
    pub fn spectral(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let d: Vec<C64> = self.phases.iter().map(|&a| f(a)).collect();
        self.w.sandwich_diag(&d)
    }

    /// Principal square root.
    pub fn sqrt_oracle(&self) -> CMatrix {
        self.spectral(|a| C64::from_polar(1.0, a / 2.0))
    }

    /// Principal logarithm, anti-Hermitian.
    pub fn log_oracle(&self) -> CMatrix {
        self.spectral(|a| C64::new(0.0, a))
    }

    /// Arc distance from `-1` to the constructed spectrum.
    pub fn gap(&self) -> f64 {
        self.phases
            .iter()
            .map(|a| PI - a.abs())
            .fold(f64::INFINITY, f64::min)
    }
}

/// [`random_gapped_sample`] without the oracle.
pub fn random_gapped_unitary(
    class: SymmetryClass,
    n: usize,
    spec: GapSpec,
    seed: u64,
) -> Result<CMatrix> {
    Ok(random_gapped_sample(class, n, spec, seed)?.u)
}

/// Random unitary of class `class` whose spectrum avoids the arc of length
/// `2 gap` around `-1`, with `spec.pinned` eigenvalues on its boundary.
///
/// Free phases are uniform on `(-pi + gap, pi - gap)`.
///
/// * A: `Q D Q^dagger` with Haar `Q`.
/// * AI: `Q D Q^T` with Haar real orthogonal `Q`.
/// * AII: a random self-dual Hermitian matrix fixes Kramers pairs of
///   eigenvectors; each pair shares one phase.
/// * AIII: `Q D Q^dagger` with `Q = diag(Q_1, Q_2)` and `D` built from
///   rotation blocks acting on coordinates `j` and `j + n/2`.
///
/// The output is projected onto the class relation, which holds exactly.
pub fn random_gapped_sample(
    class: SymmetryClass,
    n: usize,
    spec: GapSpec,
    seed: u64,
) -> Result<GappedSample> {
    random_gapped_sample_with(class, n, spec, &mut seeded_rng(seed, 0))
}

pub fn random_gapped_sample_with(
    class: SymmetryClass,
    n: usize,
    spec: GapSpec,
    rng: &mut impl Rng,
) -> Result<GappedSample> {
    let ctx = SymmetryContext::for_class(class, n)?;
    spec.validate(n)?;
    let edge = PI - spec.gap;
    // one phase per independent slot: eigenvalue, Kramers pair or rotation block
    let slots = if class.requires_even_dimension() {
        n / 2
    } else {
        n
    };
    let pinned_slots = if class.requires_even_dimension() {
        spec.pinned / 2
    } else {
        spec.pinned
    };
    let mut theta: Vec<f64> = (0..slots)
        .map(|_| edge * (2.0 * rng.random::<f64>() - 1.0))
        .collect();
    for (k, t) in theta.iter_mut().take(pinned_slots).enumerate() {
        *t = if k % 2 == 0 { edge } else { -edge };
    }
    let scale = if spec.squared { 0.5 } else { 1.0 };

    let (w, phases) = match class {
        SymmetryClass::GenericA => (haar_unitary(n, rng)?, theta.clone()),
        SymmetryClass::SymmetricAI => (
            CMatrix::from_real(&haar_orthogonal(n, rng)?)?,
            theta.clone(),
        ),
        SymmetryClass::SelfDualAII => {
            let w = kramers_basis(n, &ctx, rng)?;
            let phases = theta.iter().flat_map(|&t| [t, t]).collect();
            (w, phases)
        }
        SymmetryClass::ChiralAIII => {
            let m = n / 2;
            let q1 = haar_unitary(m, rng)?;
            let q2 = haar_unitary(m, rng)?;
            // rotation by theta on (e_j, e_{j+m}) has eigenvectors
            // (e_j -+ i e_{j+m}) / sqrt 2 for e^{+-i theta}
            let w = CMatrix::from_fn(n, |(i, j)| {
                let col = j % m;
                let sign = if j < m { -1.0 } else { 1.0 };
                if i < m {
                    q1[(i, col)] * FRAC_1_SQRT_2
                } else {
                    q2[(i - m, col)] * C64::new(0.0, sign * FRAC_1_SQRT_2)
                }
            });
            let phases = theta
                .iter()
                .copied()
                .chain(theta.iter().map(|t| -t))
                .collect();
            (w, phases)
        }
    };

    let build = |phases: &[f64]| -> Result<CMatrix> {
        let d: Vec<C64> = phases
            .iter()
            .map(|&a| C64::from_polar(1.0, scale * a))
            .collect();
        let raw = match class {
            SymmetryClass::SymmetricAI => &w.scale_columns(&d) * &w.transpose(),
            _ => w.sandwich_diag(&d),
        };
        enforce_unitary_symmetry(&raw, class, &ctx)
    };
    let mut u = build(&phases)?;
    if spec.squared {
        u = enforce_unitary_symmetry(&(&u * &u), class, &ctx)?;
    }
    Ok(GappedSample {
        u,
        w,
        phases,
        class,
    })
}

fn gaussian_complex(n: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(n, |_| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) * FRAC_1_SQRT_2
    })
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phase
/// of `R`'s diagonal moved into `Q`.
pub fn haar_unitary(n: usize, rng: &mut impl Rng) -> Result<CMatrix> {
    qr_unitary(&gaussian_complex(n, rng))
}

/// Haar-distributed real orthogonal matrix.
pub fn haar_orthogonal(n: usize, rng: &mut impl Rng) -> Result<Array2<f64>> {
    let g = Array2::from_shape_fn((n, n), |_| rng.sample::<f64, _>(StandardNormal));
    qr_orthogonal(&g)
}

/// Random Hermitian matrix with unit-variance entries, scaled by `1/sqrt(n)`.
pub fn random_hermitian(n: usize, rng: &mut impl Rng) -> CMatrix {
    let g = gaussian_complex(n, rng);
    (&g + &g.adjoint()).scale_real(0.5 / (n as f64).sqrt())
}

/// Random Hermitian matrix `K` of the kind whose exponentials `e^{iK}`
/// preserve the class: real symmetric (AI), self-dual (AII), `Gamma`-odd
/// (AIII) or unrestricted (A).
pub fn random_structured_hermitian(
    class: SymmetryClass,
    n: usize,
    ctx: &SymmetryContext,
    rng: &mut impl Rng,
) -> Result<CMatrix> {
    ctx.check(class, &CMatrix::zeros(n))?;
    let h = random_hermitian(n, rng);
    Ok(match class {
        SymmetryClass::GenericA => h,
        SymmetryClass::SymmetricAI => CMatrix::from_real(&h.real_part())?,
        SymmetryClass::SelfDualAII => (&h + &dual(&h, ctx)?).scale_real(0.5),
        SymmetryClass::ChiralAIII => {
            let m = n / 2;
            CMatrix::from_fn(n, |(i, j)| {
                if (i < m) == (j < m) {
                    C64::new(0.0, 0.0)
                } else {
                    h[(i, j)]
                }
            })
        }
    })
}

// Eigenvectors of a random self-dual Hermitian matrix; columns 2k and 2k+1
// span one Kramers pair.
fn kramers_basis(n: usize, ctx: &SymmetryContext, rng: &mut impl Rng) -> Result<CMatrix> {
    let k = random_structured_hermitian(SymmetryClass::SelfDualAII, n, ctx, rng)?;
    Ok(eigh(&k)?.0)
}

/// A chiral unitary with nonzero index.
///
/// `n = 2` gives `Gamma` (index 1). For larger `n` the result is
/// `Q D Q^dagger` with `Q = diag(Q_1, Q_2)` Haar and `D` made of rotation
/// blocks on the pairs `(j, j + n/2)` except the last pair, which carries
/// `diag(1, -1)` or `diag(-1, 1)`: index `+1` or `-1` depending on the parity
/// of `seed`.
pub fn aiii_obstructed_unitary(n: usize, seed: u64) -> Result<CMatrix> {
    let ctx = SymmetryContext::for_class(SymmetryClass::ChiralAIII, n)?;
    if n == 2 {
        return Ok(ctx.gamma()?.clone());
    }
    let mut rng = seeded_rng(seed, 0);
    let m = n / 2;
    let q1 = haar_unitary(m, &mut rng)?;
    let q2 = haar_unitary(m, &mut rng)?;
    let sign = if seed.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut d = Array2::<C64>::zeros((n, n));
    for j in 0..m - 1 {
        let t: f64 = PI * (2.0 * rng.random::<f64>() - 1.0);
        let (c, s) = (t.cos(), t.sin());
        d[[j, j]] = c.into();
        d[[j, j + m]] = (-s).into();
        d[[j + m, j]] = s.into();
        d[[j + m, j + m]] = c.into();
    }
    d[[m - 1, m - 1]] = sign.into();
    d[[n - 1, n - 1]] = (-sign).into();
    let q = CMatrix::from_fn(n, |(i, j)| match (i < m, j < m) {
        (true, true) => q1[(i, j)],
        (false, false) => q2[(i - m, j - m)],
        _ => C64::new(0.0, 0.0),
    });
    let u = &(&q * &CMatrix::from_array(d)?) * &q.adjoint();
    enforce_unitary_symmetry(&u, SymmetryClass::ChiralAIII, &ctx)
}

/// Samples `H(t_1), ..., H(t_M)` of a `period`-periodic Hamiltonian at
/// `t_j = j period / M`.
#[derive(Clone, Debug)]
pub struct DriveSpec {
    pub n: usize,
    pub period: f64,
    pub samples: Vec<CMatrix>,
    pub declared: SymmetryClass,
}

const DRIVE_TOL: f64 = 1e-13;

impl DriveSpec {
    pub fn from_fn(
        n: usize,
        steps: usize,
        period: f64,
        declared: SymmetryClass,
        h: impl Fn(f64) -> CMatrix,
    ) -> Self {
        let samples = (1..=steps)
            .map(|j| h(j as f64 * period / steps as f64))
            .collect();
        DriveSpec {
            n,
            period,
            samples,
            declared,
        }
    }

    pub fn steps(&self) -> usize {
        self.samples.len()
    }

    /// Checks that every sample is Hermitian and that the declared relation
    /// holds between samples.
    ///
    /// `t_j` and `T - t_j` are samples `j - 1` and `M - j - 1`; the last
    /// sample (`t = T`, equivalently `0`) is paired with itself. AI requires
    /// `H(T - t) = conj H(t)`, AIII requires `Gamma H(t) Gamma = -H(-t)`.
    pub fn validate(&self) -> Result<()> {
        if !(self.period > 0.0 && self.period.is_finite()) {
            return Err(Error::InvalidParameter("period must be positive".into()));
        }
        if self.samples.is_empty() {
            return Err(Error::InvalidParameter(
                "a drive needs at least one sample".into(),
            ));
        }
        let ctx = SymmetryContext::for_class(self.declared, self.n)?;
        for h in &self.samples {
            ctx.check(self.declared, h)?;
            let defect = (h - &h.adjoint()).max_abs();
            if defect > DRIVE_TOL * h.max_abs().max(1.0) {
                return Err(Error::NotHermitian { defect });
            }
        }
        let m = self.samples.len();
        let partner = |k: usize| if k + 1 == m { k } else { m - 2 - k };
        for (k, h) in self.samples.iter().enumerate() {
            let other = &self.samples[partner(k)];
            let defect = match self.declared {
                SymmetryClass::GenericA => 0.0,
                SymmetryClass::SymmetricAI => (other - &h.conj()).max_abs(),
                SymmetryClass::ChiralAIII => {
                    let g = ctx.gamma()?;
                    (&(&(g * h) * g) + other).max_abs()
                }
                SymmetryClass::SelfDualAII => (other - &dual(h, &ctx)?).max_abs(),
            };
            if defect > DRIVE_TOL * h.max_abs().max(1.0) {
                return Err(Error::SymmetryDefect {
                    class: self.declared,
                    defect,
                });
            }
        }
        Ok(())
    }
}

/// Drive `H_0 + cos(wt) H_1 + sin(wt) H_2`, `w = 2 pi / period`, with `H_0`,
/// `H_1` real symmetric and `H_2` imaginary Hermitian, so that
/// `H(T - t) = conj H(t)`.
pub fn symmetric_drive(n: usize, steps: usize, period: f64, seed: u64) -> DriveSpec {
    let mut rng = seeded_rng(seed, 0);
    let h0 = CMatrix::from_real(&random_hermitian(n, &mut rng).real_part()).expect("finite");
    let h1 = CMatrix::from_real(&random_hermitian(n, &mut rng).real_part()).expect("finite");
    let h2 = random_hermitian(n, &mut rng);
    let h2 = (&h2 - &h2.conj()).scale_real(0.5);
    let w = 2.0 * PI / period;
    DriveSpec::from_fn(n, steps, period, SymmetryClass::SymmetricAI, |t| {
        &(&h0 + &h1.scale_real((w * t).cos())) + &h2.scale_real((w * t).sin())
    })
}

/// Drive `A_0 + cos(wt) A_1 + sin(wt) B_1` with `A_0`, `A_1` anticommuting
/// with `Gamma` and `B_1` commuting with it, so that
/// `Gamma H(t) Gamma = -H(-t)`. `n` must be even.
pub fn chiral_drive(n: usize, steps: usize, period: f64, seed: u64) -> Result<DriveSpec> {
    let ctx = SymmetryContext::for_class(SymmetryClass::ChiralAIII, n)?;
    let mut rng = seeded_rng(seed, 0);
    let a0 = random_structured_hermitian(SymmetryClass::ChiralAIII, n, &ctx, &mut rng)?;
    let a1 = random_structured_hermitian(SymmetryClass::ChiralAIII, n, &ctx, &mut rng)?;
    let b1 = random_hermitian(n, &mut rng);
    let b1 = &b1 - &off_diagonal_blocks(&b1);
    let w = 2.0 * PI / period;
    Ok(DriveSpec::from_fn(
        n,
        steps,
        period,
        SymmetryClass::ChiralAIII,
        |t| &(&a0 + &a1.scale_real((w * t).cos())) + &b1.scale_real((w * t).sin()),
    ))
}

// The off-diagonal blocks of x.
fn off_diagonal_blocks(x: &CMatrix) -> CMatrix {
    let m = x.n() / 2;
    CMatrix::from_fn(x.n(), |(i, j)| {
        if (i < m) == (j < m) {
            C64::new(0.0, 0.0)
        } else {
            x[(i, j)]
        }
    })
}

/// First-order Trotter product
/// `e^{-i tau H(t_M)} ... e^{-i tau H(t_1)}`, `tau = period / M`, latest
/// factor leftmost. Each factor comes from a Hermitian eigendecomposition.
pub fn floquet_operator(drive: &DriveSpec) -> Result<CMatrix> {
    drive.validate()?;
    let tau = drive.period / drive.steps() as f64;
    let mut u = CMatrix::identity(drive.n);
    for h in &drive.samples {
        u = &exp_i_hermitian(h, -tau)? * &u;
    }
    Ok(u)
}

/// Perturbs `u` to `E u E`, `E = exp(i eps K / 2)` with `K` a random
/// Hermitian matrix of the class's kind, then restores the class relation
/// and takes one polar step. Moves eigenvalues off `-1` while keeping the
/// symmetry.
pub fn nudge(
    u: &CMatrix,
    class: SymmetryClass,
    ctx: &SymmetryContext,
    eps: f64,
    seed: u64,
) -> Result<CMatrix> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "nudge size must be positive, got {eps}"
        )));
    }
    ctx.check(class, u)?;
    let mut rng = seeded_rng(seed, 0);
    let k = random_structured_hermitian(class, u.n(), ctx, &mut rng)?;
    let e = exp_i_hermitian(&k, eps / 2.0)?;
    let v = &(&e * u) * &e;
    enforce_unitary_symmetry(
        &unitarize_step(&enforce_unitary_symmetry(&v, class, ctx)?)?,
        class,
        ctx,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::spectral_norm;
    use crate::symmetry::{aiii_index, residual};

    #[test]
    fn spec_validation() {
        assert!(GapSpec::new(0.0).validate(8).is_err());
        assert!(GapSpec::new(PI).validate(8).is_err());
        assert!(GapSpec::new(0.1).with_pinned(3).validate(8).is_err());
        assert!(GapSpec::new(0.1).with_pinned(10).validate(8).is_err());
        assert!(GapSpec::new(0.1).with_pinned(0).validate(8).is_err());
        assert!(GapSpec::new(0.1).validate(8).is_ok());
    }

    #[test]
    fn fully_pinned_pair() {
        let spec = GapSpec::new(PI / 2.0).with_pinned(2);
        let s = random_gapped_sample(SymmetryClass::GenericA, 2, spec, 3).unwrap();
        let mut p = s.phases.clone();
        p.sort_by(f64::total_cmp);
        assert_eq!(p, vec![-PI / 2.0, PI / 2.0]);
        // trace of a matrix similar to diag(i, -i)
        let tr = s.u[(0, 0)] + s.u[(1, 1)];
        assert!(tr.norm() < 1e-15);
    }

    #[test]
    fn deterministic_per_seed() {
        for class in SymmetryClass::ALL {
            let a = random_gapped_unitary(class, 6, GapSpec::new(0.2), 11).unwrap();
            let b = random_gapped_unitary(class, 6, GapSpec::new(0.2), 11).unwrap();
            let c = random_gapped_unitary(class, 6, GapSpec::new(0.2), 12).unwrap();
            assert_eq!(a, b);
            assert_ne!(a, c);
        }
    }

    #[test]
    fn streams_differ() {
        let a: u64 = seeded_rng(5, 0).random();
        let b: u64 = seeded_rng(5, 1).random();
        assert_ne!(a, b);
        assert_eq!(a, seeded_rng(5, 0).random::<u64>());
    }

    #[test]
    fn samples_are_structured_and_match_oracle() {
        for class in SymmetryClass::ALL {
            for squared in [false, true] {
                let mut spec = GapSpec::new(1e-3);
                spec.squared = squared;
                let s = random_gapped_sample(class, 8, spec, 7).unwrap();
                let ctx = SymmetryContext::new(8);
                let rep = residual(&s.u, class, &ctx).unwrap();
                assert!(rep.unitarity <= 1e-14, "{class} {rep:?}");
                assert_eq!(rep.symmetry, 0.0, "{class}");
                assert!((s.gap() - 1e-3).abs() < 1e-12);
                let oracle = s.spectral(|a| C64::from_polar(1.0, a));
                assert!(spectral_norm(&(&oracle - &s.u)) < 1e-13, "{class}");
            }
        }
    }

    #[test]
    fn chiral_samples_have_zero_index() {
        let ctx = SymmetryContext::new(8);
        for seed in 0..5 {
            let u = random_gapped_unitary(SymmetryClass::ChiralAIII, 8, GapSpec::new(0.4), seed)
                .unwrap();
            assert_eq!(aiii_index(&u, &ctx).unwrap(), 0);
        }
    }

    #[test]
    fn obstructed_indices() {
        let ctx2 = SymmetryContext::new(2);
        let g = aiii_obstructed_unitary(2, 0).unwrap();
        assert_eq!(&g, ctx2.gamma().unwrap());
        assert_eq!(aiii_index(&g, &ctx2).unwrap(), 1);
        let ctx4 = SymmetryContext::new(4);
        assert_eq!(
            aiii_index(&aiii_obstructed_unitary(4, 0).unwrap(), &ctx4).unwrap(),
            1
        );
        assert_eq!(
            aiii_index(&aiii_obstructed_unitary(4, 1).unwrap(), &ctx4).unwrap(),
            -1
        );
        assert!(aiii_obstructed_unitary(3, 0).is_err());
    }

    #[test]
    fn constant_drive_matches_exponential() {
        let mut rng = seeded_rng(1, 0);
        let h0 = random_hermitian(5, &mut rng);
        let drive = DriveSpec::from_fn(5, 16, 1.0, SymmetryClass::GenericA, |_| h0.clone());
        let u = floquet_operator(&drive).unwrap();
        let exact = exp_i_hermitian(&h0, -1.0).unwrap();
        assert!(spectral_norm(&(&u - &exact)) < 1e-14);
    }

    #[test]
    fn drives_validate() {
        symmetric_drive(6, 10, 1.0, 2).validate().unwrap();
        chiral_drive(6, 10, 2.0, 2).unwrap().validate().unwrap();
        let mut bad = symmetric_drive(6, 10, 1.0, 2);
        bad.samples.swap(0, 3);
        assert!(matches!(bad.validate(), Err(Error::SymmetryDefect { .. })));
        let mut rng = seeded_rng(0, 0);
        let g = gaussian_complex(4, &mut rng);
        let non_herm = DriveSpec::from_fn(4, 3, 1.0, SymmetryClass::GenericA, |_| g.clone());
        assert!(matches!(
            floquet_operator(&non_herm),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn nudge_keeps_structure() {
        let ctx = SymmetryContext::new(4);
        for class in SymmetryClass::ALL {
            let u = random_gapped_unitary(class, 4, GapSpec::new(0.3), 1).unwrap();
            let v = nudge(&u, class, &ctx, 1e-6, 9).unwrap();
            let rep = residual(&v, class, &ctx).unwrap();
            assert!(
                rep.unitarity < 1e-14 && rep.symmetry == 0.0,
                "{class} {rep:?}"
            );
            let moved = spectral_norm(&(&v - &u));
            assert!(moved > 1e-9 && moved < 1e-5, "{class} {moved:e}");
        }
        assert!(nudge(&CMatrix::identity(4), SymmetryClass::GenericA, &ctx, 0.0, 1).is_err());
    }
}
