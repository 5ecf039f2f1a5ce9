//! Randomized invariants over small dimensions.

mod common;

use std::f64::consts::PI;

use common::{dist, eigenvalues, sorted, unitarity};
use proptest::prelude::*;
use symlog::gen::{
    haar_unitary, nudge, random_gapped_sample, random_gapped_unitary, random_hermitian, seeded_rng,
    GapSpec,
};
use symlog::linalg::{eigh, frobenius_norm, inverse, qr_unitary, spectral_norm, svd};
use symlog::*;

const EPS: f64 = f64::EPSILON;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 64,
        ..ProptestConfig::default()
    }
}

fn class_strategy() -> impl Strategy<Value = SymmetryClass> {
    prop_oneof![
        Just(SymmetryClass::GenericA),
        Just(SymmetryClass::SymmetricAI),
        Just(SymmetryClass::SelfDualAII),
        Just(SymmetryClass::ChiralAIII),
    ]
}

fn tested_class() -> impl Strategy<Value = SymmetryClass> {
    prop_oneof![
        Just(SymmetryClass::GenericA),
        Just(SymmetryClass::SymmetricAI),
        Just(SymmetryClass::ChiralAIII)
    ]
}

fn gaussian(n: usize, seed: u64) -> CMatrix {
    use rand_distr::{Distribution, StandardNormal};
    let mut rng = seeded_rng(seed, 99);
    CMatrix::from_fn(n, |_| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        C64::new(re, im)
    })
}

// Unitary times diag(sigma) times unitary with singular values spread over
// [1, kappa].
fn conditioned(n: usize, kappa: f64, seed: u64) -> CMatrix {
    let mut rng = seeded_rng(seed, 7);
    let a = haar_unitary(n, &mut rng).unwrap();
    let b = haar_unitary(n, &mut rng).unwrap();
    let d: Vec<C64> = (0..n)
        .map(|j| kappa.powf(j as f64 / (n - 1).max(1) as f64).into())
        .collect();
    &a.scale_columns(&d) * &b
}

fn even(max_half: usize) -> impl Strategy<Value = usize> {
    (1..=max_half).prop_map(|k| 2 * k)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn norm_equivalence(n in 1usize..12, seed in any::<u64>()) {
        let a = gaussian(n, seed);
        let (s, f) = (spectral_norm(&a), frobenius_norm(&a));
        prop_assert!(s <= f * (1.0 + 1e-14));
        prop_assert!(f <= (n as f64).sqrt() * s * (1.0 + 1e-14));
    }

    #[test]
    fn inverse_residuals(n in 2usize..24, seed in any::<u64>()) {
        let a = gaussian(n, seed);
        let s = symlog::linalg::singular_values(&a).unwrap();
        prop_assume!(s[0] / s[n - 1] <= 1e6);
        let ai = inverse(&a).unwrap();
        prop_assert!(ai.is_finite());
        let id = CMatrix::identity(n);
        prop_assert!(frobenius_norm(&(&(&a * &ai) - &id)) <= 1e-10);
        prop_assert!(frobenius_norm(&(&(&ai * &a) - &id)) <= 1e-10);
    }

    #[test]
    fn inverse_residual_scales_with_condition(n in 2usize..24, logk in 0.0f64..8.0, seed in any::<u64>()) {
        let kappa = 10f64.powf(logk);
        let a = conditioned(n, kappa, seed);
        let ai = inverse(&a).unwrap();
        let id = CMatrix::identity(n);
        let bound = 10.0 * n as f64 * kappa * EPS;
        prop_assert!(frobenius_norm(&(&(&a * &ai) - &id)) <= bound);
        prop_assert!(frobenius_norm(&(&(&ai * &a) - &id)) <= bound);
    }

    #[test]
    fn eigh_and_svd_reconstruct(n in 1usize..=64, seed in any::<u64>()) {
        let h = random_hermitian(n, &mut seeded_rng(seed, 1));
        let (q, e) = eigh(&h).unwrap();
        let d: Vec<C64> = e.iter().map(|&x| x.into()).collect();
        prop_assert!(dist(&q.sandwich_diag(&d), &h) <= 1e-12);
        let a = gaussian(n, seed).scale_real(1.0 / (n as f64).sqrt());
        let f = svd(&a).unwrap();
        let s: Vec<C64> = f.s.iter().map(|&x| x.into()).collect();
        prop_assert!(f.u.is_finite() && f.v.is_finite());
        prop_assert!(dist(&(&f.u.scale_columns(&s) * &f.v.adjoint()), &a) <= 1e-12);
    }

    #[test]
    fn qr_is_idempotent_on_its_output(n in 1usize..20, seed in any::<u64>()) {
        let q = qr_unitary(&gaussian(n, seed)).unwrap();
        prop_assert!(unitarity(&q) <= 1e-13);
        prop_assert!(dist(&qr_unitary(&q).unwrap(), &q) <= 1e-13);
    }

    #[test]
    fn enforcement_is_idempotent(class in class_strategy(), n in even(6), seed in any::<u64>()) {
        let ctx = SymmetryContext::new(n);
        let x = gaussian(n, seed);
        let once = enforce_unitary_symmetry(&x, class, &ctx).unwrap();
        let twice = enforce_unitary_symmetry(&once, class, &ctx).unwrap();
        prop_assert!(dist(&once, &twice) <= 1e-15 * (1.0 + spectral_norm(&x)));
        let h = enforce_log_symmetry(&x, class, &ctx).unwrap();
        let h2 = enforce_log_symmetry(&h, class, &ctx).unwrap();
        prop_assert!(dist(&h, &h2) <= 1e-15 * (1.0 + spectral_norm(&x)));
    }

    #[test]
    fn enforcement_moves_by_half_the_defect(class in class_strategy(), n in even(6), seed in any::<u64>()) {
        let ctx = SymmetryContext::new(n);
        let u = haar_unitary(n, &mut seeded_rng(seed, 2)).unwrap();
        let defect = residual(&u, class, &ctx).unwrap().symmetry;
        let moved = dist(&enforce_unitary_symmetry(&u, class, &ctx).unwrap(), &u);
        prop_assert!(moved <= 0.5 * defect + 8.0 * EPS);
    }

    #[test]
    fn dual_is_an_isometric_involution(n in even(8), seed in any::<u64>()) {
        let ctx = SymmetryContext::new(n);
        let x = gaussian(n, seed);
        let d = dual(&x, &ctx).unwrap();
        prop_assert_eq!(dual(&d, &ctx).unwrap(), x.clone());
        prop_assert!((frobenius_norm(&d) - frobenius_norm(&x)).abs() <= 1e-14 * frobenius_norm(&x));
    }

    #[test]
    fn index_survives_block_conjugation(n in even(6), seed in any::<u64>(), obstructed in any::<bool>()) {
        let ctx = SymmetryContext::new(n);
        let u = if obstructed {
            symlog::gen::aiii_obstructed_unitary(n, seed).unwrap()
        } else {
            random_gapped_unitary(SymmetryClass::ChiralAIII, n, GapSpec::new(0.3).with_pinned(n.min(4)), seed).unwrap()
        };
        let before = aiii_index(&u, &ctx).unwrap();
        let mut rng = seeded_rng(seed, 3);
        let (q1, q2) = (haar_unitary(n / 2, &mut rng).unwrap(), haar_unitary(n / 2, &mut rng).unwrap());
        let m = n / 2;
        let q = CMatrix::from_fn(n, |(i, j)| match (i < m, j < m) {
            (true, true) => q1[(i, j)],
            (false, false) => q2[(i - m, j - m)],
            _ => C64::new(0.0, 0.0),
        });
        let v = &(&q * &u) * &q.adjoint();
        prop_assert_eq!(aiii_index(&v, &ctx).unwrap(), before);
    }

    #[test]
    fn index_is_constant_along_chiral_paths(n in even(5), seed in any::<u64>()) {
        let ctx = SymmetryContext::new(n);
        let u0 = symlog::gen::aiii_obstructed_unitary(n, seed).unwrap();
        let before = aiii_index(&u0, &ctx).unwrap();
        for (k, eps) in [0.1, 0.5, 1.0, 2.0].into_iter().enumerate() {
            let u = nudge(&u0, SymmetryClass::ChiralAIII, &ctx, eps, seed.wrapping_add(k as u64)).unwrap();
            prop_assert_eq!(aiii_index(&u, &ctx).unwrap(), before);
        }
    }

    #[test]
    fn polar_step_is_quadratic(n in 1usize..10, seed in any::<u64>(), size in 1e-6f64..1e-3) {
        let u = haar_unitary(n, &mut seeded_rng(seed, 4)).unwrap();
        let v = &u + &gaussian(n, seed).scale_real(size / (n as f64));
        let d0 = unitarity(&v);
        let d1 = unitarity(&unitarize_step(&v).unwrap());
        prop_assert!(d1 <= d0 * d0 + 10.0 * n as f64 * EPS, "{d0:e} -> {d1:e}");
    }

    #[test]
    fn corrected_iterates_stay_unitary(
        class in class_strategy(), n in even(5), gap in 1e-8f64..1.0, seed in any::<u64>(),
    ) {
        let ctx = SymmetryContext::new(n);
        let spec = GapSpec::new(gap).with_pinned(2);
        let s = random_gapped_sample(class, n, spec, seed).unwrap();
        let opts = SqrtOptions { record_trace: true, ..Default::default() };
        let out = sqrt_structured_traced(&s.u, class, &ctx, &opts).unwrap();
        let floor = 4.0 * n as f64 * EPS;
        let mut prev = unitarity(&s.u);
        for r in &out.trace {
            let cur = r.unitarity.unwrap();
            prop_assert!(cur <= (2.0 * prev).max(floor), "{prev:e} -> {cur:e}");
            prev = cur;
        }
        prop_assert!(unitarity(&out.root) <= 1e-12);
        let rep = residual(&out.root, class, &ctx).unwrap();
        prop_assert_eq!(rep.symmetry, 0.0);
        prop_assert!(dist(&(&out.root * &out.root), &s.u) <= 50.0 * n as f64 * EPS);
        prop_assert!(eigenvalues(&out.root).iter().all(|z| z.re >= -1e-12));
    }

    #[test]
    fn logarithm_branch_and_round_trip(
        class in class_strategy(), n in even(5), loggap in -12.0f64..0.0, seed in any::<u64>(),
    ) {
        let ctx = SymmetryContext::new(n);
        let u = random_gapped_unitary(class, n, GapSpec::new(10f64.powf(loggap)).with_pinned(2), seed).unwrap();
        let log = log_structured(&u, class, &ctx, &LogOptions::default()).unwrap();
        prop_assert_eq!(&log.h_anti.adjoint(), &log.h_anti.scale_real(-1.0));
        prop_assert_eq!(log_relation_defect(&log.h_anti, class, &ctx).unwrap(), 0.0);
        prop_assert!(eigenvalues(&log.h_anti).iter().all(|z| z.im > -PI - 1e-9 && z.im <= PI + 1e-9));
        prop_assert!(dist(&log.exp().unwrap(), &u) <= 1e-11);
    }

    #[test]
    fn sqrt_commutes_with_conjugation(n in 1usize..8, gap in 1e-3f64..1.0, seed in any::<u64>()) {
        let ctx = SymmetryContext::new(n);
        let pinned = if n >= 2 { 2 } else { 0 };
        prop_assume!(pinned > 0);
        let u = random_gapped_unitary(SymmetryClass::GenericA, n, GapSpec::new(gap).with_pinned(pinned), seed).unwrap();
        let w = haar_unitary(n, &mut seeded_rng(seed, 5)).unwrap();
        let opts = SqrtOptions::default();
        let v = sqrt_structured(&u, SymmetryClass::GenericA, &ctx, &opts).unwrap();
        let wuw = &(&w * &u) * &w.adjoint();
        let vw = sqrt_structured(&wuw, SymmetryClass::GenericA, &ctx, &opts).unwrap();
        prop_assert!(dist(&vw, &(&(&w * &v) * &w.adjoint())) <= 1e-10);
    }

    #[test]
    fn diagonalization_invariants(class in tested_class(), n in even(6), loggap in -15.0f64..0.0, seed in any::<u64>()) {
        let ctx = SymmetryContext::new(n);
        let u = random_gapped_unitary(class, n, GapSpec::new(10f64.powf(loggap)).with_pinned(2), seed).unwrap();
        let d = diag_structured(&u, class, &ctx).unwrap();
        prop_assert!(unitarity(&d.q) <= 1e-12);
        prop_assert!(dist(&(&u * &d.q), &d.q.scale_columns(&d.eigenvalues())) <= 1e-11);
        prop_assert!(d.eigenvalues().iter().all(|z| (z.norm() - 1.0).abs() <= 2.0 * EPS));
        match class {
            SymmetryClass::SymmetricAI => prop_assert_eq!(d.q.max_imag_abs(), 0.0),
            SymmetryClass::ChiralAIII => {
                let m = n / 2;
                for j in 0..m {
                    prop_assert_eq!(d.phases[j], -d.phases[j + m]);
                    for i in 0..n {
                        let g = if i < m { d.q[(i, j)] } else { -d.q[(i, j)] };
                        prop_assert_eq!(g, d.q[(i, j + m)]);
                    }
                }
                let neg: Vec<f64> = d.phases.iter().map(|a| -a).collect();
                prop_assert_eq!(sorted(&neg), sorted(&d.phases));
            }
            _ => {}
        }
    }

    #[test]
    fn generator_is_deterministic_and_structured(class in class_strategy(), n in even(8), seed in any::<u64>()) {
        let ctx = SymmetryContext::new(n);
        let spec = GapSpec::new(0.05).with_pinned(2);
        let a = random_gapped_unitary(class, n, spec, seed).unwrap();
        prop_assert_eq!(&a, &random_gapped_unitary(class, n, spec, seed).unwrap());
        let rep = residual(&a, class, &ctx).unwrap();
        prop_assert!(rep.unitarity <= 1e-13 && rep.symmetry <= 1e-13);
    }

    #[test]
    fn generator_places_the_gap(class in class_strategy(), n in even(8), loggap in -4.0f64..0.0, seed in any::<u64>()) {
        let gap = 10f64.powf(loggap);
        let u = random_gapped_unitary(class, n, GapSpec::new(gap).with_pinned(2), seed).unwrap();
        let arc = eigenvalues(&u).iter().map(|z| PI - z.arg().abs()).fold(f64::INFINITY, f64::min);
        prop_assert!((arc - gap).abs() <= 1e-10 * gap, "{arc:e} vs {gap:e}");
    }
}
