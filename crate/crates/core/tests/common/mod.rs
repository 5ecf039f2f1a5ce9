#![allow(dead_code)]

use symlog::linalg::{eig_general, spectral_norm};
use symlog::{CMatrix, C64};

pub fn unitarity(v: &CMatrix) -> f64 {
    spectral_norm(&(&(&v.adjoint() * v) - &CMatrix::identity(v.n())))
}

pub fn dist(a: &CMatrix, b: &CMatrix) -> f64 {
    spectral_norm(&(a - b))
}

pub fn eigenvalues(a: &CMatrix) -> Vec<C64> {
    eig_general(a).unwrap().0
}

/// Sorted copy.
pub fn sorted(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    s
}

pub fn max_pairwise_gap(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    sorted(a)
        .iter()
        .zip(sorted(b))
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
