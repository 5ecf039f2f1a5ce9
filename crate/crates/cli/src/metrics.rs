//! Quality measures shared by the subcommand reports and the benchmark.
//! All matrix norms are spectral.

use symlog::linalg::spectral_norm;
use symlog::{log_relation_defect, residual, CMatrix, SymmetryClass, SymmetryContext, C64};

/// The metric names that may appear in a report or benchmark row.
pub const METRIC_NAMES: [&str; 10] = [
    "backward_err",
    "forward_err",
    "unitarity_err",
    "symmetry_err",
    "eigresidual",
    "orth_err",
    "offcircle_err",
    "realness_err",
    "pairing_err",
    "wall_seconds",
];

pub type Metrics = Vec<(&'static str, f64)>;

fn dist(a: &CMatrix, b: &CMatrix) -> f64 {
    spectral_norm(&(a - b))
}

fn unitarity(v: &CMatrix) -> f64 {
    spectral_norm(&(&(&v.adjoint() * v) - &CMatrix::identity(v.n())))
}

/// Square root `v` of `u`.
pub fn sqrt_metrics(
    u: &CMatrix,
    v: &CMatrix,
    class: SymmetryClass,
    ctx: &SymmetryContext,
    oracle: Option<&CMatrix>,
) -> symlog::Result<Metrics> {
    let mut m = vec![("backward_err", dist(&(v * v), u))];
    if let Some(o) = oracle {
        m.push(("forward_err", dist(v, o)));
    }
    let rep = residual(v, class, ctx)?;
    m.push(("unitarity_err", rep.unitarity));
    m.push(("symmetry_err", rep.symmetry));
    Ok(m)
}

/// Logarithm `h` of `u`; `exp_h` is its exponential, computed by the caller.
/// `unitarity_err` here is the anti-Hermitian defect `||h + h^dagger||`.
pub fn log_metrics(
    u: &CMatrix,
    h: &CMatrix,
    exp_h: &CMatrix,
    class: SymmetryClass,
    ctx: &SymmetryContext,
    oracle: Option<&CMatrix>,
) -> symlog::Result<Metrics> {
    let mut m = vec![("backward_err", dist(exp_h, u))];
    if let Some(o) = oracle {
        m.push(("forward_err", dist(h, o)));
    }
    m.push(("unitarity_err", spectral_norm(&(h + &h.adjoint()))));
    m.push(("symmetry_err", log_relation_defect(h, class, ctx)?));
    Ok(m)
}

/// Eigenpairs `(q, lambda)` of `u`. `forward_err` is the largest distance
/// from a computed eigenvalue to the nearest exact one.
pub fn diag_metrics(u: &CMatrix, q: &CMatrix, lambda: &[C64], exact: Option<&[C64]>) -> Metrics {
    let mut m = vec![
        ("eigresidual", dist(&(u * q), &q.scale_columns(lambda))),
        ("orth_err", unitarity(q)),
        ("offcircle_err", lambda.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max)),
    ];
    if let Some(ex) = exact {
        let fwd = lambda
            .iter()
            .map(|z| ex.iter().map(|w| (z - w).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max);
        m.push(("forward_err", fwd));
    }
    m
}

/// Largest imaginary part of an eigenvector matrix (class AI).
pub fn realness_err(q: &CMatrix) -> f64 {
    q.max_imag_abs()
}

/// Chiral pairing defect of a structured diagonalization: the larger of
/// `max_j ||Gamma q_j - q_{j+n/2}||` and `max_j |alpha_j + alpha_{j+n/2}|`.
pub fn pairing_err(q: &CMatrix, phases: &[f64]) -> f64 {
    let n = q.n();
    let m = n / 2;
    let mut worst: f64 = 0.0;
    for j in 0..m {
        let col: f64 = (0..n)
            .map(|i| {
                let g = if i < m { q[(i, j)] } else { -q[(i, j)] };
                (g - q[(i, j + m)]).norm_sqr()
            })
            .sum::<f64>()
            .sqrt();
        worst = worst.max(col).max((phases[j] + phases[j + m]).abs());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_perfect() {
        let id = CMatrix::identity(4);
        let ctx = SymmetryContext::new(4);
        for (_, v) in sqrt_metrics(&id, &id, SymmetryClass::ChiralAIII, &ctx, Some(&id)).unwrap() {
            assert_eq!(v, 0.0);
        }
        let one = vec![C64::new(1.0, 0.0); 4];
        for (_, v) in diag_metrics(&id, &id, &one, Some(&one)) {
            assert_eq!(v, 0.0);
        }
        assert!(pairing_err(&id, &[0.0; 4]) > 0.0);
    }

    #[test]
    fn names_are_registered() {
        let id = CMatrix::identity(2);
        let ctx = SymmetryContext::new(2);
        let m = log_metrics(&id, &CMatrix::zeros(2), &id, SymmetryClass::GenericA, &ctx, Some(&id)).unwrap();
        assert!(m.iter().all(|(k, _)| METRIC_NAMES.contains(k)));
    }
}
