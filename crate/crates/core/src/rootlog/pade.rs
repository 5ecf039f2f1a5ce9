use crate::error::{Error, Result};
use crate::linalg::{inverse, spectral_norm, CMatrix, C64};

/// Nodes and weights of the `order`-point Gauss-Legendre rule on `[0, 1]`.
///
/// Newton's method on the Legendre recurrence, started from the usual
/// Chebyshev-like guesses.
pub fn gauss_legendre_unit(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order > 0, "quadrature order must be positive");
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 {
                dp = legendre(n, x).1;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // map [-1, 1] -> [0, 1]
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    (nodes, weights)
}

// P_n(x) and P_n'(x).
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// The `[order/order]` Pade approximant of `log(1 + x)` at a scalar.
///
/// Gauss-Legendre quadrature of `log(1 + x) = int_0^1 x / (1 + t x) dt`
/// reproduces the diagonal Pade approximant exactly, in partial fractions.
pub fn pade_log_scalar(x: C64, order: usize) -> C64 {
    let (t, w) = gauss_legendre_unit(order);
    t.iter()
        .zip(&w)
        .map(|(&tj, &wj)| wj * x / (1.0 + tj * x))
        .sum()
}

/// `r_order(X)`, the diagonal Pade approximant of `log(I + X)`, evaluated as
/// `sum_j w_j X (I + t_j X)^{-1}`.
///
/// For a subordinate norm the error is at most
/// `|r(-||X||) - log(1 - ||X||)|`; with `||X|| <= 0.1` and order 7 that is
/// below double-precision rounding.
pub fn pade_log(x: &CMatrix, order: usize) -> Result<CMatrix> {
    if order == 0 {
        return Err(Error::InvalidParameter(
            "Pade order must be positive".into(),
        ));
    }
    let norm = spectral_norm(x);
    if norm >= 0.5 {
        return Err(Error::NormTooLarge { norm });
    }
    let n = x.n();
    let id = CMatrix::identity(n);
    let (t, w) = gauss_legendre_unit(order);
    let mut acc = CMatrix::zeros(n);
    for (&tj, &wj) in t.iter().zip(&w) {
        let shifted = &id + &x.scale_real(tj);
        let term = x * &inverse(&shifted)?;
        acc = &acc + &term.scale_real(wj);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_integrates_polynomials() {
        for order in 1..=10 {
            let (t, w) = gauss_legendre_unit(order);
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-15);
            // exact up to degree 2n - 1
            for deg in 0..2 * order {
                let q: f64 = t
                    .iter()
                    .zip(&w)
                    .map(|(x, wj)| wj * x.powi(deg as i32))
                    .sum();
                assert!(
                    (q - 1.0 / (deg as f64 + 1.0)).abs() < 1e-14,
                    "order {order} deg {deg}"
                );
            }
        }
    }

    #[test]
    fn seven_point_nodes_match_tabulated() {
        // tabulated 7-point Gauss-Legendre on [-1, 1]
        let (t, w) = gauss_legendre_unit(7);
        let x: Vec<f64> = t.iter().map(|ti| 2.0 * ti - 1.0).collect();
        assert!((x[3]).abs() < 1e-16);
        assert!((x[6] - 0.949_107_912_342_758_5).abs() < 1e-15);
        assert!((2.0 * w[3] - 0.417_959_183_673_469_4).abs() < 1e-15);
        assert!((2.0 * w[0] - 0.129_484_966_168_869_7).abs() < 1e-15);
    }

    #[test]
    fn scalar_accuracy_near_one() {
        for x in [-0.1f64, 0.1, 0.05, -0.03] {
            let r = pade_log_scalar(x.into(), 7);
            assert!(
                (r.re - x.ln_1p()).abs() < 1.3e-16,
                "x = {x}: {:e}",
                (r.re - x.ln_1p()).abs()
            );
            assert_eq!(r.im, 0.0);
        }
        assert_eq!(pade_log_scalar(0.0.into(), 7), C64::new(0.0, 0.0));
    }

    #[test]
    fn matrix_zero_and_norm_guard() {
        assert_eq!(pade_log(&CMatrix::zeros(3), 7).unwrap(), CMatrix::zeros(3));
        let big = CMatrix::identity(2).scale_real(0.5);
        assert!(matches!(pade_log(&big, 7), Err(Error::NormTooLarge { .. })));
        assert!(pade_log(&CMatrix::zeros(2), 0).is_err());
    }

    #[test]
    fn matrix_diag_matches_scalar() {
        let d = [
            C64::new(0.05, 0.02),
            C64::new(-0.07, 0.0),
            C64::new(0.0, -0.09),
        ];
        let r = pade_log(&CMatrix::from_diag(&d), 7).unwrap();
        for (k, z) in d.iter().enumerate() {
            assert!((r[(k, k)] - (1.0 + z).ln()).norm() < 2e-16);
        }
    }
}
