use alloc::vec;
use alloc::vec::Vec;

use crate::tableau::ButcherTableau;

/// Degree of the truncated series used for implicit tableaux.
const IMPLICIT_SERIES_DEGREE: usize = 24;
/// Coefficients of R(z)R(−z) − 1 below this are treated as zero.
const RR_ZERO_TOL: f64 = 1e-12;

/// Taylor coefficients of R(z) = 1 + Σ z^{n+1} bAⁿ1 up to z^`degree`.
fn taylor(tab: &ButcherTableau, degree: usize) -> Vec<f64> {
    let mut out = vec![0.0; degree + 1];
    out[0] = 1.0;
    let mut v = vec![1.0; tab.stages()];
    for coef in out.iter_mut().skip(1) {
        *coef = tab.b_dot(&v);
        v = tab.a_mul(&v);
    }
    out
}

/// r_k = k!·[z^k]R(z) for k = 0..=`n_max`. A consistent method of order p has
/// r_k = 1 for k ≤ p. Implicit tableaux give the truncated Neumann series.
pub fn stability_coefficients(tab: &ButcherTableau, n_max: usize) -> Vec<f64> {
    let mut fact = 1.0;
    taylor(tab, n_max)
        .into_iter()
        .enumerate()
        .map(|(k, x)| {
            if k > 0 {
                fact *= k as f64;
            }
            x * fact
        })
        .collect()
}

/// Coefficients of R(z)R(−z) − 1. Exact up to rounding for explicit
/// tableaux (degree 2s); truncated for implicit ones.
pub fn rr_minus_one_series(tab: &ButcherTableau) -> Vec<f64> {
    let degree = if tab.is_explicit() {
        tab.stages()
    } else {
        IMPLICIT_SERIES_DEGREE
    };
    let r = taylor(tab, degree);
    let mut out: Vec<f64> = (0..=degree)
        .map(|k| {
            (0..=k)
                .map(|j| {
                    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                    r[k - j] * r[j] * sign
                })
                .sum()
        })
        .collect();
    if tab.is_explicit() {
        // The high half of the product of two degree-s polynomials.
        for k in degree + 1..=2 * degree {
            let v = (k - degree..=degree)
                .map(|j| {
                    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                    r[k - j] * r[j] * sign
                })
                .sum();
            out.push(v);
        }
    }
    out[0] -= 1.0;
    out
}

/// First non-zero term of R(z)R(−z) − 1 as (power, coefficient); `None` when
/// every computed coefficient vanishes.
pub fn rr_minus_one_leading(tab: &ButcherTableau) -> Option<(usize, f64)> {
    rr_minus_one_series(tab)
        .into_iter()
        .enumerate()
        .find(|(_, x)| x.abs() > RR_ZERO_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{C2, C3};
    use crate::tableau::{eq2, eq3, gl4, rk4};

    #[test]
    fn rk4_is_the_quartic_taylor_polynomial() {
        let r = stability_coefficients(&rk4(), 8);
        assert!(r[..5].iter().all(|x| (x - 1.0).abs() < 1e-15));
        assert!(r[5..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn eq3_coefficients() {
        let r = stability_coefficients(&eq3(), 8);
        let r5 = 5.0 / 6.0 + 10.0 / 3.0 * C2 - 5.0 / 6.0 * C3;
        assert!((r[5] - r5).abs() < 1e-10);
        assert!((r[6] - (6.0 * r[5] - 5.0)).abs() < 1e-12);
        let r7 = -35.0 / 8.0 + 105.0 * C2 - 105.0 / 4.0 * C3;
        let r8 = -70.0 / 3.0 + 1400.0 / 3.0 * C2 - 350.0 / 3.0 * C3;
        assert!((r[7] - r7).abs() < 1e-10);
        assert!((r[8] - r8).abs() < 1e-10);
    }

    #[test]
    fn leading_terms() {
        let (k, x) = rr_minus_one_leading(&rk4()).unwrap();
        assert_eq!(k, 6);
        assert!((x - 1.0 / 72.0).abs() < 1e-15);
        let (k, x) = rr_minus_one_leading(&eq2()).unwrap();
        assert_eq!(k, 10);
        assert!(((x + 0.00144678) / 0.00144678).abs() < 1e-5);
        let (k, _) = rr_minus_one_leading(&eq3()).unwrap();
        assert_eq!(k, 10);
        assert_eq!(rr_minus_one_leading(&gl4()), None);
    }

    #[test]
    fn odd_powers_vanish() {
        for (k, x) in rr_minus_one_series(&eq3()).into_iter().enumerate() {
            if k % 2 == 1 {
                assert!(x.abs() < 1e-15);
            }
        }
    }
}
