//! Built-in methods.
//!
//! | id       | stages | notes                                                  |
//! |----------|--------|--------------------------------------------------------|
//! | `rk4`    | 4      | classical fourth-order method, exact rationals         |
//! | `gl4`    | 2      | Gauss–Legendre collocation, implicit                    |
//! | `eq2`    | 7      | order (4, 9), coefficients in γ                         |
//! | `eq3`    | 8      | order (4, 8), exact entries in ℚ(c₂)                    |
//! | `pointR` | 7      | (c₂, c₃) = (1/6, 11/30) member of the (4, 6) family     |

use alloc::vec;
use alloc::vec::Vec;

use super::{ButcherTableau, ExactCoefficients, MethodKind, TableauError};
use crate::algebra::{Qc2Element, Rational, C2, C3};
#[allow(unused_imports)]
use num_traits::Float;

pub const CATALOG_NAMES: [&str; 5] = ["rk4", "gl4", "eq2", "eq3", "pointR"];

/// γ = (2 + 2^{1/3} + 2^{−1/3})/12 = 1/(4(2 − 2^{1/3})).
pub fn gamma_value() -> f64 {
    (2.0 + 2f64.cbrt() + 0.5f64.cbrt()) / 12.0
}

/// γ of the 7-stage method, to double precision.
pub const GAMMA: f64 = 0.337_801_797_989_914_4;

pub fn catalog(name: &str) -> Result<ButcherTableau, TableauError> {
    match name {
        "rk4" => Ok(rk4()),
        "gl4" => Ok(gl4()),
        "eq2" => Ok(eq2()),
        "eq3" => Ok(eq3()),
        "pointR" | "pointr" => Ok(point_r()),
        _ => Err(TableauError::UnknownMethod(name.into())),
    }
}

fn rational_rows(rows: &[&[(i64, i64)]]) -> Vec<Vec<Rational>> {
    let s = rows.len();
    rows.iter()
        .map(|row| {
            let mut out: Vec<Rational> = row.iter().map(|&(n, d)| Rational::new(n, d)).collect();
            out.resize(s, Rational::zero());
            out
        })
        .collect()
}

fn rationals(v: &[(i64, i64)]) -> Vec<Rational> {
    v.iter().map(|&(n, d)| Rational::new(n, d)).collect()
}

pub fn rk4() -> ButcherTableau {
    let coeffs = ExactCoefficients {
        a: rational_rows(&[&[], &[(1, 2)], &[(0, 1), (1, 2)], &[(0, 1), (0, 1), (1, 1)]]),
        b: rationals(&[(1, 6), (1, 3), (1, 3), (1, 6)]),
        c: rationals(&[(0, 1), (1, 2), (1, 2), (1, 1)]),
    };
    ButcherTableau::from_exact("rk4", Some(MethodKind::Explicit), coeffs)
        .expect("classical RK4 tableau is consistent")
}

/// Collocation method on the given nodes: a_ij = ∫₀^{c_i} ℓ_j, b_j = ∫₀¹ ℓ_j,
/// where ℓ_j are the Lagrange basis polynomials.
pub fn gauss_collocation(nodes: &[f64]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let s = nodes.len();
    // Monomial coefficients of each Lagrange basis polynomial.
    let basis: Vec<Vec<f64>> = (0..s)
        .map(|j| {
            let mut poly = vec![1.0];
            for (k, &ck) in nodes.iter().enumerate() {
                if k == j {
                    continue;
                }
                let scale = 1.0 / (nodes[j] - ck);
                let mut next = vec![0.0; poly.len() + 1];
                for (d, &p) in poly.iter().enumerate() {
                    next[d + 1] += p * scale;
                    next[d] -= p * ck * scale;
                }
                poly = next;
            }
            poly
        })
        .collect();
    let integral = |poly: &[f64], upper: f64| -> f64 {
        poly.iter()
            .enumerate()
            .map(|(d, &p)| p * upper.powi(d as i32 + 1) / (d as f64 + 1.0))
            .sum()
    };
    let a = nodes
        .iter()
        .map(|&ci| basis.iter().map(|l| integral(l, ci)).collect())
        .collect();
    let b = basis.iter().map(|l| integral(l, 1.0)).collect();
    (a, b)
}

/// 2-stage Gauss–Legendre method (order 4, symplectic).
///
/// The collocation values are snapped onto b = ½, a₁₁ = a₂₂ = ¼ and
/// a₁₂ = ½ − a₂₁ (exact in floating point), so that every entry of M is
/// exactly zero in double precision. The raw quadrature leaves |M| ≈ 1e-16,
/// enough to turn the round-off random walk of quadratic invariants into a
/// linear drift.
pub fn gl4() -> ButcherTableau {
    let half_width = 3f64.sqrt() / 6.0;
    let c = vec![0.5 - half_width, 0.5 + half_width];
    let (a, _) = gauss_collocation(&c);
    let a21 = a[1][0];
    let a = vec![vec![0.25, 0.5 - a21], vec![a21, 0.25]];
    ButcherTableau::with_kind("gl4", MethodKind::Implicit, a, vec![0.5, 0.5], c)
        .expect("Gauss collocation rows sum to the nodes")
}

/// The 7-stage method of order (4, 9); its coefficients are polynomials in γ.
pub fn eq2() -> ButcherTableau {
    let g = gamma_value();
    let h = 0.5 - 2.0 * g;
    let m = 1.0 - 8.0 * g;
    let a = vec![
        vec![0.0; 7],
        vec![2.0 * g, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        vec![0.0, 4.0 * g, 0.0, 0.0, 0.0, 0.0, 0.0],
        vec![2.0 * g, 0.0, h, 0.0, 0.0, 0.0, 0.0],
        vec![0.0, 4.0 * g, 0.0, m, 0.0, 0.0, 0.0],
        vec![2.0 * g, 0.0, h, 0.0, h, 0.0, 0.0],
        vec![0.0, 4.0 * g, 0.0, m, 0.0, 4.0 * g, 0.0],
    ];
    let b = vec![g, 2.0 * g, 0.25 - g, 0.5 - 4.0 * g, 0.25 - g, 2.0 * g, g];
    let c = vec![0.0, 2.0 * g, 4.0 * g, 0.5, 1.0 - 4.0 * g, 1.0 - 2.0 * g, 1.0];
    ButcherTableau::with_kind("eq2", MethodKind::Explicit, a, b, c)
        .expect("7-stage (4,9) tableau is consistent")
}

/// Exact coefficients of the 8-stage method of order (4, 8).
pub fn eq3_exact() -> ExactCoefficients<Qc2Element> {
    let q = |a1: i64, a2: i64, a3: i64| {
        Qc2Element::new(
            Rational::from_integer(a1),
            Rational::from_integer(a2),
            Rational::from_integer(a3),
        )
    };
    let half = |x: Qc2Element| x.scale(&Rational::new(1, 2));
    let one = Qc2Element::one();
    let zero = Qc2Element::zero();
    let c2 = Qc2Element::c2();
    let c3 = Qc2Element::c3();
    let c2c3 = &c2 * &c3;

    let half_minus_2c2 = half(q(1, -4, 0));
    let a51 = c2c3.scale(&Rational::from_integer(2));
    let a52 = &q(1, 0, -2) * &c3;
    let a53 = &q(1, -4, 0) * &c3;
    let a54 = c2c3.scale(&Rational::from_integer(4));
    let a64 = q(-2, 4, 0);
    let a65 = q(3, -4, -2);

    let rows = vec![
        vec![],
        vec![c2.clone()],
        vec![zero.clone(), c3.clone()],
        vec![half(q(1, -2, 0)), q(-1, 1, 1), q(1, 0, -1)],
        vec![a51, a52, a53, a54],
        vec![zero.clone(), c3.clone(), zero.clone(), a64.clone(), a65.clone()],
        vec![
            c2.clone(),
            zero.clone(),
            half_minus_2c2.clone(),
            q(2, -4, 0),
            q(-2, 6, 0),
            half_minus_2c2,
        ],
        vec![zero.clone(), c3.clone(), zero.clone(), a64, a65, zero.clone(), c3.clone()],
    ];
    let a = rows
        .into_iter()
        .map(|mut row| {
            row.resize(8, Qc2Element::zero());
            row
        })
        .collect();
    let quarter_minus_c2 = Qc2Element::from_pairs((1, 4), (-1, 1), (0, 1));
    let b = vec![
        half(c2.clone()),
        half(c3.clone()),
        quarter_minus_c2.clone(),
        zero.clone(),
        Qc2Element::from_pairs((1, 2), (1, 1), (-1, 1)),
        quarter_minus_c2,
        half(c3.clone()),
        half(c2.clone()),
    ];
    let half_q = half(one.clone());
    let c = vec![
        zero,
        c2.clone(),
        c3.clone(),
        half_q.clone(),
        half_q,
        &one - &c3,
        &one - &c2,
        one,
    ];
    ExactCoefficients { a, b, c }
}

/// The 8-stage method of order (4, 8) (the ψ = 2c₃ member of the family).
pub fn eq3() -> ButcherTableau {
    ButcherTableau::from_exact("eq3", Some(MethodKind::Explicit), eq3_exact())
        .expect("8-stage (4,8) tableau is consistent in Q(c2)")
}

/// The method at (c₂, c₃) = (1/6, 11/30), printed in its reduced 7-stage form.
pub fn point_r() -> ButcherTableau {
    let coeffs = ExactCoefficients {
        a: rational_rows(&[
            &[],
            &[(1, 6)],
            &[(1, 150), (9, 25)],
            &[(1, 4), (-13, 48), (25, 48)],
            &[(-37, 50), (59, 25), (-2, 1), (22, 25)],
            &[(1, 6), (0, 1), (0, 1), (4, 11), (10, 33)],
            &[(0, 1), (3, 8), (0, 1), (4, 11), (-5, 44), (3, 8)],
        ]),
        b: rationals(&[(1, 12), (3, 16), (0, 1), (4, 11), (25, 264), (3, 16), (1, 12)]),
        c: rationals(&[(0, 1), (1, 6), (11, 30), (1, 2), (1, 2), (5, 6), (1, 1)]),
    };
    ButcherTableau::from_exact("pointR", Some(MethodKind::Explicit), coeffs)
        .expect("point-R tableau is consistent")
}

/// φ = 1/(2c₂) − 1, the ψ at which the family's χ has its pole.
pub fn family_varphi() -> f64 {
    1.0 / (2.0 * C2) - 1.0
}

/// Member of the one-parameter family of 8-stage (4, 8) methods at the point
/// (c₂, c₃) = (z₁, z₂), indexed by ψ. Rows 4 and 5 interpolate linearly in
/// φ and ψ; the (a₆₄, a₆₅, a₇₄, a₇₅, b₄, b₅) block depends on ψ through χ.
pub fn family_tableau(psi: f64) -> Result<ButcherTableau, TableauError> {
    let (c2, c3) = (C2, C3);
    let varphi = family_varphi();
    if (varphi - psi).abs() <= 1e-12 {
        return Err(TableauError::FamilyPole { psi, varphi });
    }
    let chi = 4.0 * (1.0 - 3.0 * c2) / ((1.0 - 6.0 * c2) * (varphi - psi));
    let interpolated_row = |w: f64| {
        [
            w * c2,
            (1.0 - w) * c3,
            w * (0.5 - 2.0 * c2),
            w * c2 + (1.0 - w) * (0.5 - c3),
        ]
    };
    let row4 = interpolated_row(varphi);
    let row5 = interpolated_row(psi);
    let a64 = 2.0 * (0.5 - c3) * (1.0 - chi);
    let a65 = 2.0 * (0.5 - c3) * chi;
    let a74 = 2.0 * c2 * (1.0 + chi);
    let a75 = -2.0 * c2 * chi;
    let b4 = 0.5 * (a64 + a74);
    let b5 = 0.5 * (a65 + a75);

    let mut a = vec![vec![0.0; 8]; 8];
    a[1][0] = c2;
    a[2][1] = c3;
    // a₄₄ vanishes at w = φ; the first three entries fill row 4.
    a[3][..3].copy_from_slice(&row4[..3]);
    a[4][..4].copy_from_slice(&row5);
    a[5][1] = c3;
    a[5][3] = a64;
    a[5][4] = a65;
    a[6][0] = c2;
    a[6][2] = 0.5 - 2.0 * c2;
    a[6][3] = a74;
    a[6][4] = a75;
    a[6][5] = 0.5 - 2.0 * c2;
    a[7][1] = c3;
    a[7][3] = a64;
    a[7][4] = a65;
    a[7][6] = c3;

    let b = vec![
        0.5 * c2,
        0.5 * c3,
        0.25 - c2,
        b4,
        b5,
        0.25 - c2,
        0.5 * c3,
        0.5 * c2,
    ];
    let c = vec![0.0, c2, c3, 0.5, 0.5, 1.0 - c3, 1.0 - c2, 1.0];
    ButcherTableau::with_kind(
        alloc::format!("family(psi={psi})"),
        MethodKind::Explicit,
        a,
        b,
        c,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ExactScalar;

    #[test]
    fn gamma_closed_forms_agree() {
        let alt = 1.0 / (4.0 * (2.0 - 2f64.cbrt()));
        assert!((gamma_value() - alt).abs() < 1e-15);
        assert!((gamma_value() - GAMMA).abs() < 1e-16);
        assert!((gamma_value() - 0.33780).abs() < 1e-5);
    }

    #[test]
    fn eq2_weights() {
        let t = eq2();
        let g = gamma_value();
        let expected = [g, 2.0 * g, 0.25 - g, 0.5 - 4.0 * g, 0.25 - g, 2.0 * g, g];
        assert_eq!(t.b(), &expected);
        assert!((t.max_abs_a() - 1.7024).abs() < 1e-4);
    }

    #[test]
    fn eq3_weights() {
        let t = eq3();
        let expected = [
            C2 / 2.0,
            C3 / 2.0,
            0.25 - C2,
            0.0,
            0.5 + C2 - C3,
            0.25 - C2,
            C3 / 2.0,
            C2 / 2.0,
        ];
        for (x, y) in t.b().iter().zip(expected) {
            assert!((x - y).abs() < 1e-15);
        }
        assert!((t.min_nonzero_weight().unwrap() - 0.0644).abs() < 1e-4);
        assert!((t.max_abs_a() - 1.8793).abs() < 1e-4);
    }

    #[test]
    fn eq3_exact_identities() {
        let e = eq3_exact();
        assert_eq!(e.row_sum_violation(), None);
        assert_eq!(e.weight_sum(), Qc2Element::one());
        for (i, j) in [(0, 7), (1, 6), (2, 5)] {
            assert_eq!(e.b[i], e.b[j]);
        }
        let a65 = Qc2Element::from_pairs((3, 1), (-4, 1), (-2, 1));
        assert_eq!(e.a[5][4], a65);
        assert_eq!(e.a[7][4], a65);
    }

    #[test]
    fn point_r_weights() {
        let t = point_r();
        assert_eq!(t.stages(), 7);
        let expected = [1.0 / 12.0, 3.0 / 16.0, 0.0, 4.0 / 11.0, 25.0 / 264.0, 3.0 / 16.0, 1.0 / 12.0];
        assert_eq!(t.b(), &expected);
        match t.exact() {
            Some(super::super::ExactTableau::Rational(e)) => {
                assert_eq!(e.weight_sum(), Rational::one());
            }
            other => panic!("expected rational entries, got {other:?}"),
        }
    }

    #[test]
    fn gl4_satisfies_c2() {
        let t = gl4();
        let ac = t.a_mul(t.c());
        for (x, ci) in ac.iter().zip(t.c()) {
            assert!((x - ci * ci / 2.0).abs() < 1e-15);
        }
        assert!(t.b().iter().all(|w| (w - 0.5).abs() < 1e-15));
        // Within two ulps of the closed form 1/4 − √3/6.
        assert!((t.a(0, 1) - (0.25 - 3f64.sqrt() / 6.0)).abs() < 2.5e-16);
        assert!((t.max_abs_a() - 0.5386).abs() < 1e-4);
    }

    #[test]
    fn gl4_m_matrix_vanishes_in_floating_point() {
        assert!(crate::analysis::m_matrix(&gl4()).iter().all(|&m| m == 0.0));
        assert!(gl4().max_row_sum_residual() < 2.5e-16);
    }

    #[test]
    fn unknown_catalog_name() {
        assert_eq!(catalog("rk5").unwrap_err(), TableauError::UnknownMethod("rk5".into()));
        for name in CATALOG_NAMES {
            assert_eq!(catalog(name).unwrap().name(), name);
        }
    }

    #[test]
    fn family_at_two_c3_is_eq3() {
        let fam = family_tableau(2.0 * C3).unwrap();
        let e = eq3();
        for i in 0..8 {
            for j in 0..8 {
                assert!((fam.a(i, j) - e.a(i, j)).abs() < 1e-14, "a[{i}][{j}]");
            }
            assert!((fam.b()[i] - e.b()[i]).abs() < 1e-14);
            assert!((fam.c()[i] - e.c()[i]).abs() < 1e-14);
        }
        assert!(fam.b()[3].abs() < 1e-14);
    }

    #[test]
    fn family_pole() {
        let varphi = family_varphi();
        assert!(matches!(family_tableau(varphi), Err(TableauError::FamilyPole { .. })));
    }

    #[test]
    fn family_weight_sum_b4_b5_is_constant() {
        let sums: Vec<f64> = [0.3, 0.7, 1.1]
            .iter()
            .map(|&psi| {
                let t = family_tableau(psi).unwrap();
                t.b()[3] + t.b()[4]
            })
            .collect();
        assert!((sums[0] - sums[1]).abs() < 1e-14);
        assert!((sums[1] - sums[2]).abs() < 1e-14);
    }

    #[test]
    fn family_rows_sum_to_nodes() {
        for psi in [-1.0, 0.0, 0.3, 0.7, 1.1, 2.5, 10.0] {
            let t = family_tableau(psi).unwrap();
            assert!(t.max_row_sum_residual() < 1e-13, "psi = {psi}");
        }
    }

    #[test]
    fn exact_and_float_entries_agree() {
        let e = eq3_exact();
        let t = eq3();
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(t.a(i, j), e.a[i][j].to_f64());
            }
        }
    }
}
