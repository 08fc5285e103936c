//! The polynomial ζ(c₂, c₃) = Σ ζ_mn c₂^m (2c₃)^n whose zero set carries the
//! 8-stage (4, 8) family.

use crate::algebra::Rational;

/// `ZETA_TABLE[n][m]` is the coefficient of c₂^m (2c₃)^n.
pub const ZETA_TABLE: [&[i64]; 6] = [
    &[1, -13, 20],
    &[-3, 53, 18, -132],
    &[-1, -93, -198, 396, 72],
    &[15, 75, 294, -576],
    &[-21, -15, -108, 216],
    &[9, -9],
];

/// ζ_mn, zero outside the table.
pub fn zeta_coefficient(m: usize, n: usize) -> i64 {
    ZETA_TABLE
        .get(n)
        .and_then(|row| row.get(m))
        .copied()
        .unwrap_or(0)
}

/// Horner evaluation in c₂ for each power of 2c₃, then Horner in 2c₃.
pub fn zeta(c2: f64, c3: f64) -> f64 {
    let u = 2.0 * c3;
    ZETA_TABLE.iter().rev().fold(0.0, |acc, row| {
        let inner = row.iter().rev().fold(0.0, |p, &k| p * c2 + k as f64);
        acc * u + inner
    })
}

pub fn zeta_exact(c2: &Rational, c3: &Rational) -> Rational {
    let u = c3 * &Rational::from_integer(2);
    ZETA_TABLE.iter().rev().fold(Rational::zero(), |acc, row| {
        let inner = row
            .iter()
            .rev()
            .fold(Rational::zero(), |p, &k| &(&p * c2) + &Rational::from_integer(k));
        &(&acc * &u) + &inner
    })
}
