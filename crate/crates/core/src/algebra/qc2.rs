use core::f64::consts::PI;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};


use super::Rational;
#[allow(unused_imports)]
use num_traits::Float;

/// c₂ = ½ − sin(2π/9)/√3, the smallest root of z(z − ½)(z − 1) = 1/24.
pub const C2: f64 = 0.128_886_400_515_720_42;
/// c₃ = ½ − sin(π/9)/√3 = 1/(6(1 − 2c₂)²), the middle root of the same cubic.
pub const C3: f64 = 0.302_534_578_182_650_8;

/// z(z − ½)(z − 1) − 1/24.
pub fn cubic_residual(z: f64) -> f64 {
    z * (z - 0.5) * (z - 1.0) - 1.0 / 24.0
}

fn c2_closed_form() -> f64 {
    0.5 - (2.0 * PI / 9.0).sin() / 3f64.sqrt()
}

fn c3_closed_form() -> f64 {
    0.5 - (PI / 9.0).sin() / 3f64.sqrt()
}

/// α₁ + α₂c₂ + α₃c₃ with rational α's.
///
/// Products are reduced back to the (1, c₂, c₃) basis with
///
/// ```text
/// c₂² = −1/12 + 7/6 c₂ − 1/6 c₃
/// c₂c₃ = −1/12 + 1/6 c₂ + 1/3 c₃
/// c₃² = −1/3 + 1/6 c₂ + 4/3 c₃
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Qc2Element {
    pub a1: Rational,
    pub a2: Rational,
    pub a3: Rational,
}

impl Qc2Element {
    pub fn new(a1: Rational, a2: Rational, a3: Rational) -> Self {
        Qc2Element { a1, a2, a3 }
    }

    /// Shorthand for small rational coefficients given as (num, den) pairs.
    pub fn from_pairs(a1: (i64, i64), a2: (i64, i64), a3: (i64, i64)) -> Self {
        Qc2Element::new(
            Rational::new(a1.0, a1.1),
            Rational::new(a2.0, a2.1),
            Rational::new(a3.0, a3.1),
        )
    }

    pub fn zero() -> Self {
        Qc2Element::new(Rational::zero(), Rational::zero(), Rational::zero())
    }

    pub fn one() -> Self {
        Qc2Element::new(Rational::one(), Rational::zero(), Rational::zero())
    }

    pub fn c2() -> Self {
        Qc2Element::new(Rational::zero(), Rational::one(), Rational::zero())
    }

    pub fn c3() -> Self {
        Qc2Element::new(Rational::zero(), Rational::zero(), Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.a1.is_zero() && self.a2.is_zero() && self.a3.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.a2.is_zero() && self.a3.is_zero()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Qc2Element::new(&self.a1 * k, &self.a2 * k, &self.a3 * k)
    }

    /// Value in double precision, using the trigonometric closed forms of c₂ and c₃.
    pub fn embed(&self) -> f64 {
        self.a1.to_f64() + self.a2.to_f64() * c2_closed_form() + self.a3.to_f64() * c3_closed_form()
    }

    /// Multiplicative inverse, found by solving x·y = 1 as a 3×3 rational system.
    pub fn inv(&self) -> Option<Self> {
        // Columns: x·1, x·c₂, x·c₃ expressed in the basis.
        let cols = [self.clone(), self * &Qc2Element::c2(), self * &Qc2Element::c3()];
        let m = |r: usize, c: usize| -> &Rational {
            match r {
                0 => &cols[c].a1,
                1 => &cols[c].a2,
                _ => &cols[c].a3,
            }
        };
        let det3 = |col: [&Rational; 3], k: usize| -> Rational {
            // Determinant with column k replaced by `col`.
            let e = |r: usize, c: usize| -> Rational {
                if c == k {
                    col[r].clone()
                } else {
                    m(r, c).clone()
                }
            };
            e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
                - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
                + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
        };
        let det = det3([m(0, 0), m(1, 0), m(2, 0)], 0);
        if det.is_zero() {
            return None;
        }
        let one = Rational::one();
        let zero = Rational::zero();
        let rhs = [&one, &zero, &zero];
        Some(Qc2Element::new(
            det3(rhs, 0) / det.clone(),
            det3(rhs, 1) / det.clone(),
            det3(rhs, 2) / det,
        ))
    }
}

impl From<Rational> for Qc2Element {
    fn from(r: Rational) -> Self {
        Qc2Element::new(r, Rational::zero(), Rational::zero())
    }
}

impl From<i64> for Qc2Element {
    fn from(n: i64) -> Self {
        Qc2Element::from(Rational::from_integer(n))
    }
}

impl fmt::Display for Qc2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + ({})c2 + ({})c3", self.a1, self.a2, self.a3)
    }
}

impl<'a> Add<&'a Qc2Element> for &'a Qc2Element {
    type Output = Qc2Element;
    fn add(self, rhs: &'a Qc2Element) -> Qc2Element {
        Qc2Element::new(&self.a1 + &rhs.a1, &self.a2 + &rhs.a2, &self.a3 + &rhs.a3)
    }
}

impl<'a> Sub<&'a Qc2Element> for &'a Qc2Element {
    type Output = Qc2Element;
    fn sub(self, rhs: &'a Qc2Element) -> Qc2Element {
        Qc2Element::new(&self.a1 - &rhs.a1, &self.a2 - &rhs.a2, &self.a3 - &rhs.a3)
    }
}

impl<'a> Mul<&'a Qc2Element> for &'a Qc2Element {
    type Output = Qc2Element;
    fn mul(self, rhs: &'a Qc2Element) -> Qc2Element {
        let (x1, x2, x3) = (&self.a1, &self.a2, &self.a3);
        let (y1, y2, y3) = (&rhs.a1, &rhs.a2, &rhs.a3);
        let k1 = x1 * y1;
        let k2 = &(x1 * y2) + &(x2 * y1);
        let k3 = &(x1 * y3) + &(x3 * y1);
        let k22 = x2 * y2;
        let k23 = &(x2 * y3) + &(x3 * y2);
        let k33 = x3 * y3;

        let r = |n, d| Rational::new(n, d);
        // c₂², c₂c₃, c₃² rewritten in (1, c₂, c₃).
        let a1 = k1 + &k22 * &r(-1, 12) + &k23 * &r(-1, 12) + &k33 * &r(-1, 3);
        let a2 = k2 + &k22 * &r(7, 6) + &k23 * &r(1, 6) + &k33 * &r(1, 6);
        let a3 = k3 + &k22 * &r(-1, 6) + &k23 * &r(1, 3) + &k33 * &r(4, 3);
        Qc2Element::new(a1, a2, a3)
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Qc2Element {
            type Output = Qc2Element;
            fn $method(self, rhs: Qc2Element) -> Qc2Element {
                $trait::$method(&self, &rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for Qc2Element {
    type Output = Qc2Element;
    fn neg(self) -> Qc2Element {
        Qc2Element::new(-self.a1, -self.a2, -self.a3)
    }
}

impl Neg for &Qc2Element {
    type Output = Qc2Element;
    fn neg(self) -> Qc2Element {
        Qc2Element::new(-&self.a1, -&self.a2, -&self.a3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a1: (i64, i64), a2: (i64, i64), a3: (i64, i64)) -> Qc2Element {
        Qc2Element::from_pairs(a1, a2, a3)
    }

    #[test]
    fn constants_match_closed_forms() {
        assert!((C2 - c2_closed_form()).abs() < 1e-16);
        assert!((C3 - c3_closed_form()).abs() < 1e-16);
    }

    #[test]
    fn reduction_rules() {
        let c2 = Qc2Element::c2();
        let c3 = Qc2Element::c3();
        assert_eq!(&c2 * &c2, q((-1, 12), (7, 6), (-1, 6)));
        assert_eq!(&c2 * &c3, q((-1, 12), (1, 6), (1, 3)));
        assert_eq!(&c3 * &c3, q((-1, 3), (1, 6), (4, 3)));
    }

    #[test]
    fn embedding_of_generators() {
        assert!((Qc2Element::c2().embed() - 0.12888).abs() < 1e-5);
        assert!((Qc2Element::c3().embed() - 0.30253).abs() < 1e-5);
        assert!(cubic_residual(Qc2Element::c2().embed()).abs() < 1e-15);
        assert!(cubic_residual(Qc2Element::c3().embed()).abs() < 1e-15);
    }

    #[test]
    fn a65_identity() {
        // 1/(2c₂) − 2 = 3 − 4c₂ − 2c₃
        let a65 = q((3, 1), (-4, 1), (-2, 1));
        let two_c2 = Qc2Element::c2().scale(&Rational::from_integer(2));
        let lhs = &two_c2.inv().unwrap() - &Qc2Element::from(2);
        assert_eq!(lhs, a65);
        let expected = 1.0 / (2.0 * C2) - 2.0;
        assert!((a65.embed() - expected).abs() < 1e-14);
    }

    #[test]
    fn c3_from_c2() {
        // 6(1 − 2c₂)²·c₃ = 1
        let one_minus = &Qc2Element::one() - &Qc2Element::c2().scale(&Rational::from_integer(2));
        let lhs = (&(&one_minus * &one_minus) * &Qc2Element::c3()).scale(&Rational::from_integer(6));
        assert_eq!(lhs, Qc2Element::one());
    }

    #[test]
    fn rules_are_associative() {
        let c2 = Qc2Element::c2();
        let c3 = Qc2Element::c3();
        assert_eq!(&(&c2 * &c3) * &c3, &c2 * &(&c3 * &c3));
        assert_eq!(&(&c2 * &c2) * &c3, &c2 * &(&c2 * &c3));
    }

    #[test]
    fn inverse_round_trip() {
        let x = q((3, 7), (-1, 2), (5, 3));
        assert_eq!(&x * &x.inv().unwrap(), Qc2Element::one());
        assert!(Qc2Element::zero().inv().is_none());
    }

    #[test]
    fn cubic_at_zero() {
        assert_eq!(cubic_residual(0.0), -1.0 / 24.0);
        let z3 = 0.5 - (2.0 * PI / 9.0 + 4.0 * PI / 3.0).sin() / 3f64.sqrt();
        assert!((z3 - 1.06857).abs() < 1e-5);
        assert!(cubic_residual(z3).abs() < 1e-14);
    }
}
