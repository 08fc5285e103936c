//! Exact arithmetic used to validate tableaux with zero tolerance.
//!
//! [`Rational`] is an arbitrary-precision reduced fraction. [`Qc2Element`] is
//! an element α₁ + α₂c₂ + α₃c₃ of the cubic field ℚ(c₂), where c₂ and c₃ are
//! the two smallest roots of z(z − ½)(z − 1) = 1/24. Every coefficient of the
//! 8-stage (4, 8) method lives in that field.

mod qc2;
mod rational;

pub use qc2::{cubic_residual, Qc2Element, C2, C3};
pub use rational::{ParseRationalError, Rational};

use core::ops::{Add, Mul, Neg, Sub};

/// Exact scalar type that a tableau can carry alongside its doubles.
pub trait ExactScalar:
    Clone
    + PartialEq
    + core::fmt::Debug
    + core::fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: Rational) -> Self;
    fn to_f64(&self) -> f64;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
}

impl ExactScalar for Rational {
    fn zero() -> Self {
        Rational::zero()
    }

    fn one() -> Self {
        Rational::one()
    }

    fn from_rational(r: Rational) -> Self {
        r
    }

    fn to_f64(&self) -> f64 {
        Rational::to_f64(self)
    }
}

impl ExactScalar for Qc2Element {
    fn zero() -> Self {
        Qc2Element::zero()
    }

    fn one() -> Self {
        Qc2Element::one()
    }

    fn from_rational(r: Rational) -> Self {
        Qc2Element::from(r)
    }

    fn to_f64(&self) -> f64 {
        self.embed()
    }
}
