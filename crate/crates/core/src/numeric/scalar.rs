use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use super::BigComplex;
use crate::Rational;

/// Field scalar accepted by the generic series, polynomial and matrix code.
///
/// Exact rationals, machine floats and multiprecision complex numbers all
/// implement it, so the same Frobenius recurrence can run exactly and then be
/// replayed numerically.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(q: &Rational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(n.into()))
    }

    /// Absolute value as a machine float, for pivoting and tolerances.
    fn magnitude(&self) -> f64;

    /// True when arithmetic is exact, so zero tests need no tolerance.
    fn exact() -> bool {
        false
    }
}

impl Scalar for Rational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn magnitude(&self) -> f64 {
        let v = self.to_f64().unwrap_or(f64::INFINITY);
        v.abs()
    }
    fn exact() -> bool {
        true
    }
}

impl Scalar for f64 {
    fn from_rational(q: &Rational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Scalar for f32 {
    fn from_rational(q: &Rational) -> Self {
        q.to_f32().unwrap_or(f32::NAN)
    }
    fn magnitude(&self) -> f64 {
        self.abs() as f64
    }
}

impl Scalar for Complex64 {
    fn from_rational(q: &Rational) -> Self {
        Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl Scalar for BigComplex {
    fn from_rational(q: &Rational) -> Self {
        BigComplex::from_rational(q)
    }
    fn from_i64(n: i64) -> Self {
        BigComplex::from_i64(n)
    }
    fn magnitude(&self) -> f64 {
        self.abs_f64()
    }
}
