//! Scalars, multiprecision complex arithmetic, Gamma, polynomials, matrices
//! and exact cyclotomic integers.

mod bigcomplex;
mod cyclotomic;
mod gamma;
mod matrix;
mod poly;
mod scalar;

pub use bigcomplex::{precision, set_precision, with_precision, BigComplex, DEFAULT_PRECISION};
pub use cyclotomic::{cyclotomic_poly, CycInt};
pub use gamma::{bernoulli, gamma, gamma_rational, harmonic, pochhammer};
pub use matrix::Matrix;
pub use poly::Poly;
pub use scalar::Scalar;

use num_bigint::BigInt;

use crate::Rational;

/// Shorthand for the rational `p/q`.
pub fn q(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Shorthand for an integer as a rational.
pub fn qi(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"n"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let den: BigInt = b.trim().parse().ok()?;
            if den == BigInt::from(0) {
                return None;
            }
            Some(Rational::new(a.trim().parse().ok()?, den))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

/// `2^(-bits)` as a machine float, the default tolerance scale.
pub fn eps_bits(bits: i32) -> f64 {
    2f64.powi(-bits)
}
