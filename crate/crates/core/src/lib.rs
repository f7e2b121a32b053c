//! Sector Picard-Fuchs operators of the Dwork pencil, their Frobenius bases
//! and monodromy, oscillating integrals, and the mirror-side I-functions.
//!
//! Exact work uses [`Rational`]; numerics use the multiprecision
//! [`Complex`]. Generic code is written against [`numeric::Scalar`].

pub mod error;
pub mod numeric;
pub mod sectors;
pub mod series;
pub mod pfode;
pub mod frobenius;
pub mod monodromy;
pub mod data;
pub mod oscint;
pub mod mirror;
pub mod yy;
pub mod appb;
pub mod concordance;
pub mod report;

pub use error::{Error, Result};

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;
/// Multiprecision complex scalar.
pub type Complex = numeric::BigComplex;
/// Complex matrix at working precision.
pub type ComplexMatrix = numeric::Matrix<Complex>;
/// Exact rational matrix.
pub type RationalMatrix = numeric::Matrix<Rational>;
/// Machine-precision matrix.
pub type F64Matrix = numeric::Matrix<f64>;
