use std::cell::Cell;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_traits::{One, Zero};
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Integer};

use crate::Rational;

/// Working precision used when no operand fixes one.
pub const DEFAULT_PRECISION: u32 = 256;

thread_local! {
    static PRECISION: Cell<u32> = const { Cell::new(DEFAULT_PRECISION) };
}

pub fn precision() -> u32 {
    PRECISION.with(|p| p.get())
}

pub fn set_precision(bits: u32) {
    PRECISION.with(|p| p.set(bits.max(16)));
}

/// Runs `f` with the thread's working precision temporarily set to `bits`.
pub fn with_precision<R>(bits: u32, f: impl FnOnce() -> R) -> R {
    let old = precision();
    set_precision(bits);
    let out = f();
    set_precision(old);
    out
}

/// Multiprecision complex number. Binary operations round to the larger
/// operand precision.
#[derive(Clone, PartialEq)]
pub struct BigComplex(pub Complex);

pub(crate) fn bigint_to_integer(b: &BigInt) -> Integer {
    let (sign, digits) = b.to_u32_digits();
    let mut i = Integer::from_digits(&digits, rug::integer::Order::Lsf);
    if sign == Sign::Minus {
        i = -i;
    }
    i
}

pub(crate) fn rational_to_float(q: &Rational, prec: u32) -> Float {
    let r = rug::Rational::from((bigint_to_integer(q.numer()), bigint_to_integer(q.denom())));
    Float::with_val(prec, &r)
}

impl BigComplex {
    pub fn prec(&self) -> u32 {
        self.0.prec().0
    }

    pub fn with_prec(prec: u32, re: f64, im: f64) -> Self {
        BigComplex(Complex::with_val(prec, (re, im)))
    }

    pub fn new(re: f64, im: f64) -> Self {
        Self::with_prec(precision(), re, im)
    }

    pub fn from_floats(re: Float, im: Float) -> Self {
        let p = re.prec().max(im.prec());
        BigComplex(Complex::with_val(p, (re, im)))
    }

    pub fn from_rational(q: &Rational) -> Self {
        let p = precision();
        BigComplex(Complex::with_val(p, (rational_to_float(q, p), 0)))
    }

    pub fn from_rationals(re: &Rational, im: &Rational) -> Self {
        let p = precision();
        BigComplex(Complex::with_val(p, (rational_to_float(re, p), rational_to_float(im, p))))
    }

    /// Parses decimal real and imaginary parts at working precision.
    pub fn parse_decimal(re: &str, im: &str) -> Option<Self> {
        let p = precision();
        let re = Float::with_val(p, Float::parse(re).ok()?);
        let im = Float::with_val(p, Float::parse(im).ok()?);
        Some(BigComplex(Complex::with_val(p, (re, im))))
    }

    pub fn from_i64(n: i64) -> Self {
        BigComplex(Complex::with_val(precision(), (n, 0)))
    }

    pub fn i() -> Self {
        BigComplex(Complex::with_val(precision(), (0, 1)))
    }

    pub fn pi() -> Self {
        let p = precision();
        BigComplex(Complex::with_val(p, (Float::with_val(p, Constant::Pi), 0)))
    }

    /// `exp(2 pi i * q)` for rational `q`, with exact values at multiples of 1/4.
    pub fn exp_2pi_i(q: &Rational) -> Self {
        let p = precision();
        let one = Rational::one();
        let four = Rational::from_integer(4.into());
        let mut f = q - (q.floor());
        if f >= one {
            f -= one;
        }
        let quarter = &f * &four;
        if quarter.is_integer() {
            let k: i64 = quarter.to_integer().try_into().unwrap_or(0);
            let (re, im) = [(1, 0), (0, 1), (-1, 0), (0, -1)][k as usize % 4];
            return BigComplex(Complex::with_val(p, (re, im)));
        }
        let wp = p + 16;
        let two_pi = Float::with_val(wp, Constant::Pi) * 2u32;
        let ang = two_pi * rational_to_float(&f, wp);
        let (s, c) = ang.sin_cos(Float::new(wp));
        BigComplex(Complex::with_val(p, (c, s)))
    }

    /// Primitive root of unity `exp(2 pi i / n)` raised to `k`.
    pub fn root_of_unity(n: i64, k: i64) -> Self {
        Self::exp_2pi_i(&Rational::new(k.into(), n.into()))
    }

    pub fn re(&self) -> &Float {
        self.0.real()
    }

    pub fn im(&self) -> &Float {
        self.0.imag()
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.0.abs_ref())
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    pub fn conj(&self) -> Self {
        BigComplex(Complex::with_val(self.prec(), self.0.conj_ref()))
    }

    pub fn exp(&self) -> Self {
        BigComplex(Complex::with_val(self.prec(), self.0.exp_ref()))
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        BigComplex(Complex::with_val(self.prec(), self.0.ln_ref()))
    }

    pub fn sqrt(&self) -> Self {
        BigComplex(Complex::with_val(self.prec(), self.0.sqrt_ref()))
    }

    pub fn sin(&self) -> Self {
        BigComplex(Complex::with_val(self.prec(), self.0.sin_ref()))
    }

    pub fn cos(&self) -> Self {
        BigComplex(Complex::with_val(self.prec(), self.0.cos_ref()))
    }

    /// Principal power `self^e`.
    pub fn pow(&self, e: &BigComplex) -> Self {
        let p = self.prec().max(e.prec());
        BigComplex(Complex::with_val(p, (&self.0).pow(&e.0)))
    }

    /// Principal power with a rational exponent.
    pub fn pow_rational(&self, e: &Rational) -> Self {
        if e.is_integer() {
            if let Ok(k) = i32::try_from(e.to_integer()) {
                return self.powi(k);
            }
        }
        self.pow(&BigComplex::from_rational(e))
    }

    pub fn powi(&self, k: i32) -> Self {
        BigComplex(Complex::with_val(self.prec(), (&self.0).pow(k)))
    }

    pub fn is_finite(&self) -> bool {
        self.re().is_finite() && self.im().is_finite()
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re().to_f64(), self.im().to_f64())
    }

    pub fn to_complex64(&self) -> num_complex::Complex64 {
        let (r, i) = self.to_f64_pair();
        num_complex::Complex64::new(r, i)
    }

    /// Decimal rendering with `digits` significant digits per component.
    pub fn to_decimal(&self, digits: usize) -> String {
        let fmt_part = |f: &Float| -> String {
            if f.is_zero() {
                "0".to_string()
            } else {
                f.to_string_radix(10, Some(digits))
            }
        };
        let re = fmt_part(self.re());
        let im = fmt_part(self.im());
        if self.im().is_zero() {
            re
        } else if im.starts_with('-') {
            format!("{re}{im}i")
        } else {
            format!("{re}+{im}i")
        }
    }

    pub fn set_prec(&mut self, prec: u32) {
        self.0.set_prec(prec);
    }
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(20))
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(f.precision().unwrap_or(30)))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: BigComplex) -> BigComplex {
                let p = self.prec().max(rhs.prec());
                BigComplex(Complex::with_val(p, &self.0 $op &rhs.0))
            }
        }
        impl<'a> $tr<&'a BigComplex> for &'a BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: &'a BigComplex) -> BigComplex {
                let p = self.prec().max(rhs.prec());
                BigComplex(Complex::with_val(p, &self.0 $op &rhs.0))
            }
        }
        impl<'a> $tr<&'a BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: &'a BigComplex) -> BigComplex {
                let p = self.prec().max(rhs.prec());
                BigComplex(Complex::with_val(p, &self.0 $op &rhs.0))
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);
binop!(Div, div, /);

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex(-self.0)
    }
}

impl<'a> Neg for &'a BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex(Complex::with_val(self.prec(), -&self.0))
    }
}

impl Zero for BigComplex {
    fn zero() -> Self {
        BigComplex(Complex::new(precision()))
    }
    fn is_zero(&self) -> bool {
        self.re().is_zero() && self.im().is_zero()
    }
}

impl One for BigComplex {
    fn one() -> Self {
        BigComplex(Complex::with_val(precision(), (1, 0)))
    }
}

impl From<f64> for BigComplex {
    fn from(x: f64) -> Self {
        BigComplex::new(x, 0.0)
    }
}
