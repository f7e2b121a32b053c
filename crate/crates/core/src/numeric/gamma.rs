use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rug::float::Constant;
use rug::{Complex, Float};

use super::bigcomplex::{rational_to_float, BigComplex};
use super::Scalar;
use crate::{Error, Rational, Result};

fn bernoulli_cache() -> &'static Mutex<Vec<Rational>> {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![Rational::one()]))
}

/// Bernoulli number `B_m` (with `B_1 = -1/2`).
pub fn bernoulli(m: usize) -> Rational {
    let mut cache = bernoulli_cache().lock().expect("bernoulli cache poisoned");
    while cache.len() <= m {
        let k = cache.len();
        // B_k = -1/(k+1) * sum_{j<k} C(k+1, j) B_j
        let mut binom = BigInt::one();
        let mut acc = Rational::zero();
        for (j, b) in cache.iter().enumerate() {
            acc += b * Rational::from_integer(binom.clone());
            binom = binom * BigInt::from(k + 1 - j) / BigInt::from(j + 1);
        }
        let bk = -acc / Rational::from_integer(BigInt::from(k + 1));
        cache.push(bk);
    }
    cache[m].clone()
}

fn is_nonpositive_integer(z: &BigComplex) -> bool {
    z.im().is_zero() && z.re().is_integer() && *z.re() <= 0
}

/// log Gamma by the Stirling series, valid once |z| is large.
fn ln_gamma_stirling(z: &Complex, wp: u32) -> Complex {
    let half = Float::with_val(wp, 0.5);
    let two_pi = Float::with_val(wp, Constant::Pi) * 2u32;
    let ln_z = Complex::with_val(wp, z.ln_ref());
    let mut s = Complex::with_val(wp, z - &half) * &ln_z;
    s -= z;
    s += Float::with_val(wp, two_pi.ln_ref()) / 2u32;

    let tol = Float::with_val(wp, Float::i_exp(1, -(wp as i32) - 8));
    let z2 = Complex::with_val(wp, z * z);
    let mut zpow = z.clone(); // z^{2k-1}
    for k in 1..4 * wp as usize {
        let b = bernoulli(2 * k);
        let coef = rational_to_float(&b, wp) / ((2 * k * (2 * k - 1)) as u32);
        let term = Complex::with_val(wp, &coef / &zpow);
        let mag = Float::with_val(wp, term.abs_ref());
        s += &term;
        if mag < tol {
            break;
        }
        zpow *= &z2;
    }
    s
}

/// Complex Gamma function at the working precision of `z`.
///
/// Stirling series after an upward shift, with the reflection formula for
/// `Re z < 1/2`.
pub fn gamma(z: &BigComplex) -> Result<BigComplex> {
    if !z.is_finite() {
        return Err(Error::DomainError("gamma of a non-finite value".into()));
    }
    if is_nonpositive_integer(z) {
        return Err(Error::PoleError(format!("gamma at {}", z.to_decimal(10))));
    }
    let prec = z.prec();
    let wp = prec + 48;
    let zc = Complex::with_val(wp, &z.0);
    let out = if *zc.real() < 0.5 {
        // Gamma(z) = pi / (sin(pi z) Gamma(1 - z))
        let pi = Float::with_val(wp, Constant::Pi);
        let one_minus = BigComplex(Complex::with_val(wp, 1 - &zc));
        let g = gamma_right(&one_minus.0, wp);
        let s = Complex::with_val(wp, &zc * &pi).sin();
        Complex::with_val(wp, pi / Complex::with_val(wp, s * g))
    } else {
        gamma_right(&zc, wp)
    };
    let out = BigComplex(Complex::with_val(prec, out));
    if !out.is_finite() {
        return Err(Error::PrecisionExhausted("gamma overflowed".into()));
    }
    Ok(out)
}

fn gamma_right(z: &Complex, wp: u32) -> Complex {
    let r = (wp as f64) * 0.2 + 10.0;
    let re = z.real().to_f64();
    let shift = if re < r { (r - re).ceil() as u32 } else { 0 };
    let zs = Complex::with_val(wp, z + shift);
    let lg = ln_gamma_stirling(&zs, wp);
    let mut g = lg.exp();
    if shift > 0 {
        let mut prod = Complex::with_val(wp, (1, 0));
        for j in 0..shift {
            prod *= Complex::with_val(wp, z + j);
        }
        g /= prod;
    }
    g
}

/// Gamma at a rational argument, real-valued.
pub fn gamma_rational(q: &Rational) -> Result<BigComplex> {
    if q.is_integer() && !q.is_positive() {
        return Err(Error::PoleError(format!("gamma at {q}")));
    }
    gamma(&BigComplex::from_rational(q))
}

/// Rising factorial `(a)_k = a (a+1) ... (a+k-1)`.
pub fn pochhammer<T: Scalar>(a: &T, k: usize) -> T {
    let mut acc = T::one();
    let mut x = a.clone();
    for _ in 0..k {
        acc = acc * x.clone();
        x = x + T::one();
    }
    acc
}

/// Harmonic number `H_n`.
pub fn harmonic(n: usize) -> Rational {
    (1..=n).fold(Rational::zero(), |acc, k| acc + Rational::new(BigInt::one(), BigInt::from(k)))
}
