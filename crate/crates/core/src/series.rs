//! Truncated series `x^rho * sum_j log(x)^j * sum_k c[j][k] x^k`.

use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::numeric::{BigComplex, Poly, Scalar};
use crate::{Error, Rational, Result};

/// Truncated log-power series with a rational leading exponent.
///
/// `coeffs[j][k]` multiplies `log(x)^j x^(exponent + k)`; terms with
/// `k >= trunc` are unknown.
#[derive(Clone, Debug, PartialEq)]
pub struct LogSeries<T> {
    pub exponent: Rational,
    pub coeffs: Vec<Vec<T>>,
    pub trunc: usize,
}

impl<T: Scalar> LogSeries<T> {
    pub fn zero(exponent: Rational, trunc: usize) -> Self {
        LogSeries { exponent, coeffs: vec![vec![T::zero(); trunc]], trunc }
    }

    /// Log-free series from its coefficient list.
    pub fn from_coeffs(exponent: Rational, c: Vec<T>) -> Self {
        let trunc = c.len();
        LogSeries { exponent, coeffs: vec![c], trunc }
    }

    /// The constant `c` (exact to any order).
    pub fn constant(c: T, trunc: usize) -> Self {
        let mut v = vec![T::zero(); trunc];
        if trunc > 0 {
            v[0] = c;
        }
        Self::from_coeffs(Rational::zero(), v)
    }

    /// `x^e` as a series known to `trunc` terms.
    pub fn monomial(e: Rational, trunc: usize) -> Self {
        let mut s = Self::constant(T::one(), trunc);
        s.exponent = e;
        s
    }

    /// `log(x)` as a series.
    pub fn log(trunc: usize) -> Self {
        let mut s = Self::zero(Rational::zero(), trunc);
        s.coeffs.push(vec![T::zero(); trunc]);
        if trunc > 0 {
            s.coeffs[1][0] = T::one();
        }
        s
    }

    pub fn log_degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, j: usize, k: usize) -> T {
        self.coeffs.get(j).and_then(|row| row.get(k)).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|row| row.iter().all(|c| c.is_zero()))
    }

    /// Drops vanishing top log rows.
    pub fn trim_logs(mut self) -> Self {
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(|r| r.iter().all(|c| c.is_zero())) {
            self.coeffs.pop();
        }
        self
    }

    /// Moves the exponent up past leading zero columns.
    pub fn normalize(mut self) -> Self {
        let lead = (0..self.trunc).find(|&k| self.coeffs.iter().any(|r| !r[k].is_zero()));
        if let Some(s) = lead {
            if s > 0 {
                for row in self.coeffs.iter_mut() {
                    row.drain(..s);
                }
                self.trunc -= s;
                self.exponent += Rational::from_integer(s.into());
            }
        }
        self.trim_logs()
    }

    fn offset_to(&self, e: &Rational) -> Result<i64> {
        let d = &self.exponent - e;
        if !d.is_integer() {
            return Err(Error::DomainError(format!(
                "exponents {} and {} differ by a non-integer",
                self.exponent, e
            )));
        }
        Ok(d.to_integer().to_i64().unwrap_or(i64::MAX))
    }

    /// Re-expresses the series with a lower leading exponent `e`.
    pub fn rebase(&self, e: &Rational) -> Result<Self> {
        let off = self.offset_to(e)?;
        if off < 0 {
            return Err(Error::DomainError("rebase must lower the exponent".into()));
        }
        let off = off as usize;
        let trunc = self.trunc + off;
        let coeffs = self
            .coeffs
            .iter()
            .map(|row| {
                let mut v = vec![T::zero(); off];
                v.extend(row.iter().cloned());
                v
            })
            .collect();
        Ok(LogSeries { exponent: e.clone(), coeffs, trunc })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let e = if self.offset_to(&other.exponent)? <= 0 { self.exponent.clone() } else { other.exponent.clone() };
        let a = self.rebase(&e)?;
        let b = other.rebase(&e)?;
        let trunc = a.trunc.min(b.trunc);
        let logs = a.coeffs.len().max(b.coeffs.len());
        let coeffs = (0..logs).map(|j| (0..trunc).map(|k| a.coeff(j, k) + b.coeff(j, k)).collect()).collect();
        Ok(LogSeries { exponent: e, coeffs, trunc })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, s: &T) -> Self {
        LogSeries {
            exponent: self.exponent.clone(),
            coeffs: self.coeffs.iter().map(|r| r.iter().map(|c| c.clone() * s.clone()).collect()).collect(),
            trunc: self.trunc,
        }
    }

    /// Multiplication by `x^e`.
    pub fn shift(&self, e: &Rational) -> Self {
        let mut s = self.clone();
        s.exponent += e;
        s
    }

    pub fn mul(&self, other: &Self) -> Self {
        let trunc = self.trunc.min(other.trunc);
        let logs = self.coeffs.len() + other.coeffs.len() - 1;
        let mut coeffs = vec![vec![T::zero(); trunc]; logs];
        for (ja, ra) in self.coeffs.iter().enumerate() {
            for (jb, rb) in other.coeffs.iter().enumerate() {
                let out = &mut coeffs[ja + jb];
                for (ka, ca) in ra.iter().enumerate().take(trunc) {
                    if ca.is_zero() {
                        continue;
                    }
                    for (kb, cb) in rb.iter().enumerate().take(trunc - ka) {
                        out[ka + kb] = out[ka + kb].clone() + ca.clone() * cb.clone();
                    }
                }
            }
        }
        LogSeries { exponent: &self.exponent + &other.exponent, coeffs, trunc }.trim_logs()
    }

    /// Euler derivative `x d/dx`.
    pub fn theta(&self) -> Self {
        let mut coeffs = vec![vec![T::zero(); self.trunc]; self.coeffs.len()];
        for (j, row) in self.coeffs.iter().enumerate() {
            for (k, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let e = T::from_rational(&(&self.exponent + Rational::from_integer(k.into())));
                coeffs[j][k] = coeffs[j][k].clone() + c.clone() * e;
                if j > 0 {
                    coeffs[j - 1][k] = coeffs[j - 1][k].clone() + c.clone() * T::from_i64(j as i64);
                }
            }
        }
        LogSeries { exponent: self.exponent.clone(), coeffs, trunc: self.trunc }.trim_logs()
    }

    /// Ordinary derivative `d/dx`.
    pub fn derivative(&self) -> Self {
        self.theta().shift(&-Rational::from_integer(1.into()))
    }

    /// `P(theta)` applied to the series.
    pub fn apply_theta_poly(&self, p: &Poly<Rational>) -> Self {
        let mut acc = LogSeries::zero(self.exponent.clone(), self.trunc);
        let mut power = self.clone();
        for (i, c) in p.coeffs().iter().enumerate() {
            if i > 0 {
                power = power.theta();
            }
            if !c.is_zero() {
                acc = acc.add(&power.scale(&T::from_rational(c))).expect("same exponent");
            }
        }
        acc
    }

    /// Multiplicative inverse of a log-free series with non-zero leading term.
    pub fn inverse(&self) -> Result<Self> {
        let s = self.clone().normalize();
        if s.log_degree() > 0 {
            return Err(Error::DomainError("inverse of a series with log terms".into()));
        }
        let c = &s.coeffs[0];
        if c.is_empty() || c[0].is_zero() {
            return Err(Error::DomainError("inverse of the zero series".into()));
        }
        let n = s.trunc;
        let inv0 = T::one() / c[0].clone();
        let mut out: Vec<T> = Vec::with_capacity(n);
        out.push(inv0.clone());
        for k in 1..n {
            let mut acc = T::zero();
            for i in 1..=k {
                if !c[i].is_zero() {
                    acc = acc + c[i].clone() * out[k - i].clone();
                }
            }
            out.push(-(acc * inv0.clone()));
        }
        Ok(LogSeries::from_coeffs(-s.exponent.clone(), out))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    /// Restricts to the first `t` terms.
    pub fn truncate(&self, t: usize) -> Self {
        let t = t.min(self.trunc);
        LogSeries {
            exponent: self.exponent.clone(),
            coeffs: self.coeffs.iter().map(|r| r[..t].to_vec()).collect(),
            trunc: t,
        }
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().flatten().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> LogSeries<U> {
        LogSeries {
            exponent: self.exponent.clone(),
            coeffs: self.coeffs.iter().map(|r| r.iter().map(&f).collect()).collect(),
            trunc: self.trunc,
        }
    }
}

impl LogSeries<Rational> {
    pub fn to_complex(&self) -> LogSeries<BigComplex> {
        self.map(BigComplex::from_rational)
    }
}

impl LogSeries<BigComplex> {
    /// Evaluates at `x` with principal branches of `x^rho` and `log x`.
    pub fn eval(&self, x: &BigComplex) -> Result<BigComplex> {
        if x.is_zero() {
            return Err(Error::DomainError("evaluation at the branch point".into()));
        }
        let lx = x.ln();
        let mut total = BigComplex::zero();
        let mut lpow = BigComplex::one();
        for (j, row) in self.coeffs.iter().enumerate() {
            if j > 0 {
                lpow = lpow * lx.clone();
            }
            let mut acc = BigComplex::zero();
            for c in row.iter().rev() {
                acc = acc * x.clone() + c.clone();
            }
            total = total + acc * lpow.clone();
        }
        let xr = if self.exponent.is_zero() { BigComplex::one() } else { (lx * BigComplex::from_rational(&self.exponent)).exp() };
        Ok(total * xr)
    }

    /// Magnitude of the last retained term at `|x| = r`, a cheap tail proxy.
    pub fn tail_estimate(&self, r: f64) -> f64 {
        let k = self.trunc.saturating_sub(1);
        let last = self.coeffs.iter().map(|row| row.get(k).map_or(0.0, |c| c.magnitude())).fold(0.0, f64::max);
        last * r.powi(k as i32)
    }
}

/// One `(j, k, re, im)` entry of a series dump.
#[derive(Serialize)]
pub struct SeriesTerm {
    pub j: usize,
    pub k: usize,
    pub re: String,
    pub im: String,
}

#[derive(Serialize)]
pub struct SeriesDump {
    pub exponent: String,
    pub terms: Vec<SeriesTerm>,
}

impl LogSeries<BigComplex> {
    pub fn dump(&self, digits: usize) -> SeriesDump {
        let mut terms = Vec::new();
        for (j, row) in self.coeffs.iter().enumerate() {
            for (k, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                terms.push(SeriesTerm {
                    j,
                    k,
                    re: c.re().to_string_radix(10, Some(digits)),
                    im: c.im().to_string_radix(10, Some(digits)),
                });
            }
        }
        SeriesDump { exponent: self.exponent.to_string(), terms }
    }
}
