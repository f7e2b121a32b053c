use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Scalar;
use crate::{Error, Rational, Result};

/// Dense univariate polynomial, coefficients lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    /// `prod (x - r)` over the given roots.
    pub fn from_roots(roots: &[T]) -> Self {
        roots.iter().fold(Self::constant(T::one()), |acc, r| {
            acc.mul(&Self::new(vec![-r.clone(), T::one()]))
        })
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::constant(T::one()), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * T::from_i64(i as i64))
                .collect(),
        )
    }

    /// Coefficients of `p(x + a)`; entry `t` equals `p^(t)(a) / t!`.
    pub fn taylor_shift(&self, a: &T) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let v = c[j].clone() + a.clone() * c[j + 1].clone();
                c[j] = v;
            }
        }
        Self::new(c)
    }

    /// `p(c x)`.
    pub fn dilate(&self, c: &T) -> Self {
        let mut f = T::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a.clone() * f.clone());
            f = f * c.clone();
        }
        Self::new(out)
    }

    /// Euclidean division by a non-zero divisor.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or_else(|| Error::DomainError("division by the zero polynomial".into()))?;
        let mut r = self.coeffs.clone();
        let n = r.len();
        if n <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let lead = d.lead();
        let mut q = vec![T::zero(); n - dd];
        for k in (0..n - dd).rev() {
            let f = r[k + dd].clone() / lead.clone();
            for (i, c) in d.coeffs.iter().enumerate() {
                r[k + i] = r[k + i].clone() - f.clone() * c.clone();
            }
            q[k] = f;
        }
        r.truncate(dd);
        Ok((Self::new(q), Self::new(r)))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn monic(&self) -> Self {
        let l = self.lead();
        if l.is_zero() {
            return self.clone();
        }
        self.scale(&(T::one() / l))
    }
}

impl Poly<Rational> {
    /// Rational roots with multiplicity, plus the cofactor without rational roots.
    pub fn rational_roots(&self) -> Result<(Vec<Rational>, Poly<Rational>)> {
        if self.is_zero() {
            return Err(Error::DomainError("roots of the zero polynomial".into()));
        }
        let mut p = self.monic();
        let mut roots = Vec::new();
        while p.coeff(0).is_zero() && p.degree().unwrap_or(0) > 0 {
            roots.push(Rational::zero());
            p = Poly::new(p.coeffs[1..].to_vec());
        }
        loop {
            if p.degree().unwrap_or(0) == 0 {
                break;
            }
            let ints = integer_coefficients(&p);
            let a0 = ints[0].abs();
            let an = ints.last().cloned().unwrap_or_else(BigInt::one).abs();
            let mut found = None;
            'search: for q in divisors(&an)? {
                for num in divisors(&a0)? {
                    for sign in [1, -1] {
                        let r = Rational::new(BigInt::from(sign) * num.clone(), q.clone());
                        if p.eval(&r).is_zero() {
                            found = Some(r);
                            break 'search;
                        }
                    }
                }
            }
            match found {
                Some(r) => {
                    let (q, _) = p.div_rem(&Poly::new(vec![-r.clone(), Rational::one()]))?;
                    roots.push(r);
                    p = q;
                }
                None => break,
            }
        }
        roots.sort();
        Ok((roots, p))
    }

    /// All roots, which must be rational.
    pub fn split_rational(&self) -> Result<Vec<Rational>> {
        let (roots, rest) = self.rational_roots()?;
        if rest.degree().unwrap_or(0) > 0 {
            return Err(Error::NotCanonicalForm(format!("polynomial {self} does not split over Q")));
        }
        Ok(roots)
    }
}

fn integer_coefficients(p: &Poly<Rational>) -> Vec<BigInt> {
    let l = p.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    p.coeffs.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect()
}

fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let v = n
        .to_u64()
        .filter(|v| *v <= 1_000_000_000_000)
        .ok_or_else(|| Error::DomainError(format!("coefficient {n} too large for rational root search")))?;
    if v == 0 {
        return Ok(vec![BigInt::zero()]);
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= v {
        if v % d == 0 {
            small.push(BigInt::from(d));
            if d * d != v {
                large.push(BigInt::from(v / d));
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small)
}

impl<T: Scalar + fmt::Display> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})x"),
                _ => format!("({c})x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}
