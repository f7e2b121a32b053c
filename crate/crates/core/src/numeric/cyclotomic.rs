use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::BigComplex;

/// Element of the cyclotomic ring `Z[zeta_n]`, stored in the group ring
/// `Z[x]/(x^n - 1)`. Equality reduces modulo the cyclotomic polynomial.
#[derive(Clone, Debug)]
pub struct CycInt {
    n: usize,
    coeffs: Vec<BigInt>,
}

/// Integer coefficients of the `n`-th cyclotomic polynomial, lowest first.
pub fn cyclotomic_poly(n: usize) -> Vec<BigInt> {
    assert!(n > 0);
    // x^n - 1 divided by Phi_d for every proper divisor d
    let mut p = vec![BigInt::zero(); n + 1];
    p[0] = -BigInt::one();
    p[n] = BigInt::one();
    for d in (1..n).filter(|d| n % d == 0) {
        p = exact_div_monic(&p, &cyclotomic_poly(d));
    }
    p
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    let mut r = num.to_vec();
    let mut q = vec![BigInt::zero(); r.len() - dd];
    for k in (0..q.len()).rev() {
        let f = r[k + dd].clone();
        for (i, c) in den.iter().enumerate() {
            r[k + i] -= &f * c;
        }
        q[k] = f;
    }
    debug_assert!(r.iter().all(|c| c.is_zero()));
    q
}

impl CycInt {
    pub fn zero(n: usize) -> Self {
        CycInt { n, coeffs: vec![BigInt::zero(); n] }
    }

    pub fn one(n: usize) -> Self {
        Self::integer(n, 1)
    }

    pub fn integer(n: usize, k: i64) -> Self {
        let mut z = Self::zero(n);
        z.coeffs[0] = BigInt::from(k);
        z
    }

    /// `zeta_n^k` for any integer `k`.
    pub fn zeta(n: usize, k: i64) -> Self {
        let mut z = Self::zero(n);
        z.coeffs[k.rem_euclid(n as i64) as usize] = BigInt::one();
        z
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Coefficients in the power basis of `Z[zeta_n]`, reduced modulo `Phi_n`.
    pub fn reduced(&self) -> Vec<BigInt> {
        let phi = cyclotomic_poly(self.n);
        let d = phi.len() - 1;
        let mut r = self.coeffs.clone();
        for k in (d..r.len()).rev() {
            let f = r[k].clone();
            if f.is_zero() {
                continue;
            }
            for (i, c) in phi.iter().enumerate() {
                r[k - d + i] -= &f * c;
            }
        }
        r.truncate(d);
        r
    }

    pub fn is_zero(&self) -> bool {
        self.reduced().iter().all(|c| c.is_zero())
    }

    pub fn to_complex(&self) -> BigComplex {
        let mut acc = BigComplex::from_i64(0);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let w = BigComplex::root_of_unity(self.n as i64, k as i64);
            acc = acc + w * BigComplex::from_i64(c.to_i64().unwrap_or(0));
        }
        acc
    }

    /// Complex conjugate, `zeta -> zeta^{-1}`.
    pub fn conj(&self) -> Self {
        let mut z = Self::zero(self.n);
        for (k, c) in self.coeffs.iter().enumerate() {
            z.coeffs[(self.n - k) % self.n] += c;
        }
        z
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.n, other.n, "cyclotomic orders differ");
    }
}

impl PartialEq for CycInt {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && (self.clone() - other.clone()).is_zero()
    }
}

impl Add for CycInt {
    type Output = CycInt;
    fn add(mut self, rhs: CycInt) -> CycInt {
        self.check(&rhs);
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a += b;
        }
        self
    }
}

impl Sub for CycInt {
    type Output = CycInt;
    fn sub(self, rhs: CycInt) -> CycInt {
        self + (-rhs)
    }
}

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(mut self) -> CycInt {
        for a in self.coeffs.iter_mut() {
            *a = -a.clone();
        }
        self
    }
}

impl Mul for CycInt {
    type Output = CycInt;
    fn mul(self, rhs: CycInt) -> CycInt {
        self.check(&rhs);
        let n = self.n;
        let mut out = CycInt::zero(n);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out.coeffs[(i + j) % n] += a * b;
            }
        }
        out
    }
}
