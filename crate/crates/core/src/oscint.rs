//! Oscillating integrals of `e^{-f_a} z^m Omega` over Lefschetz thimbles.
//!
//! Two evaluations are provided: the direct power series in `a` and the
//! closed form through the Gauss multiplication formula, which rewrites
//! each residue class `d = (n+1) l + delta` as a Gamma prefactor times a
//! hypergeometric series in `b = a^{n+1} / (n+1)^{n+1}`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::frobenius::{eval_rgs, DEFAULT_MARGIN};
use crate::numeric::{gamma_rational, q, CycInt};
use crate::sectors::{admissible_deltas, all_vectors};
use crate::{Complex, Error, Rational, Result};

/// Thimble class `gamma_h = prod (1 - xi^{h_i}) c_i`, `h_i in 1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ThimbleIndex {
    pub h: Vec<u32>,
}

impl ThimbleIndex {
    pub fn new(n: usize, h: Vec<u32>) -> Result<Self> {
        if h.len() != n + 1 {
            return Err(Error::DimensionError(format!("thimble index of length {} for n = {n}", h.len())));
        }
        if h.iter().any(|&x| x == 0 || x as usize > n) {
            return Err(Error::DomainError(format!("thimble entries must lie in 1..={n}, got {h:?}")));
        }
        Ok(ThimbleIndex { h })
    }

    /// All `n^{n+1}` generators.
    pub fn all(n: usize) -> Vec<ThimbleIndex> {
        all_vectors(n + 1, n as u32 - 1)
            .into_iter()
            .map(|v| ThimbleIndex { h: v.into_iter().map(|x| x + 1).collect() })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct OscillatingValue {
    pub value: Complex,
    pub terms_used: usize,
    pub tail_bound: f64,
}

/// `prod_i (1 - xi_{n+1}^{h_i (d + m_i + 1)})`, exact.
pub fn thimble_factor(n: usize, m: &[u32], h: &ThimbleIndex, d: usize) -> CycInt {
    let big_n = n + 1;
    m.iter().zip(&h.h).fold(CycInt::one(big_n), |acc, (&mi, &hi)| {
        let k = (hi as i64) * (d as i64 + mi as i64 + 1);
        acc * (CycInt::one(big_n) - CycInt::zeta(big_n, k))
    })
}

fn check_sector(n: usize, m: &[u32]) -> Result<()> {
    if n < 2 {
        return Err(Error::DomainError(format!("n = {n} < 2")));
    }
    if m.len() != n + 1 {
        return Err(Error::DimensionError(format!("m has length {}, expected {}", m.len(), n + 1)));
    }
    Ok(())
}

/// Partial sums of the direct series split by `d mod (n+1)`, without the
/// thimble factor, and the tail bound of each class.
struct ClassSums {
    sums: Vec<Complex>,
    tails: Vec<f64>,
    terms: usize,
}

fn class_sums(n: usize, m: &[u32], a: &Complex, tol: f64) -> Result<ClassSums> {
    check_sector(n, m)?;
    if !a.is_finite() {
        return Err(Error::DomainError("a must be finite".into()));
    }
    let big_n = n + 1;
    let nf = big_n as f64;
    let abs_a = a.abs_f64();
    if abs_a >= nf {
        return Err(Error::ConvergenceError(format!("|a| = {abs_a} outside the disk of convergence |a| < {big_n}")));
    }
    // g_d = prod Gamma((d+m_i+1)/N) a^d / d! for d < N
    let mut g: Vec<Complex> = Vec::with_capacity(big_n);
    let mut fact = Complex::one();
    for d in 0..big_n {
        if d > 0 {
            fact = fact * Complex::from_i64(d as i64);
        }
        let mut t = a.powi(d as i32) / fact.clone();
        for &mi in m {
            t = t * gamma_rational(&q(d as i64 + mi as i64 + 1, big_n as i64))?;
        }
        g.push(t);
    }
    let a_n = a.powi(big_n as i32);
    let max_m = m.iter().copied().max().unwrap_or(0) as f64;
    let mut sums = vec![Complex::zero(); big_n];
    let mut d = 0usize;
    loop {
        // g currently holds g_d .. g_{d+N-1}
        let ratio = (abs_a / nf).powi(big_n as i32) * ((d as f64 + max_m + 1.0) / (d as f64 + 1.0)).powi(big_n as i32);
        if ratio < 1.0 {
            let tails: Vec<f64> = (0..big_n).map(|r| g[(d + r) % big_n].abs_f64() / (1.0 - ratio)).collect();
            if tails.iter().sum::<f64>() * 2f64.powi(big_n as i32) < tol {
                // reorder so that tails[r] refers to the class d' = r mod N
                let mut by_class = vec![0.0; big_n];
                for (r, t) in tails.into_iter().enumerate() {
                    by_class[(d + r) % big_n] = t;
                }
                return Ok(ClassSums { sums, tails: by_class, terms: d });
            }
        }
        if d > 200_000 {
            return Err(Error::ConvergenceError("no convergence after 2e5 terms".into()));
        }
        let slot = d % big_n;
        sums[slot] = sums[slot].clone() + g[slot].clone();
        // g_{d+N} = g_d prod((d+m_i+1)/N) a^N / ((d+1)...(d+N))
        let mut next = g[slot].clone() * a_n.clone();
        for &mi in m {
            next = next * Complex::from_rational(&q(d as i64 + mi as i64 + 1, big_n as i64));
        }
        for k in 1..=big_n {
            next = next / Complex::from_i64((d + k) as i64);
        }
        g[slot] = next;
        d += 1;
    }
}

/// `sum_d prod (1 - xi^{h_i(d+m_i+1)}) Gamma((d+m_i+1)/(n+1)) a^d / d!`.
///
/// The series has radius of convergence `n+1` in `a`; outside it a
/// `ConvergenceError` is returned.
pub fn oscillating_series(n: usize, m: &[u32], h: &ThimbleIndex, a: &Complex, tol: f64) -> Result<OscillatingValue> {
    let cs = class_sums(n, m, a, tol)?;
    Ok(combine(n, m, h, &cs))
}

fn combine(n: usize, m: &[u32], h: &ThimbleIndex, cs: &ClassSums) -> OscillatingValue {
    let mut value = Complex::zero();
    let mut tail = 0.0;
    for (r, s) in cs.sums.iter().enumerate() {
        let f = thimble_factor(n, m, h, r);
        if f.is_zero() {
            continue;
        }
        let fc = f.to_complex();
        tail += fc.abs_f64() * cs.tails[r];
        value = value + fc * s.clone();
    }
    OscillatingValue { value, terms_used: cs.terms, tail_bound: tail }
}

/// Parameters `(delta+m_i+1)/(n+1)` and `(delta+k)/(n+1)`, `k = 1..=n+1`.
pub fn closed_form_parameters(n: usize, m: &[u32], delta: usize) -> (Vec<Rational>, Vec<Rational>) {
    let big_n = n as i64 + 1;
    let upper = m.iter().map(|&mi| q(delta as i64 + mi as i64 + 1, big_n)).collect();
    let lower = (1..=big_n).map(|k| q(delta as i64 + k, big_n)).collect();
    (upper, lower)
}

/// The `delta`-component of the oscillating integral:
/// `prod(1 - xi^{h_i(delta+m_i+1)}) (2 pi)^{n/2} (n+1)^{-delta-1/2}
///  prod Gamma(upper) / prod Gamma(lower) a^delta G(upper; lower; b)`.
pub fn gamma_closed_form(n: usize, m: &[u32], h: &ThimbleIndex, delta: usize, a: &Complex) -> Result<Complex> {
    check_sector(n, m)?;
    if !admissible_deltas(n, m).contains(&delta) {
        return Err(Error::InadmissibleDelta(format!("delta = {delta} for m = {m:?}")));
    }
    let factor = thimble_factor(n, m, h, delta);
    if factor.is_zero() {
        return Ok(Complex::zero());
    }
    let big_n = n as i64 + 1;
    let (upper, lower) = closed_form_parameters(n, m, delta);
    let b = a.powi(big_n as i32) / Complex::from_i64(big_n).powi(big_n as i32);
    let series = eval_rgs(&upper, &lower, &b, None, DEFAULT_MARGIN)?.value;
    let mut pre = factor.to_complex()
        * (Complex::from_i64(2) * Complex::pi()).pow_rational(&q(n as i64, 2))
        * Complex::from_i64(big_n).pow_rational(&(-q(2 * delta as i64 + 1, 2)));
    for u in &upper {
        pre = pre * gamma_rational(u)?;
    }
    for l in &lower {
        pre = pre / gamma_rational(l)?;
    }
    Ok(pre * a.powi(delta as i32) * series)
}

/// Sum of [`gamma_closed_form`] over the admissible `delta`.
pub fn gamma_closed_form_total(n: usize, m: &[u32], h: &ThimbleIndex, a: &Complex) -> Result<Complex> {
    admissible_deltas(n, m)
        .into_iter()
        .try_fold(Complex::zero(), |acc, d| Ok(acc + gamma_closed_form(n, m, h, d, a)?))
}

/// Exponent vectors as `1,0,0` so that rows stay flat in CSV.
fn joined<S: serde::Serializer>(v: &[u32], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
}

/// One row of the two-path comparison.
#[derive(Clone, Debug, Serialize)]
pub struct OscRecord {
    #[serde(serialize_with = "joined")]
    pub m: Vec<u32>,
    #[serde(serialize_with = "joined")]
    pub h: Vec<u32>,
    pub a: String,
    pub value_re: String,
    pub value_im: String,
    pub method: &'static str,
}

/// Series and closed form for every thimble of sector `m` at `a`, with the
/// largest relative discrepancy.
pub fn two_path(n: usize, m: &[u32], a: &Complex, tol: f64) -> Result<(Vec<(ThimbleIndex, Complex, Complex)>, f64)> {
    let cs = class_sums(n, m, a, tol)?;
    let mut rows = Vec::new();
    let mut worst = 0f64;
    for h in ThimbleIndex::all(n) {
        let s = combine(n, m, &h, &cs).value;
        let c = gamma_closed_form_total(n, m, &h, a)?;
        worst = worst.max(relative_error(&s, &c));
        rows.push((h, s, c));
    }
    Ok((rows, worst))
}

/// `|x - y| / max(|x|, |y|)`, zero when both vanish.
pub fn relative_error(x: &Complex, y: &Complex) -> f64 {
    let scale = x.abs_f64().max(y.abs_f64());
    if scale == 0.0 {
        0.0
    } else {
        (x.clone() - y.clone()).abs_f64() / scale
    }
}

pub fn records(m: &[u32], a: &Complex, rows: &[(ThimbleIndex, Complex, Complex)], digits: usize) -> Vec<OscRecord> {
    let part = |z: &Complex, re: bool| {
        let f = if re { z.re() } else { z.im() };
        if f.is_zero() {
            "0".to_string()
        } else {
            f.to_string_radix(10, Some(digits))
        }
    };
    let mut out = Vec::new();
    for (h, s, c) in rows {
        for (v, method) in [(s, "series"), (c, "gamma")] {
            out.push(OscRecord {
                m: m.to_vec(),
                h: h.h.clone(),
                a: a.to_decimal(digits),
                value_re: part(v, true),
                value_im: part(v, false),
                method,
            });
        }
    }
    out
}

// --- cubic real structure -------------------------------------------------

/// The character of conductor 3: `0, 1, -1` on residues `0, 1, 2`.
pub fn chi_minus3(k: i64) -> i64 {
    match k.rem_euclid(3) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// `sqrt 3 = xi_12 + xi_12^{-1}` in `Z[xi_12]`.
pub fn sqrt3_cyc() -> CycInt {
    CycInt::zeta(12, 1) + CycInt::zeta(12, -1)
}

fn one_minus_xi3(k: i64) -> CycInt {
    CycInt::one(12) - CycInt::zeta(12, 4 * k)
}

/// Outcome of the exact checks behind the cubic real structure.
#[derive(Clone, Debug, Serialize)]
pub struct Chi3Report {
    /// `(h, m)` pairs enumerated.
    pub pairs: usize,
    /// Pairs with a vanishing factor `1 - xi_3^0`.
    pub vanishing: usize,
    /// Failures of `1 - xi_3^k = sqrt3 xi_12^{-chi(k)}` and of its product form.
    pub failures: usize,
    /// Nonvanishing factors for which the identity without `sqrt 3` holds.
    pub bare_identity_holds: usize,
    /// Failures of `chi(m+1) = -chi(2-m)` over `m in {0,1}^3`.
    pub parity_failures: usize,
    /// Failures of `prod(1 - xi_3^{h(2-m)}) = conj prod(1 - xi_3^{h(m+1)})`.
    pub conjugation_failures: usize,
}

impl Chi3Report {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.parity_failures == 0 && self.conjugation_failures == 0
    }
}

/// Checks the factorization of `1 - xi_3^k` through `chi_{-3}` exactly for
/// every `h, m in {0,1,2}^3`.
pub fn chi3_identities() -> Chi3Report {
    let s3 = sqrt3_cyc();
    let mut rep = Chi3Report {
        pairs: 0,
        vanishing: 0,
        failures: 0,
        bare_identity_holds: 0,
        parity_failures: 0,
        conjugation_failures: 0,
    };
    let cube = all_vectors(3, 2);
    for h in &cube {
        for m in &cube {
            rep.pairs += 1;
            let mut prod = CycInt::one(12);
            let mut dot = 0i64;
            let mut vanishes = false;
            for i in 0..3 {
                let k = h[i] as i64 * (m[i] as i64 + 1);
                let lhs = one_minus_xi3(k);
                prod = prod * lhs.clone();
                if k % 3 == 0 {
                    vanishes = true;
                    if !lhs.is_zero() {
                        rep.failures += 1;
                    }
                    continue;
                }
                if chi_minus3(k) != chi_minus3(h[i] as i64) * chi_minus3(m[i] as i64 + 1) {
                    rep.failures += 1;
                }
                dot += chi_minus3(h[i] as i64) * chi_minus3(m[i] as i64 + 1);
                let rhs = CycInt::zeta(12, -chi_minus3(k));
                if lhs == rhs {
                    rep.bare_identity_holds += 1;
                }
                if lhs != s3.clone() * rhs {
                    rep.failures += 1;
                }
            }
            if vanishes {
                rep.vanishing += 1;
                if !prod.is_zero() {
                    rep.failures += 1;
                }
            } else {
                let rhs = s3.clone() * s3.clone() * s3.clone() * CycInt::zeta(12, -dot);
                if prod != rhs {
                    rep.failures += 1;
                }
            }
        }
    }
    for m in all_vectors(3, 1) {
        for &mi in &m {
            if chi_minus3(mi as i64 + 1) != -chi_minus3(2 - mi as i64) {
                rep.parity_failures += 1;
            }
        }
        for h in &cube {
            let f = |mm: &dyn Fn(u32) -> i64| {
                (0..3).fold(CycInt::one(12), |acc, i| acc * one_minus_xi3(h[i] as i64 * mm(m[i])))
            };
            let here = f(&|x| x as i64 + 1);
            let there = f(&|x| 2 - x as i64);
            if there != here.conj() {
                rep.conjugation_failures += 1;
            }
        }
    }
    rep
}

/// Coefficient of `gamma_h^vee` in a real class of the cubic sector `m`.
#[derive(Clone, Debug)]
pub struct ThimbleCoefficient {
    pub h: [u32; 3],
    pub value: Complex,
}

/// `mu xi_12^{-chi(h).chi(m+1)} + conj(mu) xi_12^{chi(h).chi(m+1)}` for every
/// `h in {0,1,2}^3`.
pub fn cubic_real_structure(mu: &Complex, m: &[u32]) -> Result<Vec<ThimbleCoefficient>> {
    if m.len() != 3 || m.iter().any(|&x| x > 1) {
        return Err(Error::DomainError(format!("m = {m:?} is not in {{0,1}}^3")));
    }
    Ok(all_vectors(3, 2)
        .into_iter()
        .map(|h| {
            let dot: i64 = (0..3).map(|i| chi_minus3(h[i] as i64) * chi_minus3(m[i] as i64 + 1)).sum();
            let value = mu.clone() * Complex::root_of_unity(12, -dot) + mu.conj() * Complex::root_of_unity(12, dot);
            ThimbleCoefficient { h: [h[0], h[1], h[2]], value }
        })
        .collect())
}

/// Normalisation `(2 pi) 3^{-1/2} prod Gamma((m_i+1)/3) / prod Gamma(i/3) G(b)` of the
/// cubic sectors with a single admissible `delta = 0`.
pub fn cubic_normalisation(m: &[u32], a: &Complex) -> Result<Complex> {
    if admissible_deltas(2, m) != [0] {
        return Err(Error::DomainError(format!("m = {m:?} has admissible deltas {:?}", admissible_deltas(2, m))));
    }
    let (upper, lower) = closed_form_parameters(2, m, 0);
    let b = a.powi(3) / Complex::from_i64(27);
    let g = eval_rgs(&upper, &lower, &b, None, DEFAULT_MARGIN)?.value;
    let mut c = Complex::from_i64(2) * Complex::pi() / Complex::from_i64(3).sqrt();
    for u in &upper {
        c = c * gamma_rational(u)?;
    }
    for l in &lower {
        c = c / gamma_rational(l)?;
    }
    Ok(c * g)
}

/// Largest deviation, over thimbles `h in {1,2}^3`, of
/// `<z^m Omega, gamma_h> / c_m` from `prod(1 - xi_3^{h_i(m_i+1)})`, and of
/// the `1-m` coefficient from the conjugate of the `m` coefficient, at a
/// real sample `a`.
pub fn cubic_pairing_residual(m: &[u32], a: &Complex, tol: f64) -> Result<f64> {
    let dual: Vec<u32> = m.iter().map(|&x| 1 - x.min(1)).collect();
    let (cm, cd) = (cubic_normalisation(m, a)?, cubic_normalisation(&dual, a)?);
    let (sm, sd) = (class_sums(2, m, a, tol)?, class_sums(2, &dual, a, tol)?);
    let mut worst = 0f64;
    for h in ThimbleIndex::all(2) {
        let vm = combine(2, m, &h, &sm).value / cm.clone();
        let vd = combine(2, &dual, &h, &sd).value / cd.clone();
        let expect = thimble_factor(2, m, &h, 0).to_complex();
        worst = worst.max((vm.clone() - expect).abs_f64());
        worst = worst.max((vd - vm.conj()).abs_f64());
    }
    Ok(worst)
}
