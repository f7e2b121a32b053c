//! Frobenius bases at regular singular points and direct summation of
//! hypergeometric series.

use std::collections::BTreeMap;

use num_traits::{One, Signed, ToPrimitive, Zero};
use crate::numeric::{precision, qi, BigComplex, Scalar};
use crate::pfode::{LocalOperator, Point, ThetaOperator};
use crate::series::LogSeries;
use crate::{Error, Rational, Result};

/// Default number of series terms.
pub const DEFAULT_TRUNC: usize = 200;
/// Default distance kept from the unit circle in [`eval_rgs`].
pub const DEFAULT_MARGIN: f64 = 0.05;

/// Position of a basis element: leading exponent and log index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SolutionLabel {
    pub exponent: Rational,
    pub log_index: usize,
}

#[derive(Clone, Debug)]
pub struct FrobeniusBasis<T> {
    pub point: Point,
    pub labels: Vec<SolutionLabel>,
    pub solutions: Vec<LogSeries<T>>,
    /// Distance to the nearest other singular point, in the local coordinate.
    pub radius: f64,
}

/// Indicial roots at `point`, read off the local operator and checked
/// against the closed-form exponents.
pub fn indicial_roots(op: &ThetaOperator, point: Point) -> Result<Vec<Rational>> {
    let lo = op.local_operator(point)?;
    let roots = lo.indicial().split_rational()?;
    let expected = op.local_exponents(point)?;
    if roots != expected {
        return Err(Error::VerificationFailed(format!(
            "indicial roots at {point}: {roots:?} versus exponents {expected:?}"
        )));
    }
    Ok(roots)
}

/// Local coordinate radius of convergence at `point` for a canonical or
/// power-`p` operator.
fn radius(op: &ThetaOperator, point: Point) -> f64 {
    let s = op.scale.to_f64().unwrap_or(1.0).abs();
    let p = op.power as f64;
    match point {
        Point::Zero => (1.0 / s).powf(1.0 / p),
        Point::Infinity => s.powf(1.0 / p),
        Point::One => 1.0,
    }
}

pub fn frobenius_basis<T: Scalar>(op: &ThetaOperator, point: Point, trunc: usize) -> Result<FrobeniusBasis<T>> {
    if trunc < 2 * op.order() {
        return Err(Error::TruncationError(format!("trunc = {trunc} < 2 * order")));
    }
    let lo = op.local_operator(point)?;
    let (labels, solutions) = frobenius_labelled::<T>(&lo, trunc)?;
    Ok(FrobeniusBasis { point, labels, solutions, radius: radius(op, point) })
}

/// Basis of a local operator, ordered by exponent then log index.
pub fn frobenius_basis_local<T: Scalar>(lo: &LocalOperator, trunc: usize) -> Result<Vec<LogSeries<T>>> {
    Ok(frobenius_labelled(lo, trunc)?.1)
}

fn frobenius_labelled<T: Scalar>(
    lo: &LocalOperator,
    trunc: usize,
) -> Result<(Vec<SolutionLabel>, Vec<LogSeries<T>>)> {
    let ord = lo.order();
    let roots = lo.indicial().split_rational()?;
    if roots.len() != ord {
        return Err(Error::IrregularPoint("indicial polynomial has the wrong degree".into()));
    }
    // classes of roots modulo Z
    let mut classes: BTreeMap<Rational, BTreeMap<i64, usize>> = BTreeMap::new();
    let mut minima: BTreeMap<Rational, Rational> = BTreeMap::new();
    for r in &roots {
        let frac = r - r.floor();
        let e = minima.entry(frac.clone()).or_insert_with(|| r.clone());
        if r < e {
            *e = r.clone();
        }
    }
    for r in &roots {
        let frac = r - r.floor();
        let off = (r - &minima[&frac]).to_integer().to_i64().unwrap_or(0);
        *classes.entry(frac).or_default().entry(off).or_default() += 1;
    }
    let mut out: Vec<(SolutionLabel, LogSeries<T>)> = Vec::new();
    for (frac, mults) in &classes {
        let rho = &minima[frac];
        out.extend(solve_class::<T>(lo, rho, mults, trunc)?);
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out.into_iter().unzip())
}

fn factorial_rational(j: usize) -> Rational {
    (1..=j).fold(Rational::one(), |acc, i| acc * qi(i as i64))
}

/// Frobenius recurrence for one class of exponents `rho + offsets`.
///
/// Coefficient vectors live in the basis `log^j / j!`, where `theta` acts as
/// `sigma + N` with `N` the log-lowering shift.
fn solve_class<T: Scalar>(
    lo: &LocalOperator,
    rho: &Rational,
    mults: &BTreeMap<i64, usize>,
    trunc: usize,
) -> Result<Vec<(SolutionLabel, LogSeries<T>)>> {
    let big_m: usize = mults.values().sum();
    let max_off = *mults.keys().last().unwrap_or(&0) as usize;
    let total = trunc + max_off;
    let deg = lo.terms.len() - 1;

    // Taylor coefficients of P_m at sigma = rho + k - m
    let taylor = |m: usize, k: usize| -> Vec<T> {
        let sigma = rho + qi(k as i64 - m as i64);
        let shifted = lo.terms[m].taylor_shift(&sigma);
        (0..big_m.max(shifted.coeffs().len())).map(|t| T::from_rational(&shifted.coeff(t))).collect()
    };
    let mut p0: Vec<Vec<T>> = Vec::with_capacity(total);
    let mut pm: Vec<Vec<Vec<T>>> = Vec::with_capacity(total);
    for k in 0..total {
        p0.push(taylor(0, k));
        pm.push((1..=deg.min(k)).map(|m| if lo.terms[m].is_zero() { vec![] } else { taylor(m, k) }).collect());
    }
    let apply = |a: &[T], v: &[T]| -> Vec<T> {
        (0..big_m)
            .map(|i| {
                let mut acc = T::zero();
                for (t, at) in a.iter().enumerate() {
                    if i + t < big_m && !at.is_zero() {
                        acc = acc + at.clone() * v[i + t].clone();
                    }
                }
                acc
            })
            .collect()
    };

    let mut results = Vec::new();
    for (&off_sel, &mu_sel) in mults {
        for j_sel in 0..mu_sel {
            let mut v: Vec<Vec<T>> = Vec::with_capacity(total);
            for k in 0..total {
                let mut r = vec![T::zero(); big_m];
                for (mi, a) in pm[k].iter().enumerate() {
                    if a.is_empty() {
                        continue;
                    }
                    let contrib = apply(a, &v[k - mi - 1]);
                    for i in 0..big_m {
                        r[i] = r[i].clone() - contrib[i].clone();
                    }
                }
                let mu = mults.get(&(k as i64)).copied().unwrap_or(0);
                let a = &p0[k];
                if a[..mu].iter().any(|c| !c.is_zero()) {
                    return Err(Error::VerificationFailed("indicial multiplicity mismatch".into()));
                }
                // sum_s a_{mu+s} v_{i+mu+s} = r_i, with v_0..v_{mu-1} free
                let lead = a[mu].clone();
                if lead.is_zero() {
                    return Err(Error::VerificationFailed("resonant recurrence without a root".into()));
                }
                let mut vk = vec![T::zero(); big_m];
                if mu > 0 && k as i64 == off_sel {
                    vk[j_sel] = T::one();
                }
                for i in (0..big_m.saturating_sub(mu)).rev() {
                    let mut acc = r[i].clone();
                    for s in 1..a.len().saturating_sub(mu) {
                        if i + mu + s < big_m {
                            acc = acc - a[mu + s].clone() * vk[i + mu + s].clone();
                        }
                    }
                    vk[i + mu] = acc / lead.clone();
                }
                for ri in r.iter().skip(big_m - mu) {
                    if !ri.is_zero() && T::exact() {
                        return Err(Error::VerificationFailed("log degree overflow".into()));
                    }
                }
                v.push(vk);
            }
            let start = off_sel as usize;
            let logs = big_m;
            let mut coeffs = vec![vec![T::zero(); trunc]; logs];
            for (jj, row) in coeffs.iter_mut().enumerate() {
                let f = T::from_rational(&(Rational::one() / factorial_rational(jj)));
                for (k, c) in row.iter_mut().enumerate() {
                    *c = v[start + k][jj].clone() * f.clone();
                }
            }
            let series = LogSeries { exponent: rho + qi(off_sel), coeffs, trunc }.trim_logs();
            results.push((SolutionLabel { exponent: rho + qi(off_sel), log_index: j_sel }, series));
        }
    }
    Ok(results)
}

/// Value of a hypergeometric series with its a posteriori tail bound.
#[derive(Clone, Debug)]
pub struct RgsValue {
    pub value: BigComplex,
    pub terms: usize,
    pub tail_bound: f64,
}

/// `sum_k prod (alpha_i)_k / prod (beta_j)_k z^k`.
///
/// With `trunc = None` terms are added until the tail bound falls below the
/// working precision.
pub fn eval_rgs(
    upper: &[Rational],
    lower: &[Rational],
    z: &BigComplex,
    trunc: Option<usize>,
    margin: f64,
) -> Result<RgsValue> {
    let az = z.abs_f64();
    if upper.len() > lower.len() && !z.is_zero() {
        return Err(Error::ConvergenceError("more upper than lower parameters".into()));
    }
    if upper.len() == lower.len() && az >= 1.0 - margin {
        return Err(Error::ConvergenceError(format!("|z| = {az} outside the disk of radius {}", 1.0 - margin)));
    }
    let limit = trunc.unwrap_or(1_000_000);
    for b in lower {
        if b.is_integer() && !b.is_positive() && (-b).to_integer().to_usize().is_some_and(|k| k < limit) {
            return Err(Error::ParameterPole(format!("lower parameter {b}")));
        }
    }
    let prec = precision();
    let tol = 2f64.powi(-(prec as i32) - 8);
    let up: Vec<BigComplex> = upper.iter().map(BigComplex::from_rational).collect();
    let lo: Vec<BigComplex> = lower.iter().map(BigComplex::from_rational).collect();
    let abs_up: f64 = upper.iter().map(|a| a.to_f64().unwrap_or(0.0).abs()).fold(0.0, f64::max);
    let abs_lo: f64 = lower.iter().map(|b| b.to_f64().unwrap_or(0.0).abs()).fold(0.0, f64::max);

    let mut sum = BigComplex::zero();
    let mut term = BigComplex::one();
    let mut k = 0usize;
    loop {
        sum = sum + term.clone();
        // next term
        let kk = BigComplex::from_i64(k as i64);
        let mut num = z.clone();
        for a in &up {
            num = num * (a.clone() + kk.clone());
        }
        let mut den = BigComplex::one();
        for b in &lo {
            den = den * (b.clone() + kk.clone());
        }
        term = term * num / den;
        k += 1;
        let bound = tail_bound(&term, k, az, abs_up, abs_lo, upper.len(), lower.len());
        let done = match trunc {
            Some(t) => k >= t,
            None => bound <= tol * sum.abs_f64().max(tol),
        };
        if done || term.is_zero() {
            return Ok(RgsValue { value: sum, terms: k, tail_bound: if term.is_zero() { 0.0 } else { bound } });
        }
        if k > 1_000_000 {
            return Err(Error::ConvergenceError("no convergence after 10^6 terms".into()));
        }
    }
}

/// Geometric bound on `sum_{j>=k} t_j` from the term ratio majorant.
fn tail_bound(term: &BigComplex, k: usize, az: f64, au: f64, al: f64, p: usize, q: usize) -> f64 {
    let kf = k as f64;
    if kf <= al + 1.0 {
        return f64::INFINITY;
    }
    let mut r = az * ((kf + au) / (kf - al)).powi(p as i32);
    if q > p {
        r /= (kf - al).powi((q - p) as i32);
    }
    if r >= 1.0 {
        return f64::INFINITY;
    }
    term.abs_f64() / (1.0 - r)
}

/// `2F1(a, b; c; z)` through [`eval_rgs`].
pub fn hyp2f1(a: &Rational, b: &Rational, c: &Rational, z: &BigComplex) -> Result<BigComplex> {
    Ok(eval_rgs(&[a.clone(), b.clone()], &[c.clone(), Rational::one()], z, None, DEFAULT_MARGIN)?.value)
}

/// Number of terms for `ratio^K K^logs < 2^-(prec+guard)`.
pub fn terms_for_ratio(ratio: f64, prec: u32, logs: usize) -> usize {
    let target = (prec as f64 + 24.0) * std::f64::consts::LN_2;
    let mut k = 8usize;
    while (k as f64) * -ratio.ln() - (logs as f64 + 1.0) * (k as f64).ln() < target {
        k += 8;
        if k > 200_000 {
            break;
        }
    }
    k
}

/// Solutions evaluated at `x` (local coordinate) with derivatives with
/// respect to the global variable.
///
/// Row `r` of the result holds the `r`-th derivative.
pub fn eval_jet(basis: &FrobeniusBasis<BigComplex>, x_global: &BigComplex, rows: usize) -> Result<crate::ComplexMatrix> {
    let local = match basis.point {
        Point::Zero => x_global.clone(),
        Point::One => x_global.clone() - BigComplex::one(),
        Point::Infinity => BigComplex::one() / x_global.clone(),
    };
    let mut m = crate::ComplexMatrix::zeros(rows, basis.solutions.len());
    for (c, s) in basis.solutions.iter().enumerate() {
        let mut d = s.clone();
        for r in 0..rows {
            m[(r, c)] = d.eval(&local)?;
            d = match basis.point {
                Point::Infinity => {
                    // d/db = -x^2 d/dx with x = 1/b
                    d.derivative().shift(&qi(2)).scale(&-BigComplex::one())
                }
                _ => d.derivative(),
            };
        }
    }
    Ok(m)
}

/// Checks that every basis element is annihilated up to the valid order.
pub fn residual<T: Scalar>(lo: &LocalOperator, s: &LogSeries<T>) -> f64 {
    lo.apply(s).truncate(s.trunc.saturating_sub(lo.terms.len())).max_abs()
}
