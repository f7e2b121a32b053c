//! Genus-zero A-side series of the Fermat quartic K3 and its quotients.
//!
//! Series are stored with the prefactor `z e^{eps t}` (`eps = P / z`)
//! stripped. Coefficients are exact rationals in `e^{dt}`, `eps` and the
//! extended-fan variables `x_j`. The Novikov variable is set to 1.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::numeric::{harmonic, pochhammer, q, qi, Poly};
use crate::pfode::{pf_operator, reduce, ThetaOperator, Variable};
use crate::sectors::all_vectors;
use crate::{Error, Rational, Result};

// --- truncated power series in eps -----------------------------------------

/// `a * b mod eps^e`.
fn tmul(a: &[Rational], b: &[Rational], e: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); e];
    for (i, x) in a.iter().enumerate().take(e) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(e - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `1 / a mod eps^e`; needs `a(0) != 0`.
fn tinv(a: &[Rational], e: usize) -> Result<Vec<Rational>> {
    let a0 = a.first().cloned().unwrap_or_else(Rational::zero);
    if a0.is_zero() {
        return Err(Error::DomainError("series with zero constant term is not invertible".into()));
    }
    let mut out = vec![Rational::zero(); e];
    out[0] = Rational::one() / &a0;
    for k in 1..e {
        let mut s = Rational::zero();
        for j in 1..=k.min(a.len() - 1) {
            s += &a[j] * &out[k - j];
        }
        out[k] = -s / &a0;
    }
    Ok(out)
}

/// `c eps + v`.
fn lin(c: i64, v: Rational) -> Vec<Rational> {
    vec![v, qi(c)]
}

fn tpad(mut a: Vec<Rational>, e: usize) -> Vec<Rational> {
    a.resize(e, Rational::zero());
    a
}

// --- cohomology-valued series ----------------------------------------------

/// Index of a coefficient: degree `d` of `e^{dt}`, monomial `x^k`, power of
/// `eps`, and the inertia label `b = label / 4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CohKey {
    pub d: usize,
    pub x: [u32; 4],
    pub eps: usize,
    pub label: u8,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CohSeries {
    pub trunc_q: usize,
    pub trunc_eps: usize,
    pub coeffs: BTreeMap<CohKey, Rational>,
}

impl CohSeries {
    fn new(trunc_q: usize, trunc_eps: usize) -> Self {
        CohSeries { trunc_q, trunc_eps, coeffs: BTreeMap::new() }
    }

    fn add_to(&mut self, key: CohKey, v: Rational) {
        if v.is_zero() {
            return;
        }
        let e = self.coeffs.entry(key).or_insert_with(Rational::zero);
        *e += v;
        if e.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    pub fn get(&self, key: &CohKey) -> Rational {
        self.coeffs.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficients of `e^{dt}` in the untwisted, `x = 0` slice at `eps^j`.
    pub fn slice(&self, j: usize) -> Vec<Rational> {
        (0..=self.trunc_q).map(|d| self.get(&CohKey { d, x: [0; 4], eps: j, label: 0 })).collect()
    }
}

/// `prod_{l=1}^{4d} (4 eps + l) / prod_{l=1}^{d} (eps + l)^4 mod eps^e`.
fn quartic_coefficient(d: usize, e: usize) -> Result<Vec<Rational>> {
    let mut num = tpad(vec![Rational::one()], e);
    for l in 1..=4 * d as i64 {
        num = tmul(&num, &lin(4, qi(l)), e);
    }
    let mut den = tpad(vec![Rational::one()], e);
    for l in 1..=d as i64 {
        for _ in 0..4 {
            den = tmul(&den, &lin(1, qi(l)), e);
        }
    }
    Ok(tmul(&num, &tinv(&den, e)?, e))
}

/// `I_Q / (z e^{eps t}) = sum_d e^{dt} prod(4P + lz) / prod(P + lz)^4`,
/// expanded to `eps^{trunc_eps}`.
pub fn i_function_quartic(trunc_q: usize, trunc_eps: usize) -> Result<CohSeries> {
    if trunc_eps > 3 {
        return Err(Error::TruncationError(format!("trunc_eps = {trunc_eps} exceeds P^3")));
    }
    let e = trunc_eps + 1;
    let mut s = CohSeries::new(trunc_q, trunc_eps);
    for d in 0..=trunc_q {
        for (j, c) in quartic_coefficient(d, e)?.into_iter().enumerate() {
            s.add_to(CohKey { d, x: [0; 4], eps: j, label: 0 }, c);
        }
    }
    Ok(s)
}

/// `(4d)! / (d!)^4`.
pub fn quartic_f_coefficient(d: usize) -> Rational {
    let fact = |k: usize| (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i));
    Rational::new(fact(4 * d), fact(d).pow(4))
}

/// Coefficients of `3F2(1/4, 2/4, 3/4; 1, 1; 4^4 e^t)`.
pub fn quartic_3f2_coefficients(trunc: usize) -> Vec<Rational> {
    (0..=trunc)
        .map(|d| {
            let num = pochhammer(&q(1, 4), d) * pochhammer(&q(1, 2), d) * pochhammer(&q(3, 4), d);
            let den = pochhammer(&qi(1), d).pow(3);
            num / den * Rational::from_integer(BigInt::from(256).pow(d as u32))
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct QdeReport {
    pub trunc: usize,
    /// Nonzero residual coefficients `(d, eps power, value)`.
    pub residual: Vec<(usize, usize, String)>,
    /// The residual is `eps^3` at `d = 0` alone, which is zero in `H^*(Q)`.
    pub passed: bool,
}

/// Applies `d_t^3 - 4^4 e^t prod_{k=1}^3 (d_t + k/4)` to the series.
pub fn qde_check(series: &CohSeries) -> QdeReport {
    let e = series.trunc_eps + 1;
    let coeff = |d: usize| -> Vec<Rational> { (0..e).map(|j| series.get(&CohKey { d, x: [0; 4], eps: j, label: 0 })).collect() };
    let mut residual = Vec::new();
    for d in 0..=series.trunc_q {
        // d_t acts on e^{(eps + d) t} as (eps + d)
        let mut r = coeff(d);
        for _ in 0..3 {
            r = tmul(&r, &lin(1, qi(d as i64)), e);
        }
        if d > 0 {
            let mut s = coeff(d - 1);
            for k in 1..=3 {
                s = tmul(&s, &lin(1, qi(d as i64 - 1) + q(k, 4)), e);
            }
            for (x, y) in r.iter_mut().zip(s) {
                *x -= y * qi(256);
            }
        }
        for (j, v) in r.into_iter().enumerate() {
            if !v.is_zero() {
                residual.push((d, j, v.to_string()));
            }
        }
    }
    let expected: Vec<(usize, usize, String)> =
        if series.trunc_eps >= 3 { vec![(0, 3, "1".to_string())] } else { vec![] };
    let passed = residual == expected;
    QdeReport { trunc: series.trunc_q, residual, passed }
}

/// Mirror map data: `F`, the `eps^1` slice `G - tF`, and `T - t = (G - tF)/F`.
#[derive(Clone, Debug, Serialize)]
pub struct MirrorMap {
    pub f: Vec<String>,
    pub g: Vec<String>,
    pub t_minus_t: Vec<String>,
    /// Leading coefficient of `J = I / F`.
    pub j_leading: String,
    #[serde(skip)]
    pub exact: (Vec<Rational>, Vec<Rational>, Vec<Rational>),
}

pub fn mirror_map_quartic(trunc: usize) -> Result<MirrorMap> {
    if trunc < 2 {
        return Err(Error::TruncationError(format!("trunc = {trunc} < 2")));
    }
    let s = i_function_quartic(trunc, 1)?;
    let f = s.slice(0);
    let g = s.slice(1);
    let ratio = tmul(&g, &tinv(&f, trunc + 1)?, trunc + 1);
    let j_leading = (f[0].clone() / &f[0]).to_string();
    let strs = |v: &[Rational]| v.iter().map(|x| x.to_string()).collect();
    Ok(MirrorMap { f: strs(&f), g: strs(&g), t_minus_t: strs(&ratio), j_leading, exact: (f, g, ratio) })
}

/// `4 F_d (H_{4d} - H_d)`, the derivative at `eps = 0` of the quartic coefficient.
pub fn quartic_g_closed_form(d: usize) -> Rational {
    quartic_f_coefficient(d) * qi(4) * (harmonic(4 * d) - harmonic(d))
}

// --- minimal quotient ------------------------------------------------------

fn factorial(k: u32) -> Rational {
    Rational::from_integer((1..=k as u64).fold(BigInt::one(), |acc, i| acc * BigInt::from(i)))
}

fn minimal_label(k: &[u32; 4]) -> u8 {
    ((k[1] + 2 * k[2] + 3 * k[3]) % 4) as u8
}

/// Twisted I-function of `Q x B mu_4` summed directly over `(d, k)`, with
/// `d, k_j <= trunc` and the `z^{-|k|}` power implied by `x`.
pub fn i_tw_minimal(trunc: usize, trunc_eps: usize) -> Result<CohSeries> {
    if trunc == 0 {
        return Err(Error::TruncationError("trunc must be positive".into()));
    }
    let e = trunc_eps + 1;
    let mut s = CohSeries::new(trunc, trunc_eps);
    for d in 0..=trunc {
        // I_{lambda,b} M_{lambda,b} with the k-part applied below
        let mut m = tpad(vec![Rational::one()], e);
        for l in 1..=4 * d as i64 {
            m = tmul(&m, &lin(4, qi(l)), e);
        }
        let mut i = tpad(vec![Rational::one()], e);
        for l in 1..=d as i64 {
            let inv = tinv(&lin(1, qi(l)), e)?;
            for _ in 0..4 {
                i = tmul(&i, &inv, e);
            }
        }
        let im = tmul(&i, &m, e);
        for kv in all_vectors(4, trunc as u32) {
            let k = [kv[0], kv[1], kv[2], kv[3]];
            let kf = k.iter().fold(Rational::one(), |acc, &x| acc * factorial(x));
            for (j, c) in im.iter().enumerate() {
                s.add_to(CohKey { d, x: k, eps: j, label: minimal_label(&k) }, c / &kf);
            }
        }
    }
    Ok(s)
}

/// `I_Q` times `sum_k prod x_j^{k_j} / (z^{k_j} k_j!) 1_{<(k_1+2k_2+3k_3)/4>}`.
pub fn i_tw_minimal_product(trunc: usize, trunc_eps: usize) -> Result<CohSeries> {
    let iq = i_function_quartic(trunc, trunc_eps)?;
    let mut s = CohSeries::new(trunc, trunc_eps);
    for kv in all_vectors(4, trunc as u32) {
        let k = [kv[0], kv[1], kv[2], kv[3]];
        let w = Rational::one() / k.iter().fold(Rational::one(), |acc, &x| acc * factorial(x));
        for (key, c) in &iq.coeffs {
            s.add_to(CohKey { x: k, label: minimal_label(&k), ..*key }, c * &w);
        }
    }
    Ok(s)
}

// --- maximal quotient ------------------------------------------------------

/// One of the series into which `I_{tw,k}` splits, indexed by a residue
/// class of `k_j mod 4`: `d` runs over `d0 + N`, `d0 = <k_{j*}/4>`.
#[derive(Clone, Debug, Serialize)]
pub struct JStarSeries {
    /// Indices `j` with `k_j = k_{j*} mod 4`.
    pub members: Vec<usize>,
    pub d0: String,
    /// `<k_j/4 - d>` for every `j`; constant along the class.
    pub label: Vec<String>,
    /// Exponent of `z` carried by the class, `-sum label`.
    pub z_power: String,
    /// `eps` truncation: the number of members.
    pub eps_order: usize,
    /// Dimension of the inertia component, `members - 1`.
    pub dimension: usize,
    #[serde(skip)]
    pub coeffs: Vec<Vec<Rational>>,
    #[serde(skip)]
    d0_exact: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistedComponent {
    pub k: [u32; 4],
    pub trunc: usize,
    pub classes: Vec<JStarSeries>,
}

fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

/// `Gamma(eps + 1 - f) / Gamma(eps + 1 + e)` with `e + f` an integer.
fn gamma_ratio(e_val: &Rational, f: &Rational, order: usize) -> Result<Vec<Rational>> {
    let m = (e_val + f).to_integer();
    let m: i64 = m.try_into().map_err(|_| Error::DomainError("degree out of range".into()))?;
    let mut out = tpad(vec![Rational::one()], order);
    if m >= 0 {
        let mut den = tpad(vec![Rational::one()], order);
        for s in 1..=m {
            den = tmul(&den, &lin(1, qi(s) - f), order);
        }
        out = tinv(&den, order)?;
    } else {
        for s in (m + 1)..=0 {
            out = tmul(&out, &lin(1, qi(s) - f), order);
        }
    }
    Ok(out)
}

/// `I_{tw,k}` as its `j*`-series, each with `trunc + 1` terms.
pub fn i_tw_maximal(k: [u32; 4], trunc: usize) -> Result<TwistedComponent> {
    if trunc == 0 {
        return Err(Error::TruncationError("trunc must be positive".into()));
    }
    let quarter = |x: u32| q(x as i64, 4);
    let mut classes = Vec::new();
    let mut seen = Vec::new();
    for js in 0..4 {
        let r = k[js] % 4;
        if seen.contains(&r) {
            continue;
        }
        seen.push(r);
        let members: Vec<usize> = (0..4).filter(|&j| k[j] % 4 == r).collect();
        let order = members.len();
        let d0 = quarter(r);
        let label: Vec<Rational> = k.iter().map(|&kj| frac(&(quarter(kj) - &d0))).collect();
        let z_power = -label.iter().fold(Rational::zero(), |acc, x| acc + x);
        let mut coeffs = Vec::with_capacity(trunc + 1);
        for n in 0..=trunc {
            let d = &d0 + qi(n as i64);
            // Gamma(4 eps + 4d + 1) / Gamma(4 eps + 1)
            let mut c = tpad(vec![Rational::one()], order);
            let four_d: i64 = (&d * qi(4)).to_integer().try_into().unwrap_or(0);
            for l in 1..=four_d {
                c = tmul(&c, &lin(4, qi(l)), order);
            }
            for (j, &kj) in k.iter().enumerate() {
                let e_val = &d - quarter(kj);
                c = tmul(&c, &gamma_ratio(&e_val, &label[j], order)?, order);
            }
            coeffs.push(c);
        }
        classes.push(JStarSeries {
            members,
            d0: d0.to_string(),
            label: label.iter().map(|x| x.to_string()).collect(),
            z_power: z_power.to_string(),
            eps_order: order,
            dimension: order - 1,
            coeffs,
            d0_exact: d0,
        });
    }
    Ok(TwistedComponent { k, trunc, classes })
}

/// First nonzero coefficient of the residual, if any.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualLocation {
    pub class: usize,
    pub n: usize,
    pub eps: usize,
    pub value: String,
}

impl TwistedComponent {
    /// `(prod_j (d_t - k_j/4) - 4^4 e^t prod_{i=1}^4 (d_t + i/4)) I_{tw,k}`
    /// on each class, modulo its `eps` truncation.
    pub fn ode_residual(&self) -> Option<ResidualLocation> {
        for (ci, cl) in self.classes.iter().enumerate() {
            let e = cl.eps_order;
            for n in 0..cl.coeffs.len() {
                let d = &cl.d0_exact + qi(n as i64);
                let mut r = cl.coeffs[n].clone();
                for &kj in &self.k {
                    r = tmul(&r, &lin(1, &d - q(kj as i64, 4)), e);
                }
                if n > 0 {
                    let mut s = cl.coeffs[n - 1].clone();
                    for i in 1..=4 {
                        s = tmul(&s, &lin(1, &d - qi(1) + q(i, 4)), e);
                    }
                    for (x, y) in r.iter_mut().zip(s) {
                        *x -= y * qi(256);
                    }
                }
                if let Some((j, v)) = r.iter().enumerate().find(|(_, v)| !v.is_zero()) {
                    return Some(ResidualLocation { class: ci, n, eps: j, value: v.to_string() });
                }
            }
        }
        None
    }

    /// Sum of the inertia-component dimensions over the classes.
    pub fn sector_dimension(&self) -> usize {
        self.classes.iter().map(|c| c.dimension).sum()
    }
}

/// `4 - #{k_j}`.
pub fn n_k(k: &[u32; 4]) -> usize {
    let mut v = k.to_vec();
    v.sort_unstable();
    v.dedup();
    4 - v.len()
}

/// The displayed ODE of `I_{tw,k}` rewritten in `a` with `e^t = a^{-4}`,
/// by substituting `d_t = -theta_a / 4` and clearing `a^{-4}`.
pub fn mirror_operator(k: &[u32; 4]) -> Result<ThetaOperator> {
    let l_t = Poly::from_roots(&k.iter().map(|&x| q(x as i64, 4)).collect::<Vec<_>>());
    let u_t = Poly::from_roots(&(1..=4).map(|i| -q(i, 4)).collect::<Vec<_>>()).scale(&qi(256));
    let sub = q(-1, 4);
    // e^t U_t(theta) f = a^-4 U_a f, so U_a - a^4 L_a is the a-form
    let l_a = l_t.dilate(&sub);
    let u_a = u_t.dilate(&sub);
    let lower = u_a.split_rational()?.into_iter().map(|r| -r).collect();
    let upper = l_a.split_rational()?.into_iter().map(|r| -r).collect();
    ThetaOperator::new(Variable::A, lower, upper, l_a.lead() / u_a.lead(), 4)
}

/// `mirror_operator(k)` equals the sector operator of `a zeta[z^m Omega]`
/// for `m = k`, i.e. the pf operator twisted by `a^1`.
pub fn dictionary_matches(k: &[u32; 4]) -> Result<bool> {
    Ok(mirror_operator(k)? == pf_operator(3, k)?.twist(&qi(1)))
}

/// Reduced order of the quartic sector operator with `m = k`.
pub fn pfode_reduced_order(k: &[u32; 4]) -> Result<usize> {
    Ok(reduce(&pf_operator(3, k)?).1.reduced_order)
}

// --- Chen-Ruan census ------------------------------------------------------

/// Inertia components of `Q / G`, `G = (Z/4)^4 / diagonal`, grouped by the
/// eigenspace partition of the group element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    /// Eigenspace sizes, descending.
    pub partition: Vec<usize>,
    pub elements: usize,
    /// `dim H^*` of the fixed locus of one element.
    pub dim_each: usize,
}

/// Fixed locus of `g` in `Q` is a union of Fermat quartics in the
/// eigenspaces; modulo `G` one in `r` variables has coarse space `P^{r-2}`.
pub fn chen_ruan_census() -> Vec<CensusRow> {
    let mut rows: Vec<CensusRow> = Vec::new();
    for g in all_vectors(4, 3) {
        // one representative per diagonal coset
        if g[0] != 0 {
            continue;
        }
        let mut sizes: Vec<usize> = (0..4u32).map(|v| g.iter().filter(|&&x| x == v).count()).filter(|&c| c > 0).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        let dim: usize = sizes.iter().map(|&r| r.saturating_sub(1)).sum();
        match rows.iter_mut().find(|r| r.partition == sizes) {
            Some(r) => r.elements += 1,
            None => rows.push(CensusRow { partition: sizes, elements: 1, dim_each: dim }),
        }
    }
    rows.sort_by(|a, b| b.partition.cmp(&a.partition));
    rows
}

pub fn chen_ruan_dimension() -> usize {
    chen_ruan_census().iter().map(|r| r.elements * r.dim_each).sum()
}

/// Orbit representatives of `k in {0..3}^4` (descending), and their shifts
/// by `(1,1,1,1)`.
pub fn maximal_sweep_keys() -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for v in all_vectors(4, 3) {
        if v.windows(2).all(|w| w[0] >= w[1]) {
            out.push([v[0], v[1], v[2], v[3]]);
        }
    }
    let shifted: Vec<[u32; 4]> = out.iter().map(|k| k.map(|x| x + 1)).collect();
    out.extend(shifted);
    out
}

/// Summary of the maximal-quotient checks.
#[derive(Clone, Debug, Serialize)]
pub struct MaximalReport {
    pub trunc: usize,
    pub keys_checked: usize,
    pub ode_failures: Vec<([u32; 4], ResidualLocation)>,
    /// `k` with `N_k` different from the sum of class dimensions or from
    /// the reduced sector order.
    pub dimension_failures: Vec<[u32; 4]>,
    pub dictionary_failures: Vec<[u32; 4]>,
}

impl MaximalReport {
    pub fn passed(&self) -> bool {
        self.ode_failures.is_empty() && self.dimension_failures.is_empty() && self.dictionary_failures.is_empty()
    }
}

pub fn maximal_check(trunc: usize) -> Result<MaximalReport> {
    let keys = maximal_sweep_keys();
    let mut ode_failures = Vec::new();
    for k in &keys {
        if let Some(loc) = i_tw_maximal(*k, trunc)?.ode_residual() {
            ode_failures.push((*k, loc));
        }
    }
    let mut dimension_failures = Vec::new();
    let mut dictionary_failures = Vec::new();
    for v in all_vectors(4, 3) {
        let k = [v[0], v[1], v[2], v[3]];
        let comp = i_tw_maximal(k, 1)?;
        if comp.sector_dimension() != n_k(&k) || pfode_reduced_order(&k)? != n_k(&k) {
            dimension_failures.push(k);
        }
        if !dictionary_matches(&k)? {
            dictionary_failures.push(k);
        }
    }
    Ok(MaximalReport { trunc, keys_checked: keys.len(), ode_failures, dimension_failures, dictionary_failures })
}
