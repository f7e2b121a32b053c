//! Hypergeometric theta-operators `L(theta) - s x^p U(theta)` in factored
//! parameter form, their reduction, coordinate changes and symmetric powers.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::numeric::{qi, Poly, Scalar};
use crate::sectors::admissible_deltas;
use crate::series::LogSeries;
use crate::{Error, Rational, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variable {
    A,
    B,
    Z,
    T,
}

impl Variable {
    pub fn symbol(self) -> &'static str {
        match self {
            Variable::A => "a",
            Variable::B => "b",
            Variable::Z => "z",
            Variable::T => "t",
        }
    }
}

/// Singular points of a canonical b-form operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Point {
    Zero,
    One,
    Infinity,
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Point::Zero => "0",
            Point::One => "1",
            Point::Infinity => "inf",
        })
    }
}

/// `prod_j (theta + lower_j) - scale * x^power * prod_j (theta + upper_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaOperator {
    pub variable: Variable,
    pub lower: Vec<Rational>,
    pub upper: Vec<Rational>,
    pub scale: Rational,
    pub power: u32,
}

/// Record of the parameter pairs removed by [`reduce`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionCertificate {
    /// Lower parameters removed, in cancellation order.
    pub cancelled_pairs: Vec<String>,
    pub reduced_order: usize,
}

fn sorted(mut v: Vec<Rational>) -> Vec<Rational> {
    v.sort();
    v
}

impl ThetaOperator {
    pub fn new(
        variable: Variable,
        lower: Vec<Rational>,
        upper: Vec<Rational>,
        scale: Rational,
        power: u32,
    ) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(Error::DimensionError(format!(
                "{} lower and {} upper parameters",
                lower.len(),
                upper.len()
            )));
        }
        if power == 0 || scale.is_zero() {
            return Err(Error::NotCanonicalForm("monomial multiplier must be non-trivial".into()));
        }
        Ok(ThetaOperator { variable, lower: sorted(lower), upper: sorted(upper), scale, power })
    }

    /// Canonical `L(theta) - b U(theta)`.
    pub fn b_form(lower: Vec<Rational>, upper: Vec<Rational>) -> Result<Self> {
        Self::new(Variable::B, lower, upper, Rational::one(), 1)
    }

    pub fn order(&self) -> usize {
        self.lower.len()
    }

    pub fn is_canonical(&self) -> bool {
        self.power == 1 && self.scale.is_one()
    }

    pub fn l_poly(&self) -> Poly<Rational> {
        Poly::from_roots(&self.lower.iter().map(|l| -l.clone()).collect::<Vec<_>>())
    }

    pub fn u_poly(&self) -> Poly<Rational> {
        Poly::from_roots(&self.upper.iter().map(|u| -u.clone()).collect::<Vec<_>>())
    }

    /// Conjugation `x^c o D o x^-c`, which shifts every parameter by `-c`.
    pub fn twist(&self, c: &Rational) -> Self {
        ThetaOperator {
            lower: self.lower.iter().map(|l| l - c).collect(),
            upper: self.upper.iter().map(|u| u - c).collect(),
            ..self.clone()
        }
    }

    /// Rewrites in the coordinate `1/x`, normalized to the same shape.
    pub fn invert(&self, variable: Variable) -> Self {
        ThetaOperator {
            variable,
            lower: sorted(self.upper.iter().map(|u| -u.clone()).collect()),
            upper: sorted(self.lower.iter().map(|l| -l.clone()).collect()),
            scale: Rational::one() / &self.scale,
            power: self.power,
        }
    }

    /// Substitutes `b = scale * x^power`, giving the canonical b-form.
    pub fn base_change_to_b(&self) -> Self {
        if self.is_canonical() {
            return ThetaOperator { variable: Variable::B, ..self.clone() };
        }
        let p = qi(self.power as i64);
        ThetaOperator {
            variable: Variable::B,
            lower: self.lower.iter().map(|l| l / &p).collect(),
            upper: self.upper.iter().map(|u| u / &p).collect(),
            scale: Rational::one(),
            power: 1,
        }
    }

    /// Local exponents at a singular point of the canonical form.
    pub fn local_exponents(&self, point: Point) -> Result<Vec<Rational>> {
        match point {
            Point::Zero => Ok(sorted(self.lower.iter().map(|l| -l.clone()).collect())),
            Point::Infinity => {
                if self.power != 1 {
                    return Err(Error::NotCanonicalForm("exponents at infinity need power 1".into()));
                }
                Ok(self.upper.clone())
            }
            Point::One => {
                if !self.is_canonical() {
                    return Err(Error::NotCanonicalForm("point 1 needs the canonical b-form".into()));
                }
                let k = self.order() as i64;
                let sl: Rational = self.lower.iter().sum();
                let su: Rational = self.upper.iter().sum();
                let mut e: Vec<Rational> = (0..k - 1).map(qi).collect();
                e.push(qi(k - 1) + sl - su);
                Ok(sorted(e))
            }
        }
    }

    /// Operator as `sum_j q_j(x) (d/dx)^j`.
    pub fn d_form(&self) -> Vec<Poly<Rational>> {
        let l = self.l_poly();
        let u = self.u_poly();
        let k = self.order();
        let mut xp = vec![Rational::zero(); self.power as usize + 1];
        xp[self.power as usize] = -self.scale.clone();
        let xp = Poly::new(xp);
        let mut out = vec![Poly::zero(); k + 1];
        for i in 0..=k {
            // theta^i = sum_j S(i,j) x^j D^j
            let ci = Poly::constant(l.coeff(i)).add(&xp.scale(&u.coeff(i)));
            for (j, s) in stirling2_row(i).into_iter().enumerate() {
                if s.is_zero() {
                    continue;
                }
                let mut xj = vec![Rational::zero(); j + 1];
                xj[j] = s;
                out[j] = out[j].add(&ci.mul(&Poly::new(xj)));
            }
        }
        out
    }

    /// Local operator `sum_m y^m P_m(theta_y)` in the coordinate at `point`.
    pub fn local_operator(&self, point: Point) -> Result<LocalOperator> {
        match point {
            Point::Zero => {
                let mut terms = vec![Poly::zero(); self.power as usize + 1];
                terms[0] = self.l_poly();
                terms[self.power as usize] = self.u_poly().scale(&-self.scale.clone());
                Ok(LocalOperator { terms })
            }
            Point::Infinity => self.invert(self.variable).local_operator(Point::Zero),
            Point::One => {
                if !self.is_canonical() {
                    return Err(Error::NotCanonicalForm("point 1 needs the canonical b-form".into()));
                }
                let k = self.order();
                let q: Vec<Poly<Rational>> = self.d_form().iter().map(|p| p.taylor_shift(&Rational::one())).collect();
                // y^k q_j(1+y) D^j = y^(k-j) q_j(1+y) ff_j(theta)
                let mut by_power: BTreeMap<usize, Poly<Rational>> = BTreeMap::new();
                for (j, qj) in q.iter().enumerate() {
                    let ff = falling_factorial(j);
                    for (r, c) in qj.coeffs().iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let e = by_power.entry(r + k - j).or_insert_with(Poly::zero);
                        *e = e.add(&ff.scale(c));
                    }
                }
                by_power.retain(|_, p| !p.is_zero());
                let r0 = *by_power.keys().next().ok_or_else(|| Error::DomainError("zero operator".into()))?;
                let top = *by_power.keys().last().unwrap_or(&r0);
                let terms = (r0..=top).map(|r| by_power.get(&r).cloned().unwrap_or_else(Poly::zero)).collect();
                let lo = LocalOperator { terms };
                if lo.terms[0].degree() != Some(k) {
                    return Err(Error::IrregularPoint("indicial polynomial degree drops at 1".into()));
                }
                Ok(lo)
            }
        }
    }

    /// Applies the operator (in its own variable) to a series.
    pub fn apply<T: Scalar>(&self, f: &LogSeries<T>) -> LogSeries<T> {
        let lo = LocalOperator {
            terms: {
                let mut t = vec![Poly::zero(); self.power as usize + 1];
                t[0] = self.l_poly();
                t[self.power as usize] = self.u_poly().scale(&-self.scale.clone());
                t
            },
        };
        lo.apply(f)
    }

    /// Multiset equality of parameters, coefficient and monomial power.
    pub fn same_parameters(&self, other: &ThetaOperator) -> bool {
        self.lower == other.lower && self.upper == other.upper && self.scale == other.scale && self.power == other.power
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "variable": self.variable.symbol(),
            "lower": self.lower.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            "upper": self.upper.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            "scale": self.scale.to_string(),
            "power": self.power,
            "order": self.order(),
            "display": self.to_string(),
        })
    }
}

fn factor_string(params: &[Rational]) -> String {
    let mut counts: BTreeMap<Rational, usize> = BTreeMap::new();
    for p in params {
        *counts.entry(p.clone()).or_default() += 1;
    }
    let mut out = String::new();
    for (p, c) in counts {
        let base = if p.is_zero() {
            "θ".to_string()
        } else if p.is_negative() {
            format!("(θ-{})", -p)
        } else {
            format!("(θ+{p})")
        };
        out.push_str(&base);
        if c > 1 {
            out.push_str(&format!("^{c}"));
        }
    }
    out
}

impl fmt::Display for ThetaOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = self.variable.symbol();
        let mono = if self.power == 1 { x.to_string() } else { format!("{x}^{}", self.power) };
        let coef = if self.scale.is_one() { String::new() } else { format!("{}*", self.scale) };
        write!(f, "{} - {coef}{mono}{}", factor_string(&self.lower), factor_string(&self.upper))
    }
}

/// Stirling numbers of the second kind `S(i, 0..=i)`.
fn stirling2_row(i: usize) -> Vec<Rational> {
    let mut row = vec![Rational::one()];
    for n in 1..=i {
        let mut next = vec![Rational::zero(); n + 1];
        for k in 1..=n {
            let prev = if k < row.len() { row[k].clone() } else { Rational::zero() };
            next[k] = qi(k as i64) * prev + row[k - 1].clone();
        }
        row = next;
    }
    row
}

/// `theta (theta - 1) ... (theta - j + 1)`.
fn falling_factorial(j: usize) -> Poly<Rational> {
    Poly::from_roots(&(0..j as i64).map(qi).collect::<Vec<_>>())
}

/// `sum_m x^m P_m(theta)` in a local coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalOperator {
    pub terms: Vec<Poly<Rational>>,
}

impl LocalOperator {
    pub fn order(&self) -> usize {
        self.terms.first().and_then(|p| p.degree()).unwrap_or(0)
    }

    pub fn indicial(&self) -> &Poly<Rational> {
        &self.terms[0]
    }

    pub fn apply<T: Scalar>(&self, f: &LogSeries<T>) -> LogSeries<T> {
        let mut acc: Option<LogSeries<T>> = None;
        for (m, p) in self.terms.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let term = f.apply_theta_poly(p).shift(&qi(m as i64));
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term).expect("integer-spaced exponents"),
            });
        }
        acc.unwrap_or_else(|| LogSeries::zero(f.exponent.clone(), f.trunc))
    }
}

/// Sector operator of `z^m` in the variable `a`, before reduction.
pub fn pf_operator(n: usize, m: &[u32]) -> Result<ThetaOperator> {
    if m.len() != n + 1 {
        return Err(Error::DimensionError(format!("m has length {}, expected {}", m.len(), n + 1)));
    }
    let big_n = n as i64 + 1;
    let lower = (0..=n as i64).map(|i| qi(i - n as i64)).collect();
    let upper = m.iter().map(|&x| qi(x as i64 + 1)).collect();
    let scale = Rational::one() / Rational::from_integer(num_bigint::BigInt::from(big_n).pow(big_n as u32));
    ThetaOperator::new(Variable::A, lower, upper, scale, big_n as u32)
}

/// Left-cancels factors `(theta + l)` with `x^p (theta + l + p) = (theta + l) x^p`,
/// smallest lower parameter first.
pub fn reduce(op: &ThetaOperator) -> (ThetaOperator, ReductionCertificate) {
    let p = qi(op.power as i64);
    let mut lower = op.lower.clone();
    let mut upper = op.upper.clone();
    let mut cancelled = Vec::new();
    loop {
        let mut hit = None;
        for (i, l) in lower.iter().enumerate() {
            if let Some(j) = upper.iter().position(|u| *u == l + &p) {
                hit = Some((i, j));
                break;
            }
        }
        match hit {
            Some((i, j)) => {
                cancelled.push(lower[i].to_string());
                lower.remove(i);
                upper.remove(j);
            }
            _ => break,
        }
    }
    let reduced_order = lower.len();
    (
        ThetaOperator { lower, upper, ..op.clone() },
        ReductionCertificate { cancelled_pairs: cancelled, reduced_order },
    )
}

/// Reduced canonical b-form of the sector `z^m`.
pub fn sector_operator(n: usize, m: &[u32]) -> Result<ThetaOperator> {
    Ok(reduce(&pf_operator(n, m)?).0.base_change_to_b())
}

/// `(n+1) - #distinct{m_i+1}`.
pub fn reduced_order_law(n: usize, m: &[u32]) -> usize {
    let mut v: Vec<u32> = m.iter().map(|x| x + 1).collect();
    v.sort_unstable();
    v.dedup();
    n + 1 - v.len()
}

/// Number of admissible `delta`, the brute-force count of surviving branches.
pub fn admissible_count(n: usize, m: &[u32]) -> usize {
    admissible_deltas(n, m).len()
}

/// Checks `D_{m+1} o d/da = a^-1 (theta - n - 1) o D_m` on the full a-form
/// operators: once on a generic series with a log term, and once on every
/// Frobenius solution of the reduced `D_m`.
pub fn shift_relation_check(n: usize, m: &[u32], trunc: usize) -> Result<bool> {
    if trunc < 10 {
        return Err(Error::TruncationError(format!("trunc = {trunc} < 10")));
    }
    let dm = pf_operator(n, m)?;
    let m1: Vec<u32> = m.iter().map(|x| x + 1).collect();
    let dm1 = pf_operator(n, &m1)?;
    let shift = Poly::new(vec![qi(-(n as i64) - 1), Rational::one()]);

    let generic = {
        let c0: Vec<Rational> = (0..trunc).map(|k| Rational::new((k * k + 1).into(), (k + 3).into())).collect();
        let c1: Vec<Rational> = (0..trunc).map(|k| Rational::new(((2 * k) as i64 - 5).into(), (k + 2).into())).collect();
        LogSeries { exponent: Rational::new(1.into(), 7.into()), coeffs: vec![c0, c1], trunc }
    };
    let compare = |f: &LogSeries<Rational>| -> Result<()> {
        let lhs = dm1.apply(&f.derivative());
        let rhs = dm.apply(f).apply_theta_poly(&shift).shift(&qi(-1));
        let diff = lhs.sub(&rhs)?;
        for (j, row) in diff.coeffs.iter().enumerate() {
            if let Some(k) = row.iter().position(|c| !c.is_zero()) {
                return Err(Error::VerificationFailed(format!(
                    "shift relation n={n} m={m:?}: coefficient log^{j} x^({}+{k})",
                    diff.exponent
                )));
            }
        }
        Ok(())
    };
    compare(&generic)?;

    let (red, _) = reduce(&dm);
    let basis = crate::frobenius::frobenius_basis_local::<Rational>(&red.local_operator(Point::Zero)?, trunc)?;
    for s in &basis {
        let image = dm1.apply(&s.derivative());
        let valid = image.truncate(trunc.saturating_sub(dm1.power as usize + 1));
        if !valid.is_zero() {
            return Err(Error::VerificationFailed(format!(
                "d/da of a solution of D_m is not annihilated by D_(m+1) (n={n}, m={m:?})"
            )));
        }
    }
    Ok(true)
}

/// Rational function over Q, `num/den` with monic denominator.
#[derive(Clone, Debug, PartialEq)]
struct RatFunc {
    num: Poly<Rational>,
    den: Poly<Rational>,
}

fn poly_gcd(a: &Poly<Rational>, b: &Poly<Rational>) -> Poly<Rational> {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let (_, r) = x.div_rem(&y).expect("non-zero divisor");
        x = y;
        y = r;
    }
    if x.is_zero() {
        Poly::constant(Rational::one())
    } else {
        x.monic()
    }
}

impl RatFunc {
    fn new(num: Poly<Rational>, den: Poly<Rational>) -> Self {
        if num.is_zero() {
            return RatFunc { num, den: Poly::constant(Rational::one()) };
        }
        let g = poly_gcd(&num, &den);
        let (n, _) = num.div_rem(&g).expect("gcd divides");
        let (d, _) = den.div_rem(&g).expect("gcd divides");
        let l = d.lead();
        RatFunc { num: n.scale(&(Rational::one() / &l)), den: d.monic() }
    }
    fn poly(p: Poly<Rational>) -> Self {
        RatFunc::new(p, Poly::constant(Rational::one()))
    }
    fn zero() -> Self {
        Self::poly(Poly::zero())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        RatFunc::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn neg(&self) -> Self {
        RatFunc { num: self.num.scale(&-Rational::one()), den: self.den.clone() }
    }
    fn mul(&self, o: &Self) -> Self {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }
    fn div(&self, o: &Self) -> Self {
        RatFunc::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }
    fn scale(&self, c: &Rational) -> Self {
        RatFunc::new(self.num.scale(c), self.den.clone())
    }
    /// `x d/dx`.
    fn theta(&self) -> Self {
        let x = Poly::x();
        let n = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        RatFunc::new(x.mul(&n), self.den.mul(&self.den))
    }
}

/// Operator annihilating all degree-`k` products of solutions of `op`.
///
/// Works on the companion system of `u^(k-i) (theta u)^i`, then reads the
/// result back as a hypergeometric operator.
pub fn symmetric_power(op: &ThetaOperator, k: usize) -> Result<ThetaOperator> {
    if k == 0 {
        return Err(Error::OrderError("symmetric power 0".into()));
    }
    let ord = op.order();
    if ord > 2 {
        return Err(Error::OrderError(format!("symmetric power of an order-{ord} operator")));
    }
    if k == 1 {
        return Ok(op.clone());
    }
    let l = op.l_poly();
    let u = op.u_poly();
    let p = op.power as usize;
    let mut xp = vec![Rational::zero(); p + 1];
    xp[p] = op.scale.clone();
    let sxp = Poly::new(xp);
    let lead = Poly::constant(Rational::one()).sub(&sxp);
    // coefficient of theta^i divided by the leading coefficient
    let coef = |i: usize| RatFunc::new(Poly::constant(l.coeff(i)).sub(&sxp.scale(&u.coeff(i))), lead.clone());

    let dim = if ord == 1 { 1 } else { k + 1 };
    // theta M = C M
    let mut c = vec![vec![RatFunc::zero(); dim]; dim];
    if ord == 1 {
        c[0][0] = coef(0).scale(&-qi(k as i64));
    } else {
        let a = coef(1);
        let b = coef(0);
        for i in 0..dim {
            if i + 1 < dim {
                c[i][i + 1] = RatFunc::poly(Poly::constant(qi((k - i) as i64)));
            }
            c[i][i] = a.scale(&-qi(i as i64));
            if i > 0 {
                c[i][i - 1] = b.scale(&-qi(i as i64));
            }
        }
    }
    // rows R_r with theta^r (u^k) = R_r . M
    let mut rows: Vec<Vec<RatFunc>> = Vec::new();
    let mut r0 = vec![RatFunc::zero(); dim];
    r0[0] = RatFunc::poly(Poly::constant(Rational::one()));
    rows.push(r0);
    for _ in 0..dim {
        let prev = rows.last().expect("non-empty");
        let mut next: Vec<RatFunc> = prev.iter().map(|e| e.theta()).collect();
        for (i, pi) in prev.iter().enumerate() {
            if pi.is_zero() {
                continue;
            }
            for (j, cij) in c[i].iter().enumerate() {
                if !cij.is_zero() {
                    next[j] = next[j].add(&pi.mul(cij));
                }
            }
        }
        rows.push(next);
    }
    // solve sum_{r<dim} coeff_r R_r = -R_dim (columns are the unknowns)
    let mut aug: Vec<Vec<RatFunc>> = (0..dim)
        .map(|j| {
            let mut row: Vec<RatFunc> = (0..dim).map(|r| rows[r][j].clone()).collect();
            row.push(rows[dim][j].neg());
            row
        })
        .collect();
    for col in 0..dim {
        let piv = (col..dim)
            .find(|&r| !aug[r][col].is_zero())
            .ok_or_else(|| Error::VerificationFailed("degenerate symmetric-power system".into()))?;
        aug.swap(col, piv);
        let pv = aug[col][col].clone();
        for e in aug[col].iter_mut() {
            *e = e.div(&pv);
        }
        for r in 0..dim {
            if r != col && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for j in 0..=dim {
                    let v = aug[r][j].sub(&f.mul(&aug[col][j]));
                    aug[r][j] = v;
                }
            }
        }
    }
    let mut coeffs: Vec<RatFunc> = (0..dim).map(|r| aug[r][dim].clone()).collect();
    coeffs.push(RatFunc::poly(Poly::constant(Rational::one())));
    hypergeometric_from_coefficients(&coeffs, op.variable, op.power)
}

/// Reads `sum_r c_r(x) theta^r` back as `L(theta) - s x^p U(theta)`.
fn hypergeometric_from_coefficients(coeffs: &[RatFunc], variable: Variable, p: u32) -> Result<ThetaOperator> {
    let mut den = Poly::constant(Rational::one());
    for c in coeffs {
        let g = poly_gcd(&den, &c.den);
        let (q, _) = c.den.div_rem(&g)?;
        den = den.mul(&q);
    }
    let mut polys: Vec<Poly<Rational>> = coeffs.iter().map(|c| c.num.mul(&den.div_rem(&c.den).expect("lcm").0)).collect();
    let g = polys.iter().filter(|p| !p.is_zero()).fold(Poly::zero(), |acc, p| if acc.is_zero() { p.clone() } else { poly_gcd(&acc, p) });
    if !g.is_zero() {
        polys = polys.iter().map(|p| p.div_rem(&g).expect("gcd").0).collect();
    }
    let p = p as usize;
    let mut lc = Vec::new();
    let mut uc = Vec::new();
    for poly in &polys {
        for (i, c) in poly.coeffs().iter().enumerate() {
            if i != 0 && i != p && !c.is_zero() {
                return Err(Error::NotCanonicalForm("symmetric power is not hypergeometric".into()));
            }
        }
        lc.push(poly.coeff(0));
        uc.push(poly.coeff(p));
    }
    let lpoly = Poly::new(lc);
    let upoly = Poly::new(uc);
    let ord = coeffs.len() - 1;
    if lpoly.degree() != Some(ord) || upoly.degree() != Some(ord) {
        return Err(Error::NotCanonicalForm("symmetric power is not hypergeometric".into()));
    }
    let scale = -(upoly.lead() / lpoly.lead());
    let lower: Vec<Rational> = lpoly.split_rational()?.into_iter().map(|r| -r).collect();
    let upper: Vec<Rational> = upoly.split_rational()?.into_iter().map(|r| -r).collect();
    ThetaOperator::new(variable, lower, upper, scale, p as u32)
}

