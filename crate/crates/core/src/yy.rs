//! Quintic periods at the large-complex-structure point and the
//! Yamaguchi-Yau differential ring.
//!
//! Conventions: `z` is the standard coordinate with operator
//! `theta^4 - 5^5 z prod_k (theta + k/5)`, `I_j` is the Frobenius solution
//! led by `log(z)^j / j!`, and `I_2`, `I_3` carry the extra factor 5 that the
//! intersection number of the quintic puts in front of them. The three
//! relations are checked with `' = theta`; ring closure is checked with
//! `' = d/dz` on the four generators.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::frobenius::frobenius_basis;
use crate::numeric::{q, qi, Poly};
use crate::pfode::{Point, ThetaOperator, Variable};
use crate::series::LogSeries;
use crate::{Error, Rational, Result};

type S = LogSeries<Rational>;

/// Scale of the quintic coordinate: `b = 5^5 z`.
pub const QUINTIC_SCALE: i64 = 3125;

pub fn quintic_operator() -> ThetaOperator {
    ThetaOperator::new(Variable::Z, vec![qi(0); 4], (1..=4).map(|k| q(k, 5)).collect(), qi(QUINTIC_SCALE), 1)
        .expect("valid parameters")
}

/// Periods `I_0..I_3` and the ratios built from them.
#[derive(Clone, Debug)]
pub struct YyState {
    pub trunc: usize,
    pub periods: [S; 4],
    pub t: S,
    pub i20: S,
    pub i30: S,
    /// `5 / (1 - 5^5 z)`.
    pub c: S,
}

fn geometric(ratio: i64, trunc: usize) -> Vec<Rational> {
    let mut v = Vec::with_capacity(trunc);
    let mut p = Rational::one();
    for _ in 0..trunc {
        v.push(p.clone());
        p *= qi(ratio);
    }
    v
}

impl YyState {
    pub fn new(trunc: usize) -> Result<Self> {
        if trunc < 10 {
            return Err(Error::TruncationError(format!("trunc = {trunc} < 10")));
        }
        let basis = frobenius_basis::<Rational>(&quintic_operator(), Point::Zero, trunc)?;
        let mut periods = Vec::with_capacity(4);
        for j in 0..4usize {
            let idx = basis
                .labels
                .iter()
                .position(|l| l.exponent.is_zero() && l.log_index == j)
                .ok_or_else(|| Error::VerificationFailed(format!("no solution with log index {j}")))?;
            let s = &basis.solutions[idx];
            // leading term log^j / j! with no lower-log constants
            let fact = (1..=j as i64).fold(Rational::one(), |a, i| a * qi(i));
            let lead = s.coeff(j, 0) * &fact;
            if lead.is_zero() || (0..j).any(|i| !s.coeff(i, 0).is_zero()) {
                return Err(Error::VerificationFailed(format!("solution {j} is not in Frobenius normal form")));
            }
            let mut s = s.scale(&(Rational::one() / lead));
            if j >= 2 {
                s = s.scale(&qi(5));
            }
            periods.push(s);
        }
        let periods: [S; 4] = periods.try_into().expect("four periods");
        let i0 = &periods[0];
        let t = periods[1].div(i0)?;
        let i20 = periods[2].div(i0)?;
        let i30 = periods[3].div(i0)?;
        let c = S::from_coeffs(Rational::zero(), geometric(QUINTIC_SCALE, trunc)).scale(&qi(5));
        Ok(YyState { trunc, periods, t, i20, i30, c })
    }

    /// `u = 5^5 z / (1 - 5^5 z) = C/5 - 1`.
    pub fn u(&self) -> S {
        self.c.scale(&q(1, 5)).sub(&S::constant(Rational::one(), self.trunc)).expect("same exponent")
    }
}

/// First non-zero coefficient of a residual, if any, as (log power, exponent, value).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualEntry {
    pub log_power: usize,
    pub exponent: String,
    pub value: String,
}

/// Outcome of one identity checked coefficient-wise.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    /// Residual is known for all powers of `z` below this.
    pub checked_to: i64,
    pub first_bad: Option<ResidualEntry>,
}

impl IdentityCheck {
    fn from_residual(name: &str, r: &S) -> Self {
        let mut first: Option<(usize, usize)> = None;
        for (j, row) in r.coeffs.iter().enumerate() {
            for (k, c) in row.iter().enumerate() {
                if !c.is_zero() && first.is_none_or(|(_, k0)| k < k0) {
                    first = Some((j, k));
                }
            }
        }
        IdentityCheck {
            name: name.to_string(),
            checked_to: (&r.exponent + qi(r.trunc as i64)).floor().to_integer().try_into().unwrap_or(i64::MAX),
            first_bad: first.map(|(j, k)| ResidualEntry {
                log_power: j,
                exponent: (&r.exponent + qi(k as i64)).to_string(),
                value: r.coeffs[j][k].to_string(),
            }),
        }
    }

    pub fn holds(&self) -> bool {
        self.first_bad.is_none()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct YyReport {
    pub trunc: usize,
    pub relations: Vec<IdentityCheck>,
    /// The third relation with `C` in place of `u`; expected to fail.
    pub printed_relation3: IdentityCheck,
    pub closure: Vec<IdentityCheck>,
    pub c_at_zero: String,
    pub i0_z1: String,
}

impl YyReport {
    pub fn passed(&self) -> bool {
        self.relations.iter().chain(&self.closure).all(IdentityCheck::holds)
            && self.relations.iter().chain(&self.closure).all(|c| c.checked_to >= self.trunc as i64 - 4)
    }
}

fn sub(a: &S, b: &S) -> S {
    a.sub(b).expect("integral exponent offsets")
}

fn add(a: &S, b: &S) -> S {
    a.add(b).expect("integral exponent offsets")
}

/// Coefficient of `T'` in the third relation, with the rational function `w`
/// standing for `C` (printed) or `u` (corrected).
fn relation3_rhs(st: &YyState, w: &S) -> Result<S> {
    let i0 = &st.periods[0];
    let qq = i0.theta().div(i0)?;
    let rr = i0.theta().theta().div(i0)?;
    let t1 = st.t.theta();
    let t2 = t1.theta();
    let a = add(&qq.scale(&qi(-2)), w);
    let mut b = rr.scale(&qi(-4));
    b = add(&b, &qq.mul(&qq).scale(&qi(2)));
    b = sub(&b, &w.theta());
    b = add(&b, &qq.mul(w).scale(&qi(2)));
    b = add(&b, &w.mul(w));
    b = add(&b, &w.scale(&q(7, 5)));
    Ok(add(&t2.mul(&a), &t1.mul(&b)))
}

/// Relation residuals with `' = theta`.
pub fn relations(st: &YyState) -> Result<(Vec<IdentityCheck>, IdentityCheck)> {
    let i0 = &st.periods[0];
    let t1 = st.t.theta();
    let t2 = t1.theta();
    let t3 = t2.theta();

    // I30' = -2 I20 T' + (T I20)'
    let r1 = sub(&st.i30.theta(), &add(&st.i20.mul(&t1).scale(&qi(-2)), &st.t.mul(&st.i20).theta()));

    // I20'' = I20' T''/T' + C / (I0^2 T')
    let i20_1 = st.i20.theta();
    let rhs2 = add(&i20_1.mul(&t2).div(&t1)?, &st.c.div(&i0.mul(i0).mul(&t1))?);
    let r2 = sub(&i20_1.theta(), &rhs2);

    let r3 = sub(&t3, &relation3_rhs(st, &st.u())?);
    let printed = sub(&t3, &relation3_rhs(st, &st.c)?);
    Ok((
        vec![
            IdentityCheck::from_residual("relation 1", &r1),
            IdentityCheck::from_residual("relation 2", &r2),
            IdentityCheck::from_residual("relation 3", &r3),
        ],
        IdentityCheck::from_residual("relation 3 with C", &printed),
    ))
}

fn stirling2(k: usize, j: usize) -> Rational {
    let mut s = vec![vec![0i64; k + 1]; k + 1];
    s[0][0] = 1;
    for n in 1..=k {
        for m in 1..=n {
            s[n][m] = m as i64 * s[n - 1][m] + s[n - 1][m - 1];
        }
    }
    qi(s[k][j])
}

/// `p_j(z)` with `L = sum_j p_j(z) (d/dz)^j`, using `theta^k = sum S(k,j) z^j d^j`.
fn dz_coefficients(op: &ThetaOperator, trunc: usize) -> Vec<S> {
    let l: Poly<Rational> = op.l_poly();
    let u: Poly<Rational> = op.u_poly();
    let ord = op.order();
    (0..=ord)
        .map(|j| {
            let mut c = vec![Rational::zero(); trunc];
            for k in j..=ord {
                let s = stirling2(k, j);
                if j < trunc {
                    c[j] += l.coeff(k) * &s;
                }
                if j + 1 < trunc {
                    c[j + 1] -= op.scale.clone() * u.coeff(k) * &s;
                }
            }
            S::from_coeffs(Rational::zero(), c)
        })
        .collect()
}

/// Extra terms carried by [`closure`] to absorb the division by `z^4`.
const CLOSURE_PAD: usize = 12;

/// Restricts a residual to powers of `z` below `order`.
fn cut(r: &S, order: usize) -> S {
    let keep = qi(order as i64) - &r.exponent;
    let keep: i64 = keep.to_integer().try_into().unwrap_or(0);
    r.truncate(keep.max(0) as usize)
}

/// Closure of the ring under `d/dz`: each generator's derivative is
/// recomputed from its rewriting in the generators over rational functions,
/// up to `z^order`.
pub fn closure(order: usize) -> Result<Vec<IdentityCheck>> {
    let st = YyState::new(order + CLOSURE_PAD)?;
    let st = &st;
    let d = |s: &S| s.derivative();
    let i0 = &st.periods[0];
    let g1 = d(i0).div(i0)?;
    let g2 = d(&d(i0)).div(i0)?;
    let g3 = d(&d(&d(i0))).div(i0)?;
    let tp = d(&st.t);
    let big_g = d(&tp).div(&tp)?;
    let z = S::monomial(Rational::one(), st.trunc);

    let check = |name: &str, r: &S| IdentityCheck::from_residual(name, &cut(r, order));
    let mut out = Vec::new();
    out.push(check("d g1 = g2 - g1^2", &sub(&d(&g1), &sub(&g2, &g1.mul(&g1)))));
    out.push(check("d g2 = g3 - g1 g2", &sub(&d(&g2), &sub(&g3, &g1.mul(&g2)))));

    // d g3 = -(p0 + p1 g1 + p2 g2 + p3 g3) / p4 - g1 g3
    let p = dz_coefficients(&quintic_operator(), st.trunc);
    let mut num = p[0].clone();
    for (pj, g) in p[1..4].iter().zip([&g1, &g2, &g3]) {
        num = add(&num, &pj.mul(g));
    }
    let rw3 = sub(&num.div(&p[4])?.scale(&-Rational::one()), &g1.mul(&g3));
    out.push(check("d g3 from the Picard-Fuchs equation", &sub(&d(&g3), &rw3)));

    // z^2 (dG + G^2) = (zG + 1)(u - 2q) - 4r + 2q^2 + 2qu + 2u/5 - 3zG - 1
    // with q = z g1 and r = z^2 g2 + z g1
    let u = st.u();
    let one = S::constant(Rational::one(), st.trunc);
    let qq = z.mul(&g1);
    let rr = add(&z.mul(&z).mul(&g2), &qq);
    let zg = z.mul(&big_g);
    let mut rhs = add(&zg, &one).mul(&sub(&u, &qq.scale(&qi(2))));
    rhs = sub(&rhs, &rr.scale(&qi(4)));
    rhs = add(&rhs, &qq.mul(&qq).scale(&qi(2)));
    rhs = add(&rhs, &qq.mul(&u).scale(&qi(2)));
    rhs = add(&rhs, &u.scale(&q(2, 5)));
    rhs = sub(&rhs, &zg.scale(&qi(3)));
    rhs = sub(&rhs, &one);
    let lhs = z.mul(&z).mul(&add(&d(&big_g), &big_g.mul(&big_g)));
    out.push(check("d G from the third relation", &sub(&lhs, &rhs)));
    Ok(out)
}

/// All three relations and ring closure, exact in rational arithmetic.
pub fn yy_check(trunc: usize) -> Result<YyReport> {
    let st = YyState::new(trunc)?;
    let (relations, printed_relation3) = relations(&st)?;
    let closure = closure(trunc)?;
    Ok(YyReport {
        trunc,
        relations,
        printed_relation3,
        closure,
        c_at_zero: st.c.coeff(0, 0).to_string(),
        i0_z1: st.periods[0].coeff(0, 1).to_string(),
    })
}
