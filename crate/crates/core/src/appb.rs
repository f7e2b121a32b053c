//! The quartic Calabi-Yau sector as a symmetric square: Clausen structure,
//! the quadratic transformation to the level-2 elliptic family, connection
//! constants between the bases at infinity and at 1, and the integral K3
//! monodromy preserving the transcendental Gram matrix.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::data::{constants, int_matrix};
use crate::frobenius::{frobenius_basis, hyp2f1, indicial_roots, residual};
use crate::monodromy::{
    char_poly_distance, continue_basis, default_basepoint, monodromy_rep, numeric_basis, rational_matrix_to_complex,
    PathPlan,
};
use crate::numeric::{gamma_rational, q, qi, BigComplex, Matrix};
use crate::pfode::{symmetric_power, Point, ThetaOperator};
use crate::series::LogSeries;
use crate::{Complex, Error, Rational, RationalMatrix, Result};

/// Tolerance for the Clausen products at `b = 1`.
pub const CLAUSEN_TOL: f64 = 1e-50;
pub const QUADRATIC_TOL: f64 = 1e-40;
pub const CONNECTION_TOL: f64 = 1e-35;
pub const CHAR_POLY_TOL: f64 = 1e-30;

fn op(lower: &[(i64, i64)], upper: &[(i64, i64)]) -> ThetaOperator {
    ThetaOperator::b_form(lower.iter().map(|&(a, b)| q(a, b)).collect(), upper.iter().map(|&(a, b)| q(a, b)).collect())
        .expect("valid parameters")
}

/// `theta (theta - 1/4) - b (theta + 1/8)^2`.
pub fn d_triangular() -> ThetaOperator {
    op(&[(0, 1), (-1, 4)], &[(1, 8), (1, 8)])
}

/// `theta (theta - 1/4)(theta - 1/2) - b (theta + 1/4)^3`.
pub fn d_quartic() -> ThetaOperator {
    op(&[(0, 1), (-1, 4), (-1, 2)], &[(1, 4), (1, 4), (1, 4)])
}

/// `theta_t (theta_t - 1/2) - t (theta_t + 1/4)^2`.
pub fn d_elliptic() -> ThetaOperator {
    op(&[(0, 1), (-1, 2)], &[(1, 4), (1, 4)])
}

/// `b^(1/8) D_triangular b^(-1/8)`, unipotent at infinity.
pub fn d_triangular_twisted() -> ThetaOperator {
    d_triangular().twist(&q(1, 8))
}

/// `b^(1/4) D_quartic b^(-1/4)`.
pub fn d_quartic_twisted() -> ThetaOperator {
    d_quartic().twist(&q(1, 4))
}

#[derive(Clone, Debug, Serialize)]
pub struct ClausenReport {
    pub trunc: usize,
    /// `Sym^2 D_triangular = D_quartic` as parameter multisets.
    pub sym2_equal: bool,
    /// Same after the twists by `b^(1/8)` and `b^(1/4)`.
    pub sym2_twisted_equal: bool,
    /// Products of the Frobenius solutions at 0, exact residuals all zero.
    pub products_at_zero_exact: bool,
    /// Largest residual of the basis `(e1^2, e1 e2, -2 e2^2)` at `b = 1`.
    pub k3_basis_residual: f64,
    /// `Sym^2` of a first-order operator has order 1.
    pub first_order_control: bool,
}

impl ClausenReport {
    pub fn passed(&self) -> bool {
        self.sym2_equal
            && self.sym2_twisted_equal
            && self.products_at_zero_exact
            && self.k3_basis_residual < CLAUSEN_TOL
            && self.first_order_control
    }
}

pub fn clausen_check(trunc: usize) -> Result<ClausenReport> {
    if trunc < 10 {
        return Err(Error::TruncationError(format!("trunc = {trunc} < 10")));
    }
    let sym2_equal = symmetric_power(&d_triangular(), 2)? == d_quartic();
    let sym2_twisted_equal = symmetric_power(&d_triangular_twisted(), 2)? == d_quartic_twisted();

    let tri = frobenius_basis::<Rational>(&d_triangular(), Point::Zero, trunc)?;
    let lo = d_quartic().local_operator(Point::Zero)?;
    let mut products_at_zero_exact = true;
    for (i, a) in tri.solutions.iter().enumerate() {
        for b in &tri.solutions[i..] {
            products_at_zero_exact &= residual(&lo, &a.mul(b)) == 0.0;
        }
    }

    let k3_basis_residual = k3_basis_residual(trunc)?;
    let first = op(&[(0, 1)], &[(1, 3)]);
    let first_order_control = symmetric_power(&first, 2)?.order() == 1;
    Ok(ClausenReport {
        trunc,
        sym2_equal,
        sym2_twisted_equal,
        products_at_zero_exact,
        k3_basis_residual,
        first_order_control,
    })
}

/// `(c1, c2)` from the Gamma formulas.
pub fn connection_constants() -> Result<(Complex, Complex)> {
    let c1 = gamma_rational(&q(1, 2))? / (gamma_rational(&q(5, 8))? * gamma_rational(&q(7, 8))?);
    let c2 = gamma_rational(&q(-1, 2))? / (gamma_rational(&q(1, 8))? * gamma_rational(&q(3, 8))?);
    Ok((c1, c2))
}

/// `kappa_E = i / sqrt 2`.
pub fn kappa_e() -> Complex {
    BigComplex::i() / BigComplex::from_i64(2).sqrt()
}

/// `kappa = -Gamma(1/8) Gamma(3/8) / (2 pi i Gamma(1/2))`.
pub fn kappa() -> Result<Complex> {
    let two_pi_i = BigComplex::from_i64(2) * BigComplex::pi() * BigComplex::i();
    Ok(-(gamma_rational(&q(1, 8))? * gamma_rational(&q(3, 8))?) / (two_pi_i * gamma_rational(&q(1, 2))?))
}

/// Residual of the K3 basis built from `v2`, `v6` at `b = 1`, one exponent
/// class at a time.
fn k3_basis_residual(trunc: usize) -> Result<f64> {
    let basis = frobenius_basis::<Rational>(&d_triangular_twisted(), Point::One, trunc)?;
    let find = |e: Rational| {
        basis
            .labels
            .iter()
            .position(|l| l.exponent == e)
            .map(|i| basis.solutions[i].to_complex())
            .ok_or_else(|| Error::VerificationFailed(format!("no solution with exponent {e} at 1")))
    };
    let v2 = find(Rational::zero())?;
    let v6 = find(q(1, 2))?;
    let lo = d_quartic_twisted().local_operator(Point::One)?;
    let (c1, c2) = connection_constants()?;
    let ke = kappa_e();
    let two = BigComplex::from_i64(2);

    let v22 = v2.mul(&v2);
    let v66 = v6.mul(&v6);
    let v26 = v2.mul(&v6);
    // weights on (v2^2, v6^2, v2 v6)
    let c11 = c1.clone() * c1.clone();
    let c22 = c2.clone() * c2.clone();
    let c12 = c1.clone() * c2.clone();
    let weights = [
        [c11.clone(), c22.clone(), two.clone() * c12.clone()],
        [ke.clone() * c11.clone(), -(ke.clone() * c22.clone()), BigComplex::zero()],
        [
            -(two.clone() * ke.clone() * ke.clone() * c11),
            -(two.clone() * ke.clone() * ke.clone() * c22),
            two.clone() * two * ke.clone() * ke * c12,
        ],
    ];
    let mut worst = 0.0f64;
    for w in &weights {
        let integral = v22.scale(&w[0]).add(&v66.scale(&w[1]))?;
        let half = v26.scale(&w[2]);
        worst = worst.max(residual(&lo, &integral)).max(residual(&lo, &half));
    }
    Ok(worst)
}

#[derive(Clone, Debug, Serialize)]
pub struct QuadraticSample {
    pub t: String,
    pub alpha: String,
    pub beta: String,
    pub rel_err: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuadraticReport {
    pub samples: Vec<QuadraticSample>,
    /// The paired solutions solve their operators, checked exactly on series.
    pub solutions_exact: bool,
}

impl QuadraticReport {
    pub fn worst(&self) -> f64 {
        self.samples.iter().map(|s| s.rel_err).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.solutions_exact && self.worst() < QUADRATIC_TOL
    }
}

/// `b = t^2 / (4t - 4)`.
pub fn b_of_t(t: &Complex) -> Complex {
    t.clone() * t.clone() / (BigComplex::from_i64(4) * t.clone() - BigComplex::from_i64(4))
}

pub fn default_quadratic_samples() -> Vec<Complex> {
    vec![
        BigComplex::zero(),
        BigComplex::from_rational(&q(1, 4)),
        BigComplex::from_rational(&q(-1, 4)),
        BigComplex::from_rationals(&q(1, 5), &q(1, 10)),
        BigComplex::from_rational(&q(-1, 3)),
    ]
}

fn rel(a: &Complex, b: &Complex) -> f64 {
    let d = (a.clone() - b.clone()).abs_f64();
    let s = a.abs_f64().max(b.abs_f64());
    if s == 0.0 {
        d
    } else {
        d / s
    }
}

/// `2F1(a, b; 2b; t) = (1-t)^(-a/2) 2F1(a/2, b - a/2; b + 1/2; b(t))` for
/// `(a, b) = (1/4, 1/4)` and `(3/4, 3/4)`, the two pairs matching the
/// triangular and elliptic solutions.
pub fn quadratic_transform_check(samples: &[Complex]) -> Result<QuadraticReport> {
    let pairs = [(q(1, 4), q(1, 4)), (q(3, 4), q(3, 4))];
    let mut out = Vec::new();
    for t in samples {
        let b = b_of_t(t);
        for (alpha, beta) in &pairs {
            let lhs = hyp2f1(alpha, beta, &(beta * qi(2)), t)?;
            let half = alpha / qi(2);
            let pre = (BigComplex::one() - t.clone()).pow_rational(&-half.clone());
            let rhs = pre * hyp2f1(&half, &(beta - &half), &(beta + q(1, 2)), &b)?;
            out.push(QuadraticSample {
                t: t.to_decimal(20),
                alpha: alpha.to_string(),
                beta: beta.to_string(),
                rel_err: rel(&lhs, &rhs),
            });
        }
    }
    // F(1/8,1/8;3/4;b) and b^(1/4) F(3/8,3/8;5/4;b) solve D_triangular;
    // F(1/4,1/4;1/2;t) and t^(1/2) F(3/4,3/4;3/2;t) solve D_elliptic
    let series = |a: Rational, c: Rational, e: Rational| {
        let mut v = vec![Rational::one()];
        for k in 0..30 {
            let kk = qi(k);
            let next = v[k as usize].clone() * (&a + &kk) * (&a + &kk) / ((&c + &kk) * (qi(1) + &kk));
            v.push(next);
        }
        LogSeries::from_coeffs(e, v)
    };
    let zero = |d: &ThetaOperator, s: LogSeries<Rational>| d.apply(&s).truncate(s.trunc - 1).is_zero();
    let solutions_exact = zero(&d_triangular(), series(q(1, 8), q(3, 4), qi(0)))
        && zero(&d_triangular(), series(q(3, 8), q(5, 4), q(1, 4)))
        && zero(&d_elliptic(), series(q(1, 4), q(1, 2), qi(0)))
        && zero(&d_elliptic(), series(q(3, 4), q(3, 2), q(1, 2)));
    Ok(QuadraticReport { samples: out, solutions_exact })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConnectionReport {
    pub c1: String,
    pub c2: String,
    pub c2_negative_real: bool,
    /// `|v1 - c1 v2 - c2 v6|` at sample points, relative.
    pub identity_residual: f64,
    /// Distance between `(c1, c2)` and the continuation coefficients of `v1`.
    pub continuation_residual: f64,
    /// `|kappa - 2 c1 kappa_E|`, relative.
    pub kappa_residual: f64,
}

impl ConnectionReport {
    pub fn passed(&self) -> bool {
        self.c2_negative_real
            && self.identity_residual < CONNECTION_TOL
            && self.continuation_residual < CONNECTION_TOL
            && self.kappa_residual < CONNECTION_TOL
    }
}

/// `v1 = F(1/8,3/8;1;1/b)`, `v2 = F(1/8,3/8;1/2;1-1/b)`,
/// `v6 = (1-1/b)^(1/2) F(7/8,5/8;3/2;1-1/b)`.
fn v_functions(b: &Complex) -> Result<[Complex; 3]> {
    let w = BigComplex::one() / b.clone();
    let x = BigComplex::one() - w.clone();
    let v1 = hyp2f1(&q(1, 8), &q(3, 8), &qi(1), &w)?;
    let v2 = hyp2f1(&q(1, 8), &q(3, 8), &q(1, 2), &x)?;
    let v6 = x.sqrt() * hyp2f1(&q(7, 8), &q(5, 8), &q(3, 2), &x)?;
    Ok([v1, v2, v6])
}

pub fn connection_check() -> Result<ConnectionReport> {
    let (c1, c2) = connection_constants()?;
    let c2_negative_real = c2.im().is_zero() && c2.re().is_sign_negative();

    let mut identity_residual = 0.0f64;
    for b in [q(3, 2), qi(2), qi(3)] {
        let [v1, v2, v6] = v_functions(&BigComplex::from_rational(&b))?;
        let rhs = c1.clone() * v2 + c2.clone() * v6;
        identity_residual = identity_residual.max(rel(&v1, &rhs));
    }

    // the holomorphic solution at infinity carried from b = 4 to b = 3/2
    let d = d_triangular_twisted();
    let start = BigComplex::from_i64(4);
    let end = BigComplex::from_rational(&q(3, 2));
    let at_inf = numeric_basis(&d, Point::Infinity, 0.25)?;
    let at_one = numeric_basis(&d, Point::One, 0.5)?;
    let path = PathPlan::polyline(&[start, end], crate::monodromy::DEFAULT_STEP_SAFETY)?;
    let c = continue_basis(&d, &at_inf, &path, Some(&at_one))?;
    let col = at_inf
        .labels
        .iter()
        .position(|l| l.exponent.is_zero() && l.log_index == 0)
        .ok_or_else(|| Error::VerificationFailed("no holomorphic solution at infinity".into()))?;
    let row_of = |e: Rational| {
        at_one
            .labels
            .iter()
            .position(|l| l.exponent == e)
            .ok_or_else(|| Error::VerificationFailed(format!("no exponent {e} at 1")))
    };
    let r0 = row_of(Rational::zero())?;
    let rh = row_of(q(1, 2))?;
    // v6 = ((b-1)/b)^(1/2) (...) has leading coefficient 1 in b - 1, as does v2
    let continuation_residual = rel(&c[(r0, col)], &c1).max(rel(&c[(rh, col)], &c2));

    let two = BigComplex::from_i64(2);
    let kappa_residual = rel(&kappa()?, &(two * c1.clone() * kappa_e()));
    Ok(ConnectionReport {
        c1: c1.to_decimal(50),
        c2: c2.to_decimal(50),
        c2_negative_real,
        identity_residual,
        continuation_residual,
        kappa_residual,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GramReport {
    /// `T G T^t = G` for `T0`, `T1`, `Tinf`.
    pub preserved: [bool; 3],
    /// `T0^4 = I` with no smaller power scalar.
    pub t0_order_4: bool,
    pub t1_involution: bool,
    /// `(Tinf - I)^3 = 0` and `(Tinf - I)^2 != 0`.
    pub tinf_unipotent: bool,
    /// `T0 T1 Tinf = I`.
    pub product_relation: bool,
    /// Largest characteristic-polynomial distance to the numeric monodromy
    /// of the twisted quartic operator.
    pub char_poly_distance: f64,
    /// Indicial roots of the twisted elliptic operator at 0.
    pub elliptic_roots: Vec<String>,
}

impl GramReport {
    pub fn passed(&self) -> bool {
        self.preserved.iter().all(|&b| b)
            && self.t0_order_4
            && self.t1_involution
            && self.tinf_unipotent
            && self.product_relation
            && self.char_poly_distance < CHAR_POLY_TOL
            && self.elliptic_roots == ["1/4", "3/4"]
    }
}

/// `(G, T0, T1, Tinf)` from the data file.
pub fn k3_matrices() -> Result<[RationalMatrix; 4]> {
    let k = &constants().k3;
    Ok([int_matrix(&k.gram)?, int_matrix(&k.t0)?, int_matrix(&k.t1)?, int_matrix(&k.tinf)?])
}

fn is_scalar(m: &RationalMatrix) -> bool {
    let c = m[(0, 0)].clone();
    !c.is_zero() && *m == Matrix::identity(m.rows()).scale(&c)
}

pub fn gram_preservation() -> Result<GramReport> {
    let [g, t0, t1, tinf] = k3_matrices()?;
    let id = RationalMatrix::identity(3);
    let keeps = |t: &RationalMatrix| -> Result<bool> { Ok(t.mul(&g)?.mul(&t.transpose())? == g) };
    let preserved = [keeps(&t0)?, keeps(&t1)?, keeps(&tinf)?];
    let t0_order_4 = t0.pow(4)? == id && (1..4).all(|k| t0.pow(k).is_ok_and(|p| !is_scalar(&p)));
    let t1_involution = t1.pow(2)? == id && t1 != id;
    let n = tinf.sub(&id)?;
    let tinf_unipotent = n.pow(3)?.to_rows().iter().flatten().all(Zero::is_zero) && n.pow(2)? != RationalMatrix::zeros(3, 3);
    let product_relation = t0.mul(&t1)?.mul(&tinf)? == id;

    let rep = monodromy_rep(&d_quartic_twisted(), &default_basepoint())?;
    let mut char_poly = 0.0f64;
    for (num, t) in [(&rep.m0, &t0), (&rep.m1, &t1), (&rep.minf, &tinf)] {
        char_poly = char_poly.max(char_poly_distance(num, &rational_matrix_to_complex(t))?);
    }

    let elliptic_roots =
        indicial_roots(&d_elliptic().twist(&q(1, 4)), Point::Zero)?.iter().map(|r| r.to_string()).collect();
    Ok(GramReport {
        preserved,
        t0_order_4,
        t1_involution,
        tinf_unipotent,
        product_relation,
        char_poly_distance: char_poly,
        elliptic_roots,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AppbReport {
    pub clausen: ClausenReport,
    pub quadratic: QuadraticReport,
    pub connection: ConnectionReport,
    pub gram: GramReport,
}

impl AppbReport {
    /// Verdicts of the four checks, in order.
    pub fn verdicts(&self) -> [(&'static str, bool); 4] {
        [
            ("clausen", self.clausen.passed()),
            ("quadratic_transform", self.quadratic.passed()),
            ("connection_constants", self.connection.passed()),
            ("gram_preservation", self.gram.passed()),
        ]
    }

    pub fn passed(&self) -> bool {
        self.verdicts().iter().all(|v| v.1)
    }
}

pub fn appb_check(trunc: usize) -> Result<AppbReport> {
    Ok(AppbReport {
        clausen: clausen_check(trunc)?,
        quadratic: quadratic_transform_check(&default_quadratic_samples())?,
        connection: connection_check()?,
        gram: gram_preservation()?,
    })
}
