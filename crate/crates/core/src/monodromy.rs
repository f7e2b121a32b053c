//! Analytic continuation by Taylor re-expansion, monodromy matrices and
//! their projective orders.

use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::frobenius::{eval_jet, frobenius_basis, terms_for_ratio, FrobeniusBasis};
use crate::numeric::{precision, q, BigComplex, Matrix, Poly};
use crate::pfode::{Point, ThetaOperator};
use crate::{ComplexMatrix, Error, Rational, Result};

pub const DEFAULT_STEP_SAFETY: f64 = 0.5;
pub const DEFAULT_ORDER_CAP: u32 = 64;
/// Radius of the small circles around 0 and 1.
pub const LOOP_RADIUS: f64 = 0.125;
/// Radius of the circle around infinity.
pub const INFINITY_RADIUS: f64 = 8.0;
/// Height of the tether line in the upper half-plane.
const TETHER_HEIGHT: f64 = 0.5;
const MAX_TAYLOR_TERMS: usize = 50_000;

pub fn default_basepoint() -> BigComplex {
    BigComplex::from_rational(&q(2, 5))
}

/// Order in `N ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Order::Finite(k) => s.serialize_u32(*k),
            Order::Infinite => s.serialize_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub l0: Order,
    pub l1: Order,
    pub linf: Order,
}

impl Signature {
    pub fn triple(&self) -> [Order; 3] {
        [self.l0, self.l1, self.linf]
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.l0, self.l1, self.linf)
    }
}

/// Sequence of expansion centers; each step stays inside the safety disk.
#[derive(Clone, Debug)]
pub struct PathPlan {
    pub centers: Vec<BigComplex>,
    pub step_safety: f64,
}

#[derive(Clone, Copy, Debug)]
enum Piece {
    Line(Complex64, Complex64),
    /// Circle arc from angle `from` sweeping `sweep` radians.
    Arc { center: Complex64, radius: f64, from: f64, sweep: f64 },
}

impl Piece {
    fn at(&self, s: f64) -> Complex64 {
        match *self {
            Piece::Line(a, b) => a + (b - a) * s,
            Piece::Arc { center, radius, from, sweep } => center + Complex64::from_polar(radius, from + sweep * s),
        }
    }

    fn length(&self) -> f64 {
        match *self {
            Piece::Line(a, b) => (b - a).norm(),
            Piece::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }
}

fn singular_distance(z: Complex64) -> f64 {
    z.norm().min((z - 1.0).norm())
}

impl PathPlan {
    /// Greedy discretization of a piecewise path. The first and last centers
    /// are `start` and `end` exactly.
    fn from_pieces(start: &BigComplex, end: &BigComplex, pieces: &[Piece], safety: f64) -> Result<Self> {
        let mut samples: Vec<Complex64> = Vec::new();
        for p in pieces {
            let n = ((p.length() / 1e-3).ceil() as usize).clamp(16, 200_000);
            for i in 0..=n {
                samples.push(p.at(i as f64 / n as f64));
            }
        }
        let mut centers = vec![start.clone()];
        let mut cur = start.to_complex64();
        let mut i = 0;
        while i + 1 < samples.len() {
            let r = safety * singular_distance(cur);
            if r < 1e-6 {
                return Err(Error::StepTooClose(format!("center {cur} is too close to a singular point")));
            }
            let mut j = i + 1;
            while j < samples.len() && (samples[j] - cur).norm() <= r {
                j += 1;
            }
            if j == i + 1 {
                return Err(Error::StepTooClose(format!("sampling too coarse near {cur}")));
            }
            i = j - 1;
            cur = samples[i];
            if i + 1 < samples.len() {
                centers.push(BigComplex::new(cur.re, cur.im));
            }
        }
        centers.push(end.clone());
        let plan = PathPlan { centers, step_safety: safety };
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.step_safety && self.step_safety < 1.0) {
            return Err(Error::DomainError(format!("step_safety = {} outside (0, 1)", self.step_safety)));
        }
        for w in self.centers.windows(2) {
            let a = w[0].to_complex64();
            let d = singular_distance(a);
            let h = (w[1].to_complex64() - a).norm();
            if h > self.step_safety * d * (1.0 + 1e-9) {
                return Err(Error::StepTooClose(format!("step {h:.3e} from {a} exceeds the safety radius")));
            }
        }
        Ok(())
    }

    /// Positively oriented loop around `point`, tethered through the upper
    /// half-plane. The loop around infinity runs clockwise on `|b| = 8`.
    pub fn loop_around(point: Point, basepoint: &BigComplex, safety: f64) -> Result<Self> {
        let b0 = basepoint.to_complex64();
        if singular_distance(b0) < 2.0 * LOOP_RADIUS || b0.norm() >= INFINITY_RADIUS {
            return Err(Error::DomainError(format!("basepoint {b0} too close to a singular point")));
        }
        let up = Complex64::new(b0.re, TETHER_HEIGHT);
        let mut pieces = vec![Piece::Line(b0, up)];
        let tail = |pieces: &mut Vec<Piece>| {
            let back: Vec<Piece> = pieces
                .iter()
                .rev()
                .filter_map(|p| match *p {
                    Piece::Line(a, b) => Some(Piece::Line(b, a)),
                    Piece::Arc { .. } => None,
                })
                .collect();
            back
        };
        match point {
            Point::Zero | Point::One => {
                let c = if point == Point::Zero { 0.0 } else { 1.0 };
                let top = Complex64::new(c, TETHER_HEIGHT);
                let touch = Complex64::new(c, LOOP_RADIUS);
                pieces.push(Piece::Line(up, top));
                pieces.push(Piece::Line(top, touch));
                let back = tail(&mut pieces);
                pieces.push(Piece::Arc {
                    center: Complex64::new(c, 0.0),
                    radius: LOOP_RADIUS,
                    from: std::f64::consts::FRAC_PI_2,
                    sweep: 2.0 * std::f64::consts::PI,
                });
                pieces.extend(back);
            }
            Point::Infinity => {
                let h = (INFINITY_RADIUS * INFINITY_RADIUS - b0.re * b0.re).sqrt();
                let touch = Complex64::new(b0.re, h);
                pieces.push(Piece::Line(up, touch));
                let back = tail(&mut pieces);
                pieces.push(Piece::Arc {
                    center: Complex64::new(0.0, 0.0),
                    radius: INFINITY_RADIUS,
                    from: touch.arg(),
                    sweep: -2.0 * std::f64::consts::PI,
                });
                pieces.extend(back);
            }
        }
        Self::from_pieces(basepoint, basepoint, &pieces, safety)
    }

    /// A small loop at the basepoint enclosing no singular point.
    pub fn contractible_loop(basepoint: &BigComplex, safety: f64) -> Result<Self> {
        let b0 = basepoint.to_complex64();
        let r = 0.4 * singular_distance(b0);
        let arc = Piece::Arc {
            center: b0 + Complex64::new(0.0, r),
            radius: r,
            from: -std::f64::consts::FRAC_PI_2,
            sweep: 2.0 * std::f64::consts::PI,
        };
        Self::from_pieces(basepoint, basepoint, &[arc], safety)
    }

    /// Polyline through the given waypoints.
    pub fn polyline(points: &[BigComplex], safety: f64) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::DomainError("a path needs two points".into()));
        }
        let pieces: Vec<Piece> =
            points.windows(2).map(|w| Piece::Line(w[0].to_complex64(), w[1].to_complex64())).collect();
        Self::from_pieces(&points[0], &points[points.len() - 1], &pieces, safety)
    }
}

/// The operator as `sum_j q_j(b) (d/db)^j` with complex coefficients.
struct DForm {
    q: Vec<Poly<BigComplex>>,
}

impl DForm {
    fn new(op: &ThetaOperator) -> Self {
        DForm { q: op.d_form().iter().map(|p| p.map(BigComplex::from_rational)).collect() }
    }

    fn order(&self) -> usize {
        self.q.len() - 1
    }

    /// Transfer of the jet `(y, y', ..., y^(k-1))` from `c` to `c + h`.
    fn step(&self, c: &BigComplex, h: &BigComplex, tol: f64) -> Result<ComplexMatrix> {
        let k = self.order();
        // qhat[j][r] = q_{j,r} h^(r+k-j)
        let mut qhat: Vec<Vec<(usize, BigComplex)>> = Vec::with_capacity(k + 1);
        for (j, qj) in self.q.iter().enumerate() {
            let shifted = qj.taylor_shift(c);
            let mut row = Vec::new();
            for (r, coef) in shifted.coeffs().iter().enumerate() {
                if !coef.is_zero() {
                    row.push((r, coef.clone() * h.powi((r + k - j) as i32)));
                }
            }
            qhat.push(row);
        }
        let lead = qhat[k]
            .iter()
            .find(|(r, _)| *r == 0)
            .map(|(_, v)| v.clone())
            .ok_or_else(|| Error::StepTooClose(format!("expansion center {c} is singular")))?;
        let window = qhat.iter().flat_map(|row| row.iter().map(|(r, _)| *r)).max().unwrap_or(0) + k;
        let ff = |m: usize, j: usize| -> i64 {
            if m < j {
                return 0;
            }
            (0..j).fold(1i64, |acc, t| acc * (m - t) as i64)
        };

        let mut t = ComplexMatrix::zeros(k, k);
        let hinv = BigComplex::one() / h.clone();
        for l in 0..k {
            let mut a: Vec<BigComplex> = vec![BigComplex::zero(); k];
            let fact: i64 = (1..=l as i64).product();
            a[l] = h.powi(l as i32) / BigComplex::from_i64(fact);
            let mut scale = a[l].abs_f64().max(1e-300);
            let mut n = 0usize;
            loop {
                let mut acc = BigComplex::zero();
                for (j, row) in qhat.iter().enumerate() {
                    for (r, qv) in row {
                        if j == k && *r == 0 {
                            continue;
                        }
                        if n + j < *r {
                            continue;
                        }
                        let idx = n + j - r;
                        if a[idx].is_zero() {
                            continue;
                        }
                        acc = acc + qv.clone() * a[idx].clone() * BigComplex::from_i64(ff(idx, j));
                    }
                }
                let next = -(acc / (lead.clone() * BigComplex::from_i64(ff(n + k, k))));
                scale = scale.max(next.abs_f64());
                a.push(next);
                n += 1;
                let len = a.len();
                if len > window + 8 {
                    let p = (len as f64).powi(k as i32);
                    let small = a[len - window..].iter().all(|x| x.abs_f64() * p <= tol * scale);
                    if small {
                        break;
                    }
                }
                if len > MAX_TAYLOR_TERMS {
                    return Err(Error::PrecisionExhausted(format!("Taylor step at {c} did not converge")));
                }
            }
            for i in 0..k {
                let mut s = BigComplex::zero();
                for (m, am) in a.iter().enumerate().skip(i) {
                    if !am.is_zero() {
                        s = s + am.clone() * BigComplex::from_i64(ff(m, i));
                    }
                }
                t[(i, l)] = s * hinv.powi(i as i32);
            }
        }
        Ok(t)
    }
}

/// Jet transfer matrix along a path: `state(end) = T state(start)`.
pub fn transfer(op: &ThetaOperator, path: &PathPlan) -> Result<ComplexMatrix> {
    if !op.is_canonical() {
        return Err(Error::NotCanonicalForm("continuation needs the canonical b-form".into()));
    }
    path.validate()?;
    let d = DForm::new(op);
    let tol = 2f64.powi(-(precision() as i32 - 32).max(20));
    let mut total = ComplexMatrix::identity(d.order());
    for w in path.centers.windows(2) {
        let h = w[1].clone() - w[0].clone();
        let s = d.step(&w[0], &h, tol)?;
        total = s.mul(&total)?;
    }
    Ok(total)
}

/// Frobenius basis evaluated with enough terms for a point at local ratio `ratio`.
pub fn numeric_basis(op: &ThetaOperator, point: Point, ratio: f64) -> Result<FrobeniusBasis<BigComplex>> {
    let trunc = terms_for_ratio(ratio, precision(), op.order()).max(2 * op.order());
    frobenius_basis(op, point, trunc)
}

fn local_ratio(point: Point, b: &BigComplex) -> f64 {
    let z = b.to_complex64();
    match point {
        Point::Zero => z.norm(),
        Point::One => (z - 1.0).norm(),
        Point::Infinity => 1.0 / z.norm(),
    }
}

/// Continues `basis` along `path`.
///
/// For a loop returns the matrix `M` with `continued = basis * M`; with a
/// target basis returns `C` with `continued = target * C`.
pub fn continue_basis(
    op: &ThetaOperator,
    basis: &FrobeniusBasis<BigComplex>,
    path: &PathPlan,
    target: Option<&FrobeniusBasis<BigComplex>>,
) -> Result<ComplexMatrix> {
    let start = &path.centers[0];
    let end = &path.centers[path.centers.len() - 1];
    if local_ratio(basis.point, start) >= basis.radius {
        return Err(Error::DomainError("path starts outside the basis disk".into()));
    }
    let k = op.order();
    let w0 = eval_jet(basis, start, k)?;
    let t = transfer(op, path)?;
    let w1 = match target {
        Some(tb) => eval_jet(tb, end, k)?,
        None => eval_jet(basis, end, k)?,
    };
    w1.inverse()?.mul(&t)?.mul(&w0)
}

#[derive(Clone, Debug)]
pub struct MonodromyRep {
    pub basepoint: BigComplex,
    pub m0: ComplexMatrix,
    pub m1: ComplexMatrix,
    pub minf: ComplexMatrix,
    pub orders: [Order; 3],
    /// `|| Minf M1 M0 - I ||_inf`.
    pub relation_residual: f64,
}

impl MonodromyRep {
    pub fn signature(&self) -> Signature {
        Signature { l0: self.orders[0], l1: self.orders[1], linf: self.orders[2] }
    }

    pub fn matrices(&self) -> [&ComplexMatrix; 3] {
        [&self.m0, &self.m1, &self.minf]
    }

    /// Monodromy of `b^c0 (1-b)^c1 * f` from that of `f`.
    pub fn twisted(&self, c0: &Rational, c1: &Rational) -> Result<Self> {
        let e0 = BigComplex::exp_2pi_i(c0);
        let e1 = BigComplex::exp_2pi_i(c1);
        let einf = BigComplex::exp_2pi_i(&-(c0 + c1));
        let m0 = self.m0.scale(&e0);
        let m1 = self.m1.scale(&e1);
        let minf = self.minf.scale(&einf);
        let relation_residual = relation_residual(&m0, &m1, &minf)?;
        Ok(MonodromyRep { basepoint: self.basepoint.clone(), m0, m1, minf, orders: self.orders, relation_residual })
    }
}

pub fn relation_residual(m0: &ComplexMatrix, m1: &ComplexMatrix, minf: &ComplexMatrix) -> Result<f64> {
    let p = minf.mul(m1)?.mul(m0)?;
    p.dist(&ComplexMatrix::identity(p.rows()))
}

/// Monodromy around 0, 1, infinity at `basepoint`.
///
/// At a basepoint in `(0, 1)` the matrices are expressed in the Frobenius
/// basis at 0; elsewhere in the basis of unit initial conditions.
pub fn monodromy_rep(op: &ThetaOperator, basepoint: &BigComplex) -> Result<MonodromyRep> {
    monodromy_rep_with(op, basepoint, DEFAULT_STEP_SAFETY, DEFAULT_ORDER_CAP)
}

pub fn monodromy_rep_with(op: &ThetaOperator, basepoint: &BigComplex, safety: f64, cap: u32) -> Result<MonodromyRep> {
    let k = op.order();
    if k == 0 {
        return Err(Error::OrderError("order-0 operator has no monodromy".into()));
    }
    let z = basepoint.to_complex64();
    let in_disk = z.im == 0.0 && z.re > 0.0 && z.re < 1.0;
    let w = if in_disk {
        let basis = numeric_basis(op, Point::Zero, z.norm())?;
        eval_jet(&basis, basepoint, k)?
    } else {
        ComplexMatrix::identity(k)
    };
    let winv = w.inverse()?;
    let mut mats = Vec::with_capacity(3);
    for point in [Point::Zero, Point::One, Point::Infinity] {
        let path = PathPlan::loop_around(point, basepoint, safety)?;
        let t = transfer(op, &path)?;
        mats.push(winv.mul(&t)?.mul(&w)?);
    }
    let minf = mats.pop().expect("three loops");
    let m1 = mats.pop().expect("three loops");
    let m0 = mats.pop().expect("three loops");
    let relation_residual = relation_residual(&m0, &m1, &minf)?;
    let orders = [projective_order(&m0, cap), projective_order(&m1, cap), projective_order(&minf, cap)];
    Ok(MonodromyRep { basepoint: basepoint.clone(), m0, m1, minf, orders, relation_residual })
}

/// Least `l <= cap` with `M^l` scalar; a 1x1 matrix reports the order of its entry.
pub fn projective_order(m: &ComplexMatrix, cap: u32) -> Order {
    let tol = 2f64.powi(64 - precision() as i32).max(1e-300);
    let n = m.rows();
    let mut p = ComplexMatrix::identity(n);
    for l in 1..=cap {
        p = match p.mul(m) {
            Ok(x) => x,
            Err(_) => return Order::Infinite,
        };
        let norm = p.max_abs().max(1.0);
        let zeta = p[(0, 0)].clone();
        let target = if n == 1 { BigComplex::one() } else { zeta };
        let scalar = ComplexMatrix::identity(n).scale(&target);
        if p.dist(&scalar).is_ok_and(|d| d <= tol * norm) && !scalar[(0, 0)].is_zero() {
            return Order::Finite(l);
        }
    }
    Order::Infinite
}

/// Projective orders of the local monodromies of `op`.
pub fn signature(op: &ThetaOperator) -> Result<Signature> {
    let rep = monodromy_rep(op, &default_basepoint())?;
    Ok(rep.signature())
}

/// Signature of a reduced sector operator, with the check `l0 | n+1`.
pub fn sector_signature(op: &ThetaOperator, n: usize) -> Result<Signature> {
    let s = signature(op)?;
    if let Order::Finite(l0) = s.l0 {
        if (n as u32 + 1) % l0 != 0 {
            return Err(Error::VerificationFailed(format!("l0 = {l0} does not divide {}", n + 1)));
        }
    }
    Ok(s)
}

fn companion(roots: &[BigComplex]) -> ComplexMatrix {
    let p = Poly::from_roots(roots);
    let k = roots.len();
    ComplexMatrix::from_fn(k, k, |i, j| {
        if j == k - 1 {
            -p.coeff(i)
        } else if i == j + 1 {
            BigComplex::one()
        } else {
            BigComplex::zero()
        }
    })
}

/// Companion matrices with eigenvalues `exp(2 pi i alpha)` and `exp(2 pi i beta)`.
pub fn levelt_generators(upper: &[Rational], lower: &[Rational]) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if upper.len() != lower.len() || upper.is_empty() {
        return Err(Error::DimensionError("parameter lists of unequal length".into()));
    }
    for a in upper {
        for b in lower {
            if (a - b).is_integer() {
                return Err(Error::ReducibleParameters(format!("{a} and {b} differ by an integer")));
            }
        }
    }
    let ea: Vec<BigComplex> = upper.iter().map(BigComplex::exp_2pi_i).collect();
    let eb: Vec<BigComplex> = lower.iter().map(BigComplex::exp_2pi_i).collect();
    Ok((companion(&ea), companion(&eb)))
}

/// Largest coefficient distance between two characteristic polynomials.
pub fn char_poly_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    let pa = a.char_poly()?;
    let pb = b.char_poly()?;
    if pa.len() != pb.len() {
        return Err(Error::DimensionError("matrices of different size".into()));
    }
    Ok(pa.iter().zip(&pb).map(|(x, y)| (x.clone() - y.clone()).abs_f64()).fold(0.0, f64::max))
}

/// Spectrum of `M` as multiset distance to the expected eigenvalues: the
/// characteristic polynomial is compared with `prod (t - lambda)`.
pub fn eigenvalue_distance(m: &ComplexMatrix, expected: &[BigComplex]) -> Result<f64> {
    let cp = m.char_poly()?;
    let target = Poly::from_roots(expected);
    Ok(cp.iter().enumerate().map(|(i, c)| (c.clone() - target.coeff(i)).abs_f64()).fold(0.0, f64::max))
}

/// `exp(2 pi i rho)` over the local exponents at `point`.
pub fn expected_eigenvalues(op: &ThetaOperator, point: Point) -> Result<Vec<BigComplex>> {
    Ok(op.local_exponents(point)?.iter().map(BigComplex::exp_2pi_i).collect())
}

/// `(M - I)^n = 0` to `tol`.
pub fn is_unipotent(m: &ComplexMatrix, tol: f64) -> Result<bool> {
    let n = m.rows();
    let nm = m.sub(&ComplexMatrix::identity(n))?;
    Ok(nm.pow(n as u64)?.max_abs() <= tol)
}

/// `rank(M - lambda I)`.
pub fn rank_minus(m: &ComplexMatrix, lambda: &BigComplex, tol: f64) -> Result<usize> {
    let n = m.rows();
    Ok(m.sub(&ComplexMatrix::identity(n).scale(lambda))?.rank(tol))
}

pub fn rational_matrix_to_complex(m: &Matrix<Rational>) -> ComplexMatrix {
    m.map(BigComplex::from_rational)
}
