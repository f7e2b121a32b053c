//! Comparison of numeric monodromy with the reference tables in the data file.

use serde::Serialize;

use crate::data::{constants, order_triple, rationals, QuarticRow};
use crate::frobenius::frobenius_basis;
use crate::monodromy::{
    char_poly_distance, default_basepoint, is_unipotent, monodromy_rep, rank_minus, MonodromyRep, Order,
};
use crate::numeric::{pochhammer, q, qi, BigComplex};
use crate::pfode::{sector_operator, Point, ThetaOperator};
use crate::yy::quintic_operator;
use crate::{Error, Rational, Result};

/// Characteristic polynomials are compared to this distance.
pub const CHAR_POLY_TOL: f64 = 1e-30;

#[derive(Clone, Debug, Serialize)]
pub struct MonodromyRow {
    pub label: String,
    pub m: Vec<u32>,
    /// Reduced sector operator equals the tabulated parameters.
    pub operator_matches: bool,
    pub expected: [Order; 3],
    pub numeric: [Order; 3],
    pub relation_residual: f64,
    pub t0_distance: f64,
    pub tinf_distance: f64,
}

impl MonodromyRow {
    pub fn signature_matches(&self) -> bool {
        self.expected == self.numeric
    }

    pub fn passed(&self) -> bool {
        self.operator_matches
            && self.signature_matches()
            && self.t0_distance < CHAR_POLY_TOL
            && self.tinf_distance < CHAR_POLY_TOL
    }
}

fn compare_row(row: &QuarticRow) -> Result<MonodromyRow> {
    let op = sector_operator(3, &row.m)?;
    let operator_matches = op.lower == rationals(&row.lower)? && op.upper == rationals(&row.upper)?;
    let rep = monodromy_rep(&op, &default_basepoint())?;
    Ok(MonodromyRow {
        label: row.label.clone(),
        m: row.m.clone(),
        operator_matches,
        expected: order_triple(&row.orders),
        numeric: rep.orders,
        relation_residual: rep.relation_residual,
        t0_distance: char_poly_distance(&rep.m0, &row.t0.to_complex()?)?,
        tinf_distance: char_poly_distance(&rep.minf, &row.tinf.to_complex()?)?,
    })
}

/// The six quartic sector rows of the triangular-group table.
pub fn quartic_concordance() -> Result<Vec<MonodromyRow>> {
    constants().quartic_row.iter().filter(|r| !r.m.is_empty()).map(compare_row).collect()
}

/// Single sector row by exponent vector, if tabulated.
pub fn quartic_row_concordance(m: &[u32]) -> Result<Option<MonodromyRow>> {
    constants().quartic_row.iter().find(|r| r.m == m).map(compare_row).transpose()
}

#[derive(Clone, Debug, Serialize)]
pub struct CubicConcordance {
    pub operator_matches: bool,
    pub expected: [Order; 3],
    pub numeric: [Order; 3],
    /// Distances for `T0`, `T1`, `Tinf`.
    pub distances: [f64; 3],
    /// First-order sectors `(1,0,0)` and `(1,1,0)` are `(1-b)^(-1/3)`, `(1-b)^(-2/3)`.
    pub binomial_sectors: bool,
}

impl CubicConcordance {
    pub fn passed(&self) -> bool {
        self.operator_matches
            && self.expected == self.numeric
            && self.distances.iter().all(|d| *d < CHAR_POLY_TOL)
            && self.binomial_sectors
    }
}

pub fn cubic_concordance(trunc: usize) -> Result<CubicConcordance> {
    let cubic = &constants().cubic_monodromy;
    let op = sector_operator(2, &[0, 0, 0])?;
    let operator_matches = op.lower == rationals(&cubic.lower)? && op.upper == rationals(&cubic.upper)?;
    let rep = monodromy_rep(&op, &default_basepoint())?;
    let mut distances = [0.0; 3];
    for (d, (num, t)) in distances.iter_mut().zip(rep.matrices().into_iter().zip([&cubic.t0, &cubic.t1, &cubic.tinf])) {
        *d = char_poly_distance(num, &t.to_complex()?)?;
    }
    let mut binomial_sectors = true;
    for (m, e) in [([1u32, 0, 0], q(-1, 3)), ([1, 1, 0], q(-2, 3))] {
        let op = sector_operator(2, &m)?;
        let basis = frobenius_basis::<Rational>(&op, Point::Zero, trunc.max(2))?;
        let s = &basis.solutions[0];
        let minus_e = -e;
        binomial_sectors &= basis.solutions.len() == 1
            && (0..s.trunc).all(|k| s.coeff(0, k) == pochhammer(&minus_e, k) / pochhammer(&qi(1), k));
    }
    Ok(CubicConcordance {
        operator_matches,
        expected: order_triple(&cubic.orders),
        numeric: rep.orders,
        distances,
        binomial_sectors,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct QuinticMonodromy {
    pub numeric: [Order; 3],
    pub relation_residual: f64,
    pub m0_unipotent: bool,
    /// `rank(M0 - I)`; 3 means a single 4x4 Jordan block.
    pub rank_m0_minus_1: usize,
}

impl QuinticMonodromy {
    pub fn passed(&self) -> bool {
        self.numeric == [Order::Infinite, Order::Infinite, Order::Finite(5)]
            && self.relation_residual < 1e-40
            && self.m0_unipotent
            && self.rank_m0_minus_1 == 3
    }
}

/// The quintic operator in the rescaled coordinate `w = 5^5 z`.
pub fn quintic_rescaled() -> ThetaOperator {
    let z = quintic_operator();
    ThetaOperator { scale: Rational::from_integer(1.into()), variable: crate::pfode::Variable::B, ..z }
}

pub fn quintic_monodromy() -> Result<QuinticMonodromy> {
    let rep: MonodromyRep = monodromy_rep(&quintic_rescaled(), &default_basepoint())?;
    let one = BigComplex::from_i64(1);
    Ok(QuinticMonodromy {
        numeric: rep.orders,
        relation_residual: rep.relation_residual,
        m0_unipotent: is_unipotent(&rep.m0, 1e-40)?,
        rank_m0_minus_1: rank_minus(&rep.m0, &one, 1e-40)?,
    })
}

/// Signature of the reduced sector operator at two basepoints.
pub fn basepoint_independent(n: usize, m: &[u32]) -> Result<bool> {
    let op = sector_operator(n, m)?;
    if op.order() == 0 {
        return Err(Error::OrderError("order-0 sector".into()));
    }
    let a = monodromy_rep(&op, &default_basepoint())?;
    let b = monodromy_rep(&op, &BigComplex::from_rational(&q(-1, 2)))?;
    Ok(a.orders == b.orders)
}
