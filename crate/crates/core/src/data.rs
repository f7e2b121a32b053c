//! Embedded reference tables, loaded from `data/constants.toml`.

use std::sync::OnceLock;

use serde::Deserialize;

use crate::monodromy::Order;
use crate::numeric::{parse_rational, BigComplex, Matrix};
use crate::{ComplexMatrix, Error, Rational, Result};

const RAW: &str = include_str!("../data/constants.toml");

#[derive(Debug, Deserialize)]
pub struct Constants {
    pub version: u32,
    pub spectrum: Vec<SpectrumRow>,
    pub operator_row: Vec<OperatorRow>,
    pub quartic_row: Vec<QuarticRow>,
    pub cubic_monodromy: CubicMonodromy,
    pub k3: K3Data,
}

#[derive(Debug, Deserialize)]
pub struct SpectrumRow {
    pub n: usize,
    pub beta: Vec<String>,
    pub count: Vec<u64>,
}

#[derive(Debug, Deserialize)]
pub struct OperatorRow {
    pub n: usize,
    pub m: Vec<u32>,
    pub lower: Vec<String>,
    pub upper: Vec<String>,
    #[serde(default)]
    pub orders: Vec<u32>,
}

/// Matrix `xi_k^e * sqrt(2)^(-inv_sqrt2) * (a + b sqrt 2)`.
#[derive(Debug, Deserialize)]
pub struct Sqrt2Matrix {
    pub xi: [i64; 2],
    pub inv_sqrt2: u32,
    pub rows: Vec<Vec<[String; 2]>>,
}

#[derive(Debug, Deserialize)]
pub struct QuarticRow {
    pub label: String,
    #[serde(default)]
    pub m: Vec<u32>,
    pub lower: Vec<String>,
    pub upper: Vec<String>,
    pub orders: [u32; 3],
    pub t0: Sqrt2Matrix,
    pub tinf: Sqrt2Matrix,
}

#[derive(Debug, Deserialize)]
pub struct CubicMonodromy {
    pub lower: Vec<String>,
    pub upper: Vec<String>,
    pub orders: [u32; 3],
    pub t0: Sqrt2Matrix,
    pub t1: Sqrt2Matrix,
    pub tinf: Sqrt2Matrix,
}

#[derive(Debug, Deserialize)]
pub struct K3Data {
    pub gram: Vec<Vec<i64>>,
    pub t0: Vec<Vec<i64>>,
    pub t1: Vec<Vec<i64>>,
    pub tinf: Vec<Vec<i64>>,
    pub orders: [u32; 3],
}

pub fn constants() -> &'static Constants {
    static CELL: OnceLock<Constants> = OnceLock::new();
    CELL.get_or_init(|| toml::from_str(RAW).expect("embedded constants parse"))
}

pub fn rat(s: &str) -> Result<Rational> {
    parse_rational(s).ok_or_else(|| Error::DomainError(format!("bad rational {s:?} in constants")))
}

pub fn rationals(v: &[String]) -> Result<Vec<Rational>> {
    v.iter().map(|s| rat(s)).collect()
}

/// `0` encodes an infinite order.
pub fn order_triple(o: &[u32; 3]) -> [Order; 3] {
    o.map(|x| if x == 0 { Order::Infinite } else { Order::Finite(x) })
}

impl Sqrt2Matrix {
    pub fn to_complex(&self) -> Result<ComplexMatrix> {
        let r2 = BigComplex::from_i64(2).sqrt();
        let mut pre = BigComplex::root_of_unity(self.xi[0], self.xi[1]);
        for _ in 0..self.inv_sqrt2 {
            pre = pre / r2.clone();
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|[a, b]| {
                        let a = BigComplex::from_rational(&rat(a)?);
                        let b = BigComplex::from_rational(&rat(b)?);
                        Ok((a + b * r2.clone()) * pre.clone())
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(rows)
    }
}

pub fn int_matrix(rows: &[Vec<i64>]) -> Result<Matrix<Rational>> {
    if rows.is_empty() {
        return Err(Error::DimensionError("empty matrix".into()));
    }
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect())
}
