//! Twisted sectors of the Fermat polynomial `sum z_i^(n+1)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::numeric::{q, qi};
use crate::{Error, Rational, Result};

/// Weight data of the Fermat polynomial of degree `n+1` in `n+1` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FermatData {
    pub n: usize,
    pub weight: Rational,
    pub milnor_number: u64,
}

impl FermatData {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::DomainError(format!("n = {n} must be at least 2")));
        }
        Ok(FermatData { n, weight: q(1, n as i64 + 1), milnor_number: (n as u64).pow(n as u32 + 1) })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SectorClass {
    Relevant,
    Marginal,
    Irrelevant,
}

/// Grading of the sector of the monomial `z^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorIndex {
    pub n: usize,
    pub m: Vec<u32>,
    pub beta: Rational,
    /// `beta` shifted into `(-1, 0]`.
    pub alpha: Rational,
    pub hodge_p: i64,
    pub class: SectorClass,
}

impl SectorIndex {
    /// Exponent of the monodromy eigenvalue `exp(-2 pi i beta)`, reduced into `[0, 1)`.
    pub fn eigen_phase(&self) -> Rational {
        let b = -self.beta.clone();
        &b - b.floor()
    }
}

pub fn sector_grading(m: &[u32], n: usize) -> Result<SectorIndex> {
    if m.len() != n + 1 {
        return Err(Error::DimensionError(format!("m has length {}, expected {}", m.len(), n + 1)));
    }
    let total: i64 = m.iter().map(|&x| x as i64).sum();
    let beta = q(total, n as i64 + 1);
    // alpha = beta - ceil(beta), in (-1, 0]
    let alpha = &beta - beta.ceil();
    let p = qi(n as i64) + &alpha - &beta;
    debug_assert!(p.is_integer());
    let hodge_p: i64 = p.to_integer().try_into().unwrap_or(i64::MAX);
    let class = if beta < Rational::one() {
        SectorClass::Relevant
    } else if beta == Rational::one() {
        SectorClass::Marginal
    } else {
        SectorClass::Irrelevant
    };
    Ok(SectorIndex { n, m: m.to_vec(), beta, alpha, hodge_p, class })
}

/// Spectrum of the Fermat singularity: multiplicity of each `beta` over the
/// Jacobi-ring monomial basis `0 <= m_i <= n-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    pub n: usize,
    pub counts: BTreeMap<Rational, u64>,
}

impl Spectrum {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn get(&self, beta: &Rational) -> u64 {
        self.counts.get(beta).copied().unwrap_or(0)
    }
}

pub fn spectrum(n: usize) -> Result<Spectrum> {
    FermatData::new(n)?;
    // counts of sum(m_i) by convolution over the n+1 coordinates
    let mut dist: Vec<u64> = vec![1];
    for _ in 0..=n {
        let mut next = vec![0u64; dist.len() + n - 1];
        for (s, c) in dist.iter().enumerate() {
            for v in 0..n {
                next[s + v] += c;
            }
        }
        dist = next;
    }
    let counts = dist
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c > 0)
        .map(|(s, c)| (q(s as i64, n as i64 + 1), c))
        .collect();
    Ok(Spectrum { n, counts })
}

/// Orbit representatives (sorted descending) of `S_{n+1}` acting on the box
/// `{0..n-1}^{n+1}`, restricted to `beta <= beta_max`, in lexicographic order.
pub fn sector_orbits(n: usize, beta_max: &Rational) -> Result<Vec<SectorIndex>> {
    FermatData::new(n)?;
    let mut reps = Vec::new();
    let mut cur = vec![0u32; n + 1];
    descending(n, 0, n as u32 - 1, &mut cur, &mut reps);
    let bound = beta_max * Rational::from_integer(BigInt::from(n + 1));
    let mut out: Vec<SectorIndex> = reps
        .into_iter()
        .filter(|m| Rational::from_integer(BigInt::from(m.iter().sum::<u32>())) <= bound)
        .map(|m| sector_grading(&m, n))
        .collect::<Result<_>>()?;
    out.sort_by(|a, b| a.m.cmp(&b.m));
    Ok(out)
}

fn descending(n: usize, pos: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if pos == n + 1 {
        out.push(cur.clone());
        return;
    }
    for v in 0..=max {
        cur[pos] = v;
        descending(n, pos + 1, v, cur, out);
    }
}

/// All vectors of length `len` with entries in `0..=max`.
pub fn all_vectors(len: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=max).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// `delta in 0..=n` with `delta + m_i + 1` nonzero mod `n+1` for every `i`.
pub fn admissible_deltas(n: usize, m: &[u32]) -> Vec<usize> {
    let big_n = n as u32 + 1;
    (0..=n).filter(|&d| m.iter().all(|&mi| (d as u32 + mi + 1) % big_n != 0)).collect()
}

/// Canonical orbit representative: entries sorted in descending order.
pub fn orbit_rep(m: &[u32]) -> Vec<u32> {
    let mut v = m.to_vec();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}
