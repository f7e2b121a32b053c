//! Run configuration, verification records and the suite runners behind
//! `dwork verify`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use crate::appb::appb_check;
use crate::mirror::{
    chen_ruan_dimension, i_function_quartic, maximal_check, mirror_map_quartic, n_k, pfode_reduced_order,
    qde_check, quartic_3f2_coefficients, quartic_g_closed_form,
};
use crate::numeric::{q, qi, set_precision, BigComplex, DEFAULT_PRECISION};
use crate::oscint::{chi3_identities, cubic_pairing_residual, records, two_path, OscRecord};
use crate::sectors::{all_vectors, sector_orbits, spectrum};
use crate::yy::yy_check;
use crate::{Complex, Error, Result};

pub const SCHEMA: u32 = 1;
/// Digits in every decimal string of a report.
pub const DISPLAY_DIGITS: usize = 50;
pub const DEFAULT_TRUNC: usize = 200;
pub const PRECISION_ENV: &str = "DWORK_PRECISION";

/// Two-path tolerance for the oscillating integrals.
pub const OSCINT_TOL: f64 = 1e-40;
/// Pairing residual tolerance for the cubic real structure.
pub const PAIRING_TOL: f64 = 1e-50;
/// Series truncation tolerance used by the oscillating-integral suite.
const SERIES_TOL: f64 = 1e-70;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::DomainError(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub precision_bits: u32,
    pub trunc: usize,
    /// Real and imaginary parts as decimal strings.
    pub basepoint: [String; 2],
    pub step_safety: f64,
    /// Destination file; standard output when absent.
    pub output: Option<String>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision_bits: DEFAULT_PRECISION,
            trunc: DEFAULT_TRUNC,
            basepoint: ["0.4".into(), "0".into()],
            step_safety: 0.5,
            output: None,
            format: Format::Json,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.precision_bits < 64 {
            return Err(Error::DomainError(format!("precision {} < 64 bits", self.precision_bits)));
        }
        if !(self.step_safety > 0.0 && self.step_safety < 1.0) {
            return Err(Error::DomainError(format!("step safety {} outside (0, 1)", self.step_safety)));
        }
        self.basepoint()?;
        Ok(())
    }

    pub fn basepoint(&self) -> Result<Complex> {
        BigComplex::parse_decimal(&self.basepoint[0], &self.basepoint[1])
            .ok_or_else(|| Error::DomainError(format!("bad basepoint {:?}", self.basepoint)))
    }

    /// Applies the working precision to the current thread.
    pub fn install(&self) {
        set_precision(self.precision_bits);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl From<bool> for Verdict {
    fn from(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Verification {
    pub name: String,
    pub trunc: Option<usize>,
    pub residual_norm: String,
    pub verdict: Verdict,
}

impl Verification {
    pub fn new(name: impl Into<String>, trunc: Option<usize>, residual: f64, ok: bool) -> Self {
        let residual_norm = if residual == 0.0 { "0".to_string() } else { format!("{residual:.3e}") };
        Verification { name: name.into(), trunc, residual_norm, verdict: ok.into() }
    }

    /// A failed run of a check that could not complete.
    pub fn error(name: impl Into<String>, e: &Error) -> Self {
        Verification { name: name.into(), trunc: None, residual_norm: format!("error: {e}"), verdict: Verdict::Fail }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Oscint,
    Mirror,
    Yy,
    Appb,
    All,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oscint" => Ok(Suite::Oscint),
            "mirror" => Ok(Suite::Mirror),
            "yy" => Ok(Suite::Yy),
            "appb" => Ok(Suite::Appb),
            "all" => Ok(Suite::All),
            _ => Err(Error::DomainError(format!("unknown suite {s:?}"))),
        }
    }
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Oscint => "oscint",
            Suite::Mirror => "mirror",
            Suite::Yy => "yy",
            Suite::Appb => "appb",
            Suite::All => "all",
        }
    }

    fn members(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Oscint, Suite::Mirror, Suite::Yy, Suite::Appb],
            s => vec![s],
        }
    }
}

/// Top-level document written by every command.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub config: RunConfig,
    pub verifications: Vec<Verification>,
    pub data: Value,
}

impl Report {
    pub fn new(command: impl Into<String>, config: &RunConfig) -> Self {
        Report {
            schema: SCHEMA,
            command: command.into(),
            config: config.clone(),
            verifications: Vec::new(),
            data: Value::Null,
        }
    }

    pub fn failures(&self) -> usize {
        self.verifications.iter().filter(|v| !v.passed()).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Verification rows as CSV.
    pub fn verifications_csv(&self) -> Result<String> {
        to_csv(&self.verifications)
    }
}

pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::DomainError(format!("csv: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::DomainError(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::DomainError(format!("csv: {e}")))
}

fn oscint_samples() -> Vec<Complex> {
    vec![
        BigComplex::from_rational(&q(1, 3)),
        BigComplex::from_rationals(&q(1, 2), &q(1, 4)),
        BigComplex::from_rational(&q(-2, 3)),
    ]
}

/// Output of one suite: verifications, structured data and CSV rows.
#[derive(Clone, Debug, Default)]
pub struct SuiteOutput {
    pub verifications: Vec<Verification>,
    pub data: Value,
    /// Value table of the oscillating-integral suite.
    pub records: Vec<OscRecord>,
}

fn or_error(name: &str, r: Result<Verification>) -> Verification {
    r.unwrap_or_else(|e| Verification::error(name, &e))
}

pub fn run_oscint() -> SuiteOutput {
    let mut out = SuiteOutput::default();
    let mut worst_by_n = Vec::new();
    for n in 2..=3usize {
        let name = format!("two_path n={n}");
        let res = (|| -> Result<f64> {
            let mut worst = 0.0f64;
            for s in sector_orbits(n, &qi(1))? {
                if s.beta >= qi(1) {
                    continue;
                }
                for a in oscint_samples() {
                    let (rows, err) = two_path(n, &s.m, &a, SERIES_TOL)?;
                    worst = worst.max(err);
                    out.records.extend(records(&s.m, &a, &rows, DISPLAY_DIGITS));
                }
            }
            Ok(worst)
        })();
        match res {
            Ok(w) => {
                worst_by_n.push(json!({ "n": n, "worst_rel_err": format!("{w:.3e}") }));
                out.verifications.push(Verification::new(name, None, w, w < OSCINT_TOL));
            }
            Err(e) => out.verifications.push(Verification::error(name, &e)),
        }
    }
    let chi = chi3_identities();
    out.verifications.push(Verification::new(
        "chi3_identities",
        None,
        (chi.failures + chi.parity_failures + chi.conjugation_failures) as f64,
        chi.passed(),
    ));
    out.verifications.push(or_error(
        "cubic_pairing",
        (|| {
            let a = BigComplex::from_rational(&q(1, 2));
            let mut worst = 0.0f64;
            for m in [[1u32, 0, 0], [0, 1, 0], [0, 0, 1], [0, 1, 1], [1, 0, 1], [1, 1, 0]] {
                worst = worst.max(cubic_pairing_residual(&m, &a, SERIES_TOL)?);
            }
            Ok(Verification::new("cubic_pairing", None, worst, worst < PAIRING_TOL))
        })(),
    ));
    out.data = json!({ "two_path": worst_by_n, "chi3": chi });
    out
}

pub fn run_mirror() -> SuiteOutput {
    let mut out = SuiteOutput::default();
    let v = &mut out.verifications;
    v.push(or_error(
        "quantum_differential_equation",
        (|| {
            let rep = qde_check(&i_function_quartic(20, 2)?);
            Ok(Verification::new("quantum_differential_equation", Some(20), f64::from(u8::from(!rep.passed)), rep.passed))
        })(),
    ));
    v.push(or_error(
        "f_equals_3f2",
        (|| {
            let f = i_function_quartic(20, 0)?.slice(0);
            let bad = f.iter().zip(quartic_3f2_coefficients(20)).filter(|(a, b)| *a != b).count();
            Ok(Verification::new("f_equals_3f2", Some(20), bad as f64, bad == 0))
        })(),
    ));
    v.push(or_error(
        "mirror_map",
        (|| {
            let mm = mirror_map_quartic(12)?;
            let (_, g, t) = &mm.exact;
            let bad = (0..=12).filter(|&d| g[d] != quartic_g_closed_form(d)).count();
            let ok = bad == 0 && t[1] == qi(104) && mm.j_leading == "1";
            Ok(Verification::new("mirror_map", Some(12), bad as f64, ok))
        })(),
    ));
    match maximal_check(12) {
        Ok(rep) => {
            v.push(Verification::new("i_tw_maximal_ode", Some(12), rep.ode_failures.len() as f64, rep.ode_failures.is_empty() && rep.keys_checked == 70));
            v.push(Verification::new("n_k_dimensions", None, rep.dimension_failures.len() as f64, rep.dimension_failures.is_empty()));
            v.push(Verification::new("mirror_dictionary", None, rep.dictionary_failures.len() as f64, rep.dictionary_failures.is_empty()));
            out.data = json!({ "maximal": rep });
        }
        Err(e) => v.push(Verification::error("i_tw_maximal_ode", &e)),
    }
    v.push(or_error(
        "n_k_reduced_order",
        (|| {
            let mut bad = 0usize;
            for k in all_vectors(4, 3) {
                let k = [k[0], k[1], k[2], k[3]];
                bad += usize::from(n_k(&k) != pfode_reduced_order(&k)?);
            }
            Ok(Verification::new("n_k_reduced_order", None, bad as f64, bad == 0))
        })(),
    ));
    v.push(or_error(
        "chen_ruan_dimension",
        (|| {
            let d = chen_ruan_dimension();
            let ok = d == 81 && d as u64 == spectrum(3)?.total();
            Ok(Verification::new("chen_ruan_dimension", None, (d as f64 - 81.0).abs(), ok))
        })(),
    ));
    out
}

pub fn run_yy(trunc: usize) -> SuiteOutput {
    let mut out = SuiteOutput::default();
    match yy_check(trunc) {
        Ok(rep) => {
            for c in rep.relations.iter().chain(&rep.closure) {
                let ok = c.holds() && c.checked_to >= trunc as i64 - 4;
                out.verifications.push(Verification::new(c.name.clone(), Some(trunc), f64::from(u8::from(!c.holds())), ok));
            }
            out.data = serde_json::to_value(&rep).expect("serializes");
        }
        Err(e) => out.verifications.push(Verification::error("yy", &e)),
    }
    out
}

pub fn run_appb(trunc: usize) -> SuiteOutput {
    let mut out = SuiteOutput::default();
    match appb_check(trunc) {
        Ok(rep) => {
            let residuals = [
                rep.clausen.k3_basis_residual,
                rep.quadratic.worst(),
                rep.connection.identity_residual.max(rep.connection.continuation_residual),
                rep.gram.char_poly_distance,
            ];
            for ((name, ok), r) in rep.verdicts().into_iter().zip(residuals) {
                out.verifications.push(Verification::new(name, Some(trunc), r, ok));
            }
            out.data = serde_json::to_value(&rep).expect("serializes");
        }
        Err(e) => out.verifications.push(Verification::error("appb", &e)),
    }
    out
}

fn run_one(suite: Suite) -> SuiteOutput {
    match suite {
        Suite::Oscint => run_oscint(),
        Suite::Mirror => run_mirror(),
        Suite::Yy => run_yy(20),
        Suite::Appb => run_appb(40),
        Suite::All => unreachable!("expanded by members"),
    }
}

/// Runs the suite's checks, one worker thread per member suite.
pub fn verify(suite: Suite, config: &RunConfig) -> Result<(Report, Vec<OscRecord>)> {
    config.validate()?;
    let members = suite.members();
    let outputs: Vec<SuiteOutput> = std::thread::scope(|s| {
        let handles: Vec<_> = members
            .iter()
            .map(|&m| {
                s.spawn(move || {
                    config.install();
                    run_one(m)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("suite worker panicked")).collect()
    });
    let mut report = Report::new(format!("verify {}", suite.name()), config);
    let mut data = serde_json::Map::new();
    let mut recs = Vec::new();
    for (m, o) in members.iter().zip(outputs) {
        for mut v in o.verifications {
            if members.len() > 1 {
                v.name = format!("{}/{}", m.name(), v.name);
            }
            report.verifications.push(v);
        }
        data.insert(m.name().to_string(), o.data);
        recs.extend(o.records);
    }
    report.data = Value::Object(data);
    Ok((report, recs))
}
