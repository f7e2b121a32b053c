use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use dwork_core::concordance::{cubic_concordance, quartic_row_concordance, CHAR_POLY_TOL};
use dwork_core::frobenius::frobenius_basis;
use dwork_core::monodromy::{monodromy_rep_with, DEFAULT_ORDER_CAP};
use dwork_core::numeric::DEFAULT_PRECISION;
use dwork_core::pfode::{pf_operator, reduce, sector_operator, Point};
use dwork_core::report::{to_csv, verify, Format, Report, RunConfig, Suite, Verification, DEFAULT_TRUNC, DISPLAY_DIGITS};
use dwork_core::sectors::{orbit_rep, sector_grading, spectrum};
use dwork_core::{ComplexMatrix, Rational, Result};
use serde_json::{json, Value};

const RELATION_TOL: f64 = 1e-40;

#[derive(Parser)]
#[command(name = "dwork", version, about = "Sector operators and verification suites for the Dwork pencil")]
struct Cli {
    /// Working precision in bits.
    #[arg(long, global = true, env = "DWORK_PRECISION", default_value_t = DEFAULT_PRECISION)]
    precision: u32,
    /// Series truncation order.
    #[arg(long, global = true, default_value_t = DEFAULT_TRUNC)]
    trunc: usize,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Oscint,
    Mirror,
    Yy,
    Appb,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Action {
    Operator,
    Solve,
    Monodromy,
    Signature,
}

#[derive(Subcommand)]
enum Command {
    /// Hodge spectrum of the Fermat singularity of degree n+1.
    Spectrum {
        #[arg(short, value_parser = clap::value_parser!(u64).range(2..=16))]
        n: u64,
    },
    /// Operator, Frobenius basis and monodromy of the sector z^m.
    Sector {
        #[arg(short, value_parser = clap::value_parser!(u64).range(2..=16))]
        n: u64,
        /// Exponent vector, as digits `1000` or a list `1,0,0,0`.
        #[arg(short, value_parser = parse_m)]
        m: Exponents,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Action::Operator, Action::Signature])]
        actions: Vec<Action>,
    },
    /// Runs a verification suite; the exit code is the number of failures.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
    },
}

#[derive(Clone)]
struct Exponents(Vec<u32>);

fn parse_m(s: &str) -> std::result::Result<Exponents, String> {
    let parts: Vec<&str> = if s.contains(',') { s.split(',').collect() } else { s.split("").filter(|p| !p.is_empty()).collect() };
    if parts.is_empty() {
        return Err("empty exponent vector".into());
    }
    parts
        .iter()
        .map(|p| p.trim().parse::<u32>().map_err(|_| format!("bad exponent {p:?} in {s:?}")))
        .collect::<std::result::Result<_, _>>()
        .map(Exponents)
}

fn matrix_json(m: &ComplexMatrix) -> Value {
    let rows: Vec<Vec<[String; 2]>> = m
        .to_rows()
        .iter()
        .map(|r| {
            r.iter()
                .map(|c| [c.re().to_string_radix(10, Some(DISPLAY_DIGITS)), c.im().to_string_radix(10, Some(DISPLAY_DIGITS))])
                .collect()
        })
        .collect();
    json!(rows)
}

fn spectrum_report(n: usize, config: &RunConfig) -> Result<(Report, Vec<Value>)> {
    let sp = spectrum(n)?;
    let rows: Vec<Value> = sp.counts.iter().map(|(b, c)| json!({ "beta": b.to_string(), "count": c })).collect();
    let mut report = Report::new(format!("spectrum -n {n}"), config);
    report.data = json!({ "n": n, "rows": rows, "total": sp.total() });
    Ok((report, rows))
}

fn solve_json(op: &dwork_core::pfode::ThetaOperator, trunc: usize) -> Result<Value> {
    let basis = frobenius_basis::<Rational>(op, Point::Zero, trunc)?;
    let mut out = Vec::new();
    for (label, s) in basis.labels.iter().zip(&basis.solutions) {
        let mut terms = Vec::new();
        for j in 0..=s.log_degree() {
            for k in 0..s.trunc {
                let c = s.coeff(j, k);
                if c != Rational::from_integer(0.into()) {
                    terms.push(json!({ "log": j, "k": k, "coeff": c.to_string() }));
                }
            }
        }
        out.push(json!({
            "exponent": label.exponent.to_string(),
            "log_index": label.log_index,
            "series_exponent": s.exponent.to_string(),
            "terms": terms,
        }));
    }
    Ok(json!({ "point": "0", "trunc": trunc, "solutions": out }))
}

fn sector_report(n: usize, m: &[u32], actions: &[Action], config: &RunConfig) -> Result<Report> {
    let grading = sector_grading(m, n)?;
    let pf = pf_operator(n, m)?;
    let (reduced, cert) = reduce(&pf);
    let op = sector_operator(n, m)?;
    let label = m.iter().map(u32::to_string).collect::<String>();
    let mut report = Report::new(format!("sector -n {n} -m {label}"), config);
    let mut data = serde_json::Map::new();
    data.insert("n".into(), json!(n));
    data.insert("m".into(), json!(m));
    data.insert("beta".into(), json!(grading.beta.to_string()));
    data.insert("class".into(), json!(grading.class));

    if actions.contains(&Action::Operator) {
        data.insert(
            "operator".into(),
            json!({ "pf": pf.to_json(), "reduced": reduced.to_json(), "certificate": cert, "b_form": op.to_json() }),
        );
    }
    if actions.contains(&Action::Solve) {
        let solve = if op.order() == 0 { Value::Null } else { solve_json(&op, config.trunc)? };
        data.insert("solve".into(), solve);
    }
    let wants_monodromy = actions.contains(&Action::Monodromy) || actions.contains(&Action::Signature);
    if wants_monodromy && op.order() > 0 {
        let rep = monodromy_rep_with(&op, &config.basepoint()?, config.step_safety, DEFAULT_ORDER_CAP)?;
        report.verifications.push(Verification::new(
            "monodromy_relation",
            None,
            rep.relation_residual,
            rep.relation_residual < RELATION_TOL,
        ));
        if actions.contains(&Action::Monodromy) {
            data.insert(
                "monodromy".into(),
                json!({
                    "basepoint": config.basepoint,
                    "m0": matrix_json(&rep.m0),
                    "m1": matrix_json(&rep.m1),
                    "minf": matrix_json(&rep.minf),
                    "relation_residual": format!("{:.3e}", rep.relation_residual),
                }),
            );
        }
        if actions.contains(&Action::Signature) {
            data.insert("signature".into(), json!(rep.orders));
        }
        concordance(n, m, &mut report, &mut data)?;
    } else if wants_monodromy {
        data.insert("signature".into(), Value::Null);
    }
    report.data = Value::Object(data);
    Ok(report)
}

/// Comparison with the tabulated monodromy when the sector is listed.
fn concordance(n: usize, m: &[u32], report: &mut Report, data: &mut serde_json::Map<String, Value>) -> Result<()> {
    let rep = orbit_rep(m);
    if n == 3 {
        if let Some(row) = quartic_row_concordance(&rep)? {
            let dist = row.t0_distance.max(row.tinf_distance);
            report.verifications.push(Verification::new("quartic_concordance", None, dist, row.passed()));
            data.insert("concordance".into(), serde_json::to_value(&row).expect("serializes"));
        }
    } else if n == 2 && rep == [0, 0, 0] {
        let c = cubic_concordance(40)?;
        let dist = c.distances.iter().copied().fold(0.0, f64::max);
        report.verifications.push(Verification::new("cubic_concordance", None, dist, c.passed()));
        data.insert("concordance".into(), json!({ "tol": CHAR_POLY_TOL, "result": c }));
    }
    Ok(())
}

fn emit(text: &str, out: Option<&str>) -> std::io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => {
            let mut out = std::io::stdout().lock();
            let r = out.write_all(text.as_bytes()).and_then(|_| if text.ends_with('\n') { Ok(()) } else { out.write_all(b"\n") });
            match r {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => r,
            }
        }
    }
}

fn run(cli: &Cli, config: &RunConfig) -> Result<(String, usize)> {
    let (text, failures) = match &cli.command {
        Command::Spectrum { n } => {
            let (report, rows) = spectrum_report(*n as usize, config)?;
            let text = match config.format {
                Format::Json => report.to_json(),
                Format::Csv => {
                    let rows: Vec<(String, u64)> = rows
                        .iter()
                        .map(|r| (r["beta"].as_str().unwrap_or_default().to_string(), r["count"].as_u64().unwrap_or(0)))
                        .collect();
                    format!("beta,count\n{}", to_csv(&rows)?)
                }
            };
            (text, report.failures())
        }
        Command::Sector { n, m, actions } => {
            let report = sector_report(*n as usize, &m.0, actions, config)?;
            let text = match config.format {
                Format::Json => report.to_json(),
                Format::Csv => report.verifications_csv()?,
            };
            (text, report.failures())
        }
        Command::Verify { suite } => {
            let suite = match suite {
                SuiteArg::Oscint => Suite::Oscint,
                SuiteArg::Mirror => Suite::Mirror,
                SuiteArg::Yy => Suite::Yy,
                SuiteArg::Appb => Suite::Appb,
                SuiteArg::All => Suite::All,
            };
            let (report, records) = verify(suite, config)?;
            let text = match (config.format, suite) {
                (Format::Json, _) => report.to_json(),
                (Format::Csv, Suite::Oscint) => to_csv(&records)?,
                (Format::Csv, _) => report.verifications_csv()?,
            };
            (text, report.failures())
        }
    };
    Ok((text, failures))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::Sector { n, m, .. } = &cli.command {
        if m.0.len() != *n as usize + 1 {
            Cli::command()
                .error(ErrorKind::ValueValidation, format!("-m needs {} exponents, got {}", n + 1, m.0.len()))
                .exit();
        }
    }
    let config = RunConfig {
        precision_bits: cli.precision,
        trunc: cli.trunc,
        output: cli.out.clone(),
        format: match cli.format {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        },
        ..RunConfig::default()
    };
    if let Err(e) = config.validate() {
        Cli::command().error(ErrorKind::ValueValidation, e.to_string()).exit();
    }
    config.install();
    match run(&cli, &config) {
        Ok((text, failures)) => {
            if let Err(e) = emit(&text, config.output.as_deref()) {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::FAILURE;
            }
            ExitCode::from(failures.min(255) as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
