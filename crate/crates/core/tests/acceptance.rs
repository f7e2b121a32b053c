//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero on any failure.

use std::process::ExitCode;
use std::time::Instant;

use dwork_core::appb::{appb_check, CHAR_POLY_TOL as GRAM_TOL, CLAUSEN_TOL, CONNECTION_TOL, QUADRATIC_TOL};
use dwork_core::concordance::{
    basepoint_independent, cubic_concordance, quintic_monodromy, quartic_concordance, CHAR_POLY_TOL,
};
use dwork_core::data::{constants, rationals};
use dwork_core::mirror::{
    chen_ruan_dimension, i_function_quartic, maximal_check, n_k, pfode_reduced_order, qde_check,
    quartic_3f2_coefficients,
};
use dwork_core::monodromy::{
    continue_basis, default_basepoint, monodromy_rep, numeric_basis, PathPlan, DEFAULT_STEP_SAFETY,
};
use dwork_core::numeric::{gamma, q, qi, BigComplex};
use dwork_core::oscint::{chi3_identities, two_path};
use dwork_core::pfode::{admissible_count, pf_operator, reduce, reduced_order_law, sector_operator, shift_relation_check, Point};
use dwork_core::sectors::{all_vectors, sector_orbits, spectrum};
use dwork_core::yy::yy_check;
use dwork_core::Result;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

const RELATION_TOL: f64 = 1e-40;
const OSCINT_TOL: f64 = 1e-40;
const LOOP_TOL: f64 = 1e-50;
const GAMMA_TOL: f64 = 1e-60;
const YY_ORDER: usize = 20;
const CLAUSEN_ORDER: usize = 40;

type Outcome = Result<(bool, String)>;

fn spectra() -> Outcome {
    let s2 = spectrum(2)?;
    let s3 = spectrum(3)?;
    let c2: Vec<u64> = s2.counts.values().copied().collect();
    let c3: Vec<u64> = s3.counts.values().copied().collect();
    let betas: Vec<_> = s2.counts.keys().cloned().collect();
    let ok = c2 == [1, 3, 3, 1]
        && betas == [qi(0), q(1, 3), q(2, 3), qi(1)]
        && c3 == [1, 4, 10, 16, 19, 16, 10, 4, 1]
        && s2.total() == 8
        && s3.total() == 81;
    Ok((ok, format!("n=2 {c2:?} total {}, n=3 {c3:?} total {}", s2.total(), s3.total())))
}

fn operator_tables() -> Outcome {
    let rows = &constants().operator_row;
    let mut bad = Vec::new();
    for row in rows {
        let (red, _) = reduce(&pf_operator(row.n, &row.m)?);
        if red.lower != rationals(&row.lower)? || red.upper != rationals(&row.upper)? {
            bad.push(format!("{:?}", row.m));
        }
    }
    Ok((bad.is_empty(), format!("{} rows, mismatches {bad:?}", rows.len())))
}

fn reduced_order_law_check() -> Outcome {
    let mut checked = 0;
    let mut bad = 0;
    for n in 2..=3usize {
        for m in all_vectors(n + 1, n as u32) {
            let order = reduce(&pf_operator(n, &m)?).0.order();
            let law = reduced_order_law(n, &m);
            bad += usize::from(order != law || law != admissible_count(n, &m));
            checked += 1;
        }
    }
    Ok((bad == 0, format!("{checked} vectors, {bad} disagreements")))
}

fn monodromy_relation() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for n in 2..=3usize {
        for s in sector_orbits(n, &qi(1))? {
            let op = sector_operator(n, &s.m)?;
            if op.order() == 0 {
                continue;
            }
            worst = worst.max(monodromy_rep(&op, &default_basepoint())?.relation_residual);
            count += 1;
        }
    }
    let quintic = quintic_monodromy()?.relation_residual;
    worst = worst.max(quintic);
    Ok((worst < RELATION_TOL, format!("{count} sector operators and the quintic, worst {worst:.2e}")))
}

fn quartic_table() -> Outcome {
    let rows = quartic_concordance()?;
    let mut ok = rows.len() == 6;
    let mut detail = Vec::new();
    for r in &rows {
        ok &= r.passed();
        detail.push(format!(
            "{} {}{} T0 {:.1e} Tinf {:.1e}",
            r.label,
            if r.signature_matches() { "sig ok" } else { "sig MISMATCH" },
            if r.operator_matches { "" } else { " op MISMATCH" },
            r.t0_distance,
            r.tinf_distance
        ));
    }
    Ok((ok, format!("tol {CHAR_POLY_TOL:e}; {}", detail.join("; "))))
}

fn cubic() -> Outcome {
    let c = cubic_concordance(40)?;
    let worst = c.distances.iter().copied().fold(0.0, f64::max);
    Ok((c.passed(), format!("signature {:?}, char-poly {worst:.1e}, binomial sectors {}", c.numeric, c.binomial_sectors)))
}

fn quintic() -> Outcome {
    let qm = quintic_monodromy()?;
    Ok((qm.passed(), format!("signature {:?}, unipotent {}, rank(M0-I) {}", qm.numeric, qm.m0_unipotent, qm.rank_m0_minus_1)))
}

fn oscillating() -> Outcome {
    let samples = [
        BigComplex::from_rational(&q(1, 3)),
        BigComplex::from_rationals(&q(1, 2), &q(1, 4)),
        BigComplex::from_rational(&q(-2, 3)),
    ];
    let mut worst = 0.0f64;
    let mut sectors = 0;
    for n in 2..=3usize {
        for s in sector_orbits(n, &qi(1))? {
            if s.beta >= qi(1) {
                continue;
            }
            sectors += 1;
            for a in &samples {
                worst = worst.max(two_path(n, &s.m, a, 1e-70)?.1);
            }
        }
    }
    Ok((worst < OSCINT_TOL, format!("{sectors} orbit representatives x 3 points, worst {worst:.2e}")))
}

fn chi3() -> Outcome {
    let r = chi3_identities();
    Ok((r.passed(), format!("{} products, {} vanishing, {} failures", r.pairs, r.vanishing, r.failures)))
}

fn mirror_qde() -> Outcome {
    let qde = qde_check(&i_function_quartic(20, 2)?);
    let f = i_function_quartic(20, 0)?.slice(0);
    let f_ok = f.iter().zip(quartic_3f2_coefficients(20)).all(|(a, b)| *a == b);
    let maximal = maximal_check(12)?;
    let mut nk_bad = 0;
    let keys = all_vectors(4, 3);
    for k in &keys {
        nk_bad += usize::from(n_k(&[k[0], k[1], k[2], k[3]]) != pfode_reduced_order(&[k[0], k[1], k[2], k[3]])?);
    }
    let ok = qde.passed && f_ok && maximal.passed() && maximal.keys_checked == 70 && keys.len() == 256 && nk_bad == 0;
    Ok((
        ok,
        format!(
            "QDE to {} {}, F = 3F2 {f_ok}, {} maximal keys ({} ODE failures), N_k mismatches {nk_bad}/256",
            qde.trunc,
            if qde.passed { "exact" } else { "nonzero" },
            maximal.keys_checked,
            maximal.ode_failures.len()
        ),
    ))
}

fn chen_ruan() -> Outcome {
    let d = chen_ruan_dimension();
    Ok((d == 81, format!("dimension {d}")))
}

fn yamaguchi_yau() -> Outcome {
    let rep = yy_check(YY_ORDER)?;
    let names: Vec<String> = rep
        .relations
        .iter()
        .chain(&rep.closure)
        .map(|c| format!("{}:{}", c.name, if c.holds() { "ok" } else { "FAIL" }))
        .collect();
    Ok((rep.passed() && rep.relations.len() == 3 && rep.closure.len() == 4, format!("order {YY_ORDER}; {}", names.join(", "))))
}

fn k3_structure() -> Outcome {
    let r = appb_check(CLAUSEN_ORDER)?;
    let ok = r.passed() && r.quadratic.samples.len() == 10;
    Ok((
        ok,
        format!(
            "Sym2 {}, Clausen {:.1e} (tol {CLAUSEN_TOL:e}), quadratic {:.1e} over {} points (tol {QUADRATIC_TOL:e}), \
             c1/c2 {:.1e} (tol {CONNECTION_TOL:e}), Gram preserved {:?} orders (4,2,inf) {}, char-poly {:.1e} (tol {GRAM_TOL:e})",
            r.clausen.sym2_equal && r.clausen.sym2_twisted_equal,
            r.clausen.k3_basis_residual,
            r.quadratic.worst(),
            r.quadratic.samples.len() / 2,
            r.connection.continuation_residual.max(r.connection.identity_residual),
            r.gram.preserved,
            r.gram.t0_order_4 && r.gram.t1_involution && r.gram.tinf_unipotent,
            r.gram.char_poly_distance
        ),
    ))
}

fn properties() -> Outcome {
    let mut basepoint = true;
    for (n, m) in [(2usize, vec![0u32, 0, 0]), (3, vec![0, 0, 0, 0]), (3, vec![1, 0, 0, 0]), (3, vec![2, 0, 0, 0])] {
        basepoint &= basepoint_independent(n, &m)?;
    }

    let op = sector_operator(3, &[0, 0, 0, 0])?;
    let path = PathPlan::contractible_loop(&default_basepoint(), DEFAULT_STEP_SAFETY)?;
    let m = continue_basis(&op, &numeric_basis(&op, Point::Zero, 0.5)?, &path, None)?;
    let contractible = m.is_identity(LOOP_TOL);

    let mut runner = TestRunner::new_with_rng(Config::default(), TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let strat = (-6.0f64..8.0, -5.0f64..5.0);
    let mut worst = 0.0f64;
    let mut samples = 0;
    while samples < 100 {
        let (re, im) = strat.new_tree(&mut runner).expect("strategy").current();
        if im.abs() < 1e-3 && (re - re.round()).abs() < 1e-3 {
            continue;
        }
        let z = BigComplex::new(re, im);
        let g = gamma(&z)?;
        let g1 = gamma(&(z.clone() + BigComplex::from_i64(1)))?;
        worst = worst.max((g1.clone() - z * g).abs_f64() / g1.abs_f64());
        samples += 1;
    }

    let mut shift = true;
    for (n, m) in [(2usize, vec![0u32, 0, 0]), (2, vec![1, 0, 0]), (3, vec![0, 0, 0, 0]), (3, vec![1, 0, 0, 0])] {
        shift &= shift_relation_check(n, &m, 40)?;
    }
    let ok = basepoint && contractible && worst < GAMMA_TOL && shift;
    Ok((
        ok,
        format!("basepoint {basepoint}, contractible loop {contractible}, gamma recurrence {worst:.1e} over {samples}, shift {shift}"),
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 14] = [
        ("spectrum reproduction", spectra),
        ("operator tables", operator_tables),
        ("reduced-order law", reduced_order_law_check),
        ("monodromy relation", monodromy_relation),
        ("quartic sector concordance", quartic_table),
        ("cubic concordance", cubic),
        ("quintic monodromy", quintic),
        ("oscillating-integral identity", oscillating),
        ("cubic chi_-3 identity", chi3),
        ("mirror / quantum ODE", mirror_qde),
        ("Chen-Ruan dimension", chen_ruan),
        ("Yamaguchi-Yau relations", yamaguchi_yau),
        ("symmetric-square K3 structure", k3_structure),
        ("property suite", properties),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
        failures += usize::from(!ok);
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("{verdict} {:>2} {name} [{:.1}s] {detail}", i + 1, start.elapsed().as_secs_f64());
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
