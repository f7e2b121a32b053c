use dwork_core::concordance::{
    basepoint_independent, cubic_concordance, quintic_monodromy, quartic_concordance, quartic_row_concordance, CHAR_POLY_TOL,
};
use dwork_core::data::int_matrix;
use dwork_core::monodromy::{char_poly_distance, default_basepoint, monodromy_rep, rational_matrix_to_complex, Order};
use dwork_core::numeric::{q, BigComplex};
use dwork_core::pfode::sector_operator;

use Order::{Finite as F, Infinite as Inf};

#[test]
fn quartic_rows_match_except_the_printed_t0() {
    let rows = quartic_concordance().unwrap();
    assert_eq!(rows.len(), 6);
    let expected = [[F(4), F(2), Inf], [F(4), F(4), Inf], [F(2), Inf, Inf], [F(4), Inf, F(4)], [F(4), F(4), Inf], [F(1), F(4), F(4)]];
    for (r, e) in rows.iter().zip(expected) {
        assert!(r.operator_matches && r.signature_matches(), "{r:?}");
        assert_eq!(r.numeric, e, "{}", r.label);
        assert!(r.tinf_distance < CHAR_POLY_TOL, "{}", r.label);
        assert!(r.relation_residual < 1e-40);
    }
    let bad: Vec<_> = rows.iter().filter(|r| !r.passed()).map(|r| r.label.as_str()).collect();
    assert_eq!(bad, ["0,0,0,0"]);
    assert!(rows[0].t0_distance > 1.0);
}

#[test]
fn corrected_t0_for_the_zero_sector() {
    // the printed T0 with the sign of its (1,2) entry flipped
    let op = sector_operator(3, &[0, 0, 0, 0]).unwrap();
    let rep = monodromy_rep(&op, &default_basepoint()).unwrap();
    let t0 = rational_matrix_to_complex(&int_matrix(&[vec![0, 0, -1], vec![0, 1, -4], vec![-1, 1, -2]]).unwrap())
        .scale(&BigComplex::exp_2pi_i(&q(-1, 4)));
    assert!(char_poly_distance(&rep.m0, &t0).unwrap() < CHAR_POLY_TOL);
}

#[test]
fn lookup_by_exponent_vector() {
    let row = quartic_row_concordance(&[1, 0, 0, 0]).unwrap().unwrap();
    assert!(row.passed());
    assert!(quartic_row_concordance(&[3, 3, 3, 3]).unwrap().is_none());
}

#[test]
fn cubic_and_quintic() {
    let c = cubic_concordance(30).unwrap();
    assert!(c.passed(), "{c:?}");
    assert_eq!(c.numeric, [F(3), Inf, Inf]);
    let qm = quintic_monodromy().unwrap();
    assert!(qm.passed(), "{qm:?}");
    assert_eq!(qm.rank_m0_minus_1, 3);
}

#[test]
fn signatures_do_not_depend_on_the_basepoint() {
    assert!(basepoint_independent(2, &[0, 0, 0]).unwrap());
    assert!(basepoint_independent(3, &[1, 1, 0, 0]).unwrap());
}
