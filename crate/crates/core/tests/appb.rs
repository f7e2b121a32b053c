use dwork_core::appb::{
    appb_check, b_of_t, clausen_check, connection_check, connection_constants, d_elliptic, d_quartic,
    d_quartic_twisted, d_triangular, d_triangular_twisted, gram_preservation, k3_matrices, quadratic_transform_check,
    CONNECTION_TOL,
};
use dwork_core::frobenius::hyp2f1;
use dwork_core::numeric::{q, qi, BigComplex};
use dwork_core::pfode::symmetric_power;
use dwork_core::{Error, RationalMatrix};
use proptest::prelude::*;

#[test]
fn displayed_operators() {
    assert_eq!(d_triangular_twisted().lower, vec![q(-3, 8), q(-1, 8)]);
    assert_eq!(d_triangular_twisted().upper, vec![qi(0), qi(0)]);
    assert_eq!(d_quartic_twisted().lower, vec![q(-3, 4), q(-1, 2), q(-1, 4)]);
    assert_eq!(d_quartic_twisted().upper, vec![qi(0); 3]);
    assert_eq!(symmetric_power(&d_triangular(), 2).unwrap(), d_quartic());
    assert_eq!(d_elliptic().twist(&q(1, 4)).lower, vec![q(-3, 4), q(-1, 4)]);
}

#[test]
fn clausen_to_order_40() {
    let rep = clausen_check(40).unwrap();
    assert!(rep.passed(), "{rep:?}");
    assert!(rep.k3_basis_residual < 1e-50);
    assert!(matches!(clausen_check(9), Err(Error::TruncationError(_))));
}

#[test]
fn quadratic_transformation_samples() {
    let rep = quadratic_transform_check(&dwork_core::appb::default_quadratic_samples()).unwrap();
    assert_eq!(rep.samples.len(), 10);
    assert!(rep.passed(), "{rep:?}");
    // t = 0 gives 1 on both sides
    assert_eq!(rep.samples[0].rel_err, 0.0);
    // the variable map sends t = 2 to b = 1 and is invariant under t -> t/(t-1)
    let t = BigComplex::from_rational(&q(1, 3));
    let fricke = BigComplex::from_rational(&q(-1, 2));
    assert!((b_of_t(&t) - b_of_t(&fricke)).abs_f64() < 1e-70);
    assert!((b_of_t(&BigComplex::from_i64(2)) - BigComplex::from_i64(1)).abs_f64() < 1e-70);
    // outside the disk the series evaluation refuses
    let far = BigComplex::from_rational(&q(99, 100));
    assert!(matches!(quadratic_transform_check(&[far]), Err(Error::ConvergenceError(_))));
}

#[test]
fn connection_constants_frozen() {
    // mpmath at 60 digits
    let (c1, c2) = connection_constants().unwrap();
    let e1 = BigComplex::parse_decimal("1.13391555972608273244015651034743879134429535680540361123632", "0").unwrap();
    let e2 = BigComplex::parse_decimal("-0.198497213578803285626090408017040707689409995297947285491707", "0").unwrap();
    assert!((c1 - e1).abs_f64() < 1e-55);
    assert!((c2 - e2).abs_f64() < 1e-55);
}

#[test]
fn connection_by_continuation() {
    let rep = connection_check().unwrap();
    assert!(rep.passed(), "{rep:?}");
    assert!(rep.continuation_residual < CONNECTION_TOL);
    assert!(rep.c2_negative_real);
}

#[test]
fn k3_lattice_monodromy() {
    let rep = gram_preservation().unwrap();
    assert!(rep.passed(), "{rep:?}");
    let [g, _, t1, _] = k3_matrices().unwrap();
    assert_eq!(g, dwork_core::data::int_matrix(&[vec![0, 0, 1], vec![0, 4, 0], vec![1, 0, 0]]).unwrap());
    assert_eq!(t1.mul(&g).unwrap().mul(&t1.transpose()).unwrap(), g);
}

#[test]
fn perturbed_matrix_breaks_gram() {
    let [g, t0, _, _] = k3_matrices().unwrap();
    let mut bad: RationalMatrix = t0.clone();
    bad[(0, 0)] = bad[(0, 0)].clone() + qi(1);
    assert_ne!(bad.mul(&g).unwrap().mul(&bad.transpose()).unwrap(), g);
}

#[test]
fn full_suite_has_four_verdicts() {
    let rep = appb_check(40).unwrap();
    assert_eq!(rep.verdicts().len(), 4);
    assert!(rep.passed());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    // the quadratic relation at random points of the common disk
    #[test]
    fn quadratic_relation_random(r in 0.0f64..0.3, phi in 0.0f64..6.28) {
        let t = BigComplex::new(r * phi.cos(), r * phi.sin());
        let lhs = hyp2f1(&q(1, 4), &q(1, 4), &q(1, 2), &t).unwrap();
        let pre = (BigComplex::from_i64(1) - t.clone()).pow_rational(&q(-1, 8));
        let rhs = pre * hyp2f1(&q(1, 8), &q(1, 8), &q(3, 4), &b_of_t(&t)).unwrap();
        prop_assert!((lhs.clone() - rhs).abs_f64() / lhs.abs_f64() < 1e-40);
    }
}
