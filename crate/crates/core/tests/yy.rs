use dwork_core::numeric::{harmonic, qi};
use dwork_core::yy::{closure, quintic_operator, relations, yy_check, YyState};
use dwork_core::{Error, Rational};
use num_traits::{One, Zero};

fn factorial(n: usize) -> Rational {
    (1..=n as i64).fold(Rational::one(), |a, i| a * qi(i))
}

#[test]
fn periods_match_direct_coefficients() {
    let st = YyState::new(15).unwrap();
    let [i0, i1, i2, _] = &st.periods;
    for d in 0..15usize {
        let a = factorial(5 * d) / factorial(d).pow(5);
        assert_eq!(i0.coeff(0, d), a);
        // derivative in epsilon of prod (5e + l) / prod (e + l)^5 at e = 0
        assert_eq!(i1.coeff(0, d), a.clone() * qi(5) * (harmonic(5 * d) - harmonic(d)));
        assert_eq!(i1.coeff(1, d), a);
        // I2 carries the factor 5 and log^2 / 2
        assert_eq!(i2.coeff(2, d), i0.coeff(0, d) * qi(5) / qi(2));
    }
    assert_eq!(i0.coeff(0, 1), qi(120));
    assert!(quintic_operator().apply(i0).is_zero());
}

#[test]
fn three_relations_exact_to_order_20() {
    let rep = yy_check(20).unwrap();
    assert!(rep.passed(), "{rep:#?}");
    assert_eq!(rep.relations.len(), 3);
    for r in &rep.relations {
        assert!(r.holds() && r.checked_to >= 16, "{r:?}");
    }
    assert_eq!(rep.c_at_zero, "5");
    assert_eq!(rep.i0_z1, "120");
}

#[test]
fn printed_third_relation_fails_at_constant_term() {
    let rep = yy_check(12).unwrap();
    let bad = rep.printed_relation3.first_bad.clone().expect("printed form fails");
    assert_eq!((bad.log_power, bad.exponent.as_str(), bad.value.as_str()), (0, "0", "-32"));
}

#[test]
fn derivatives_close_in_the_ring() {
    let checks = closure(16).unwrap();
    assert_eq!(checks.len(), 4);
    for c in &checks {
        assert!(c.holds(), "{c:?}");
        assert_eq!(c.checked_to, 16);
    }
}

#[test]
fn relation_two_needs_the_factor_five() {
    // with unscaled I2 the C-term is five times too large
    let mut st = YyState::new(12).unwrap();
    st.i20 = st.i20.scale(&(Rational::one() / qi(5)));
    st.i30 = st.i30.scale(&(Rational::one() / qi(5)));
    let (rels, _) = relations(&st).unwrap();
    assert!(rels[0].holds());
    assert!(!rels[1].holds());
    assert!(rels[2].holds());
}

#[test]
fn truncation_guard() {
    assert!(matches!(yy_check(9), Err(Error::TruncationError(_))));
    let u = YyState::new(10).unwrap().u();
    assert!(u.coeff(0, 0).is_zero());
    assert_eq!(u.coeff(0, 2), qi(3125 * 3125));
}
