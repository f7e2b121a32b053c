use dwork_core::numeric::{
    bernoulli, cyclotomic_poly, gamma, gamma_rational, pochhammer, q, qi, BigComplex, CycInt,
    Matrix, Poly, Scalar,
};
use dwork_core::{Complex, Rational};
use num_bigint::BigInt;
use proptest::prelude::*;
use rug::Float;

fn mpfr_gamma(x: &Rational) -> Float {
    let p = 300;
    let r = rug::Rational::from((
        rug::Integer::from_str_radix(&x.numer().to_str_radix(16), 16).unwrap(),
        rug::Integer::from_str_radix(&x.denom().to_str_radix(16), 16).unwrap(),
    ));
    Float::with_val(p, &r).gamma()
}

#[test]
fn gamma_matches_mpfr_on_rationals() {
    for (a, b) in [(1, 3), (1, 8), (3, 8), (5, 8), (7, 8), (7, 2), (-1, 2), (-7, 3), (41, 5), (1, 1000)] {
        let x = q(a, b);
        let g = gamma_rational(&x).unwrap();
        let oracle = mpfr_gamma(&x);
        let diff = Float::with_val(300, g.re() - &oracle).abs() / oracle.clone().abs();
        assert!(diff < 1e-70, "gamma({x}) rel err {diff}");
        assert!(g.im().is_zero() || g.im().clone().abs() < 1e-70);
    }
}

#[test]
fn gamma_one_third_digits() {
    let g = gamma_rational(&q(1, 3)).unwrap();
    assert!(g.to_decimal(50).starts_with("2.67893853470774763365569294097467764412868937795"));
}

#[test]
fn gamma_poles_rejected() {
    assert!(gamma_rational(&qi(0)).is_err());
    assert!(gamma_rational(&qi(-3)).is_err());
    assert!(gamma(&BigComplex::new(-2.0, 0.0)).is_err());
}

#[test]
fn gamma_half_is_sqrt_pi() {
    let g = gamma_rational(&q(1, 2)).unwrap();
    let s = BigComplex::pi().sqrt();
    assert!((g - s).abs_f64() < 1e-70);
}

#[test]
fn bernoulli_small_values() {
    assert_eq!(bernoulli(1), q(-1, 2));
    assert_eq!(bernoulli(2), q(1, 6));
    assert_eq!(bernoulli(12), q(-691, 2730));
    assert_eq!(bernoulli(13), qi(0));
}

#[test]
fn exp_2pi_i_quarter_points_exact() {
    assert_eq!(BigComplex::exp_2pi_i(&q(1, 4)), BigComplex::i());
    assert_eq!(BigComplex::exp_2pi_i(&q(-1, 2)), BigComplex::from_i64(-1));
    let w = BigComplex::root_of_unity(8, 1);
    assert!((w.powi(8) - BigComplex::from_i64(1)).abs_f64() < 1e-70);
}

#[test]
fn char_poly_and_inverse() {
    let m = Matrix::from_rows(vec![
        vec![qi(-2), qi(-1), qi(1)],
        vec![qi(4), qi(1), qi(0)],
        vec![qi(1), qi(0), qi(0)],
    ])
    .unwrap();
    // t^3 + t^2 + t + 1: eigenvalues i, -1, -i
    assert_eq!(m.char_poly().unwrap(), vec![qi(1), qi(1), qi(1), qi(1)]);
    let inv = m.inverse().unwrap();
    assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(3));
    assert_eq!(m.det().unwrap(), qi(-1));
    assert_eq!(m.pow(4).unwrap(), Matrix::identity(3));
}

#[test]
fn rational_roots_with_multiplicity() {
    let roots = vec![q(-1, 4), q(-1, 4), q(1, 2), qi(0), q(3, 8)];
    let p = Poly::from_roots(&roots);
    let mut found = p.split_rational().unwrap();
    let mut expect = roots.clone();
    expect.sort();
    found.sort();
    assert_eq!(found, expect);
    let irreducible = Poly::new(vec![qi(-2), qi(0), qi(1)]);
    assert!(irreducible.split_rational().is_err());
}

#[test]
fn taylor_shift_is_translation() {
    let p = Poly::new(vec![qi(3), q(-1, 2), qi(0), qi(5)]);
    let a = q(2, 7);
    let s = p.taylor_shift(&a);
    for x in [qi(0), q(1, 3), qi(-4)] {
        assert_eq!(s.eval(&x), p.eval(&(x.clone() + a.clone())));
    }
}

#[test]
fn cyclotomic_polys() {
    let phi12: Vec<BigInt> = cyclotomic_poly(12);
    let expect: Vec<BigInt> = [1, 0, -1, 0, 1].iter().map(|&c| BigInt::from(c)).collect();
    assert_eq!(phi12, expect);
    let sqrt3 = CycInt::zeta(12, 1) + CycInt::zeta(12, -1);
    assert_eq!(sqrt3.clone() * sqrt3, CycInt::integer(12, 3));
    assert_eq!(CycInt::zeta(12, 4) * CycInt::zeta(12, 8), CycInt::one(12));
    assert!(CycInt::zero(12) == CycInt::zeta(12, 0) + CycInt::zeta(12, 6));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn gamma_recurrence(re in -6.0f64..8.0, im in -5.0f64..5.0) {
        prop_assume!(im.abs() > 1e-3 || (re - re.round()).abs() > 1e-3);
        let z = BigComplex::new(re, im);
        let g = gamma(&z).unwrap();
        let g1 = gamma(&(z.clone() + BigComplex::from_i64(1))).unwrap();
        let rel = (g1.clone() - z * g).abs_f64() / g1.abs_f64();
        prop_assert!(rel < 1e-60);
    }

    #[test]
    fn gamma_reflection(re in 0.01f64..0.99, im in -3.0f64..3.0) {
        let z = BigComplex::new(re, im);
        let one = BigComplex::from_i64(1);
        let lhs = gamma(&z).unwrap() * gamma(&(one - z.clone())).unwrap();
        let rhs = BigComplex::pi() / (BigComplex::pi() * z).sin();
        prop_assert!((lhs.clone() - rhs).abs_f64() / lhs.abs_f64() < 1e-60);
    }

    #[test]
    fn pochhammer_ratio(n in 1i64..40, d in 1i64..12, k in 0usize..30) {
        let a = q(n, d);
        let p: Rational = pochhammer(&a, k);
        let g = gamma_rational(&(a.clone() + qi(k as i64))).unwrap() / gamma_rational(&a).unwrap();
        let pc = Complex::from_rational(&p);
        prop_assert!((g - pc.clone()).abs_f64() <= 1e-60 * pc.abs_f64().max(1.0));
    }

    #[test]
    fn char_poly_matches_det(entries in proptest::collection::vec(-5i64..5, 9), t in -4i64..4) {
        let m = Matrix::from_rows(entries.chunks(3).map(|r| r.iter().map(|&x| qi(x)).collect()).collect()).unwrap();
        let cp = Poly::new(m.char_poly().unwrap());
        let shifted = Matrix::<Rational>::identity(3).scale(&qi(t)).sub(&m).unwrap();
        prop_assert_eq!(cp.eval(&qi(t)), shifted.det_by_expansion());
    }
}

trait Det3 {
    fn det_by_expansion(&self) -> Rational;
}

impl Det3 for Matrix<Rational> {
    fn det_by_expansion(&self) -> Rational {
        let a = |i, j| self[(i, j)].clone();
        a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
            + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
    }
}

#[test]
fn scalar_generic_f64_and_rational_agree() {
    fn horner<T: Scalar>(c: &[i64], x: T) -> T {
        c.iter().rev().fold(T::zero(), |acc, &k| acc * x.clone() + T::from_i64(k))
    }
    let exact: Rational = horner(&[1, -3, 2], q(1, 3));
    let float: f64 = horner(&[1, -3, 2], 1.0 / 3.0);
    assert!((float - exact.magnitude()).abs() < 1e-15);
}
