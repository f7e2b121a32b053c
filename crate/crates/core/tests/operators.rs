use dwork_core::data::{constants, rationals};
use dwork_core::frobenius::{eval_rgs, frobenius_basis, hyp2f1, indicial_roots, residual, DEFAULT_MARGIN};
use dwork_core::numeric::{pochhammer, q, qi, BigComplex};
use dwork_core::pfode::{
    admissible_count, pf_operator, reduce, reduced_order_law, sector_operator, shift_relation_check,
    symmetric_power, Point, ThetaOperator, Variable,
};
use dwork_core::sectors::{all_vectors, sector_grading, sector_orbits, spectrum, SectorClass};
use dwork_core::series::LogSeries;
use dwork_core::{Error, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

#[test]
fn grading_examples() {
    let s = sector_grading(&[0, 0, 0], 2).unwrap();
    assert_eq!((s.beta.clone(), s.alpha.clone(), s.hodge_p, s.class), (qi(0), qi(0), 2, SectorClass::Relevant));
    let s = sector_grading(&[1, 1, 1], 2).unwrap();
    assert_eq!((s.beta.clone(), s.alpha.clone(), s.hodge_p, s.class), (qi(1), qi(0), 1, SectorClass::Marginal));
    // p = n + alpha - beta = 3 - 1/4 - 3/4
    let s = sector_grading(&[2, 1, 0, 0], 3).unwrap();
    assert_eq!((s.beta.clone(), s.alpha.clone(), s.hodge_p), (q(3, 4), q(-1, 4), 2));
    assert!(matches!(sector_grading(&[1, 0], 2), Err(Error::DimensionError(_))));
}

#[test]
fn spectra_match_reference_tables() {
    for row in &constants().spectrum {
        let sp = spectrum(row.n).unwrap();
        let betas = rationals(&row.beta).unwrap();
        assert_eq!(sp.counts.len(), betas.len());
        for (b, c) in betas.iter().zip(&row.count) {
            assert_eq!(sp.get(b), *c, "n={} beta={b}", row.n);
        }
        assert_eq!(sp.total(), (row.n as u64).pow(row.n as u32 + 1));
    }
}

#[test]
fn orbit_examples() {
    let reps = |n, b: Rational| -> Vec<Vec<u32>> { sector_orbits(n, &b).unwrap().into_iter().map(|s| s.m).collect() };
    assert_eq!(reps(2, qi(1)), vec![vec![0, 0, 0], vec![1, 0, 0], vec![1, 1, 0], vec![1, 1, 1]]);
    assert_eq!(
        reps(3, q(3, 4)),
        vec![vec![0, 0, 0, 0], vec![1, 0, 0, 0], vec![1, 1, 0, 0], vec![1, 1, 1, 0], vec![2, 0, 0, 0], vec![2, 1, 0, 0]]
    );
    assert_eq!(reps(2, qi(0)), vec![vec![0, 0, 0]]);
}

proptest! {
    #[test]
    fn spectrum_palindromic(n in 2usize..6) {
        let sp = spectrum(n).unwrap();
        for (b, c) in &sp.counts {
            prop_assert_eq!(sp.get(&(qi(n as i64 - 1) - b)), *c);
        }
        prop_assert_eq!(sp.total(), (n as u64).pow(n as u32 + 1));
    }

    #[test]
    fn grading_permutation_invariant(m in proptest::collection::vec(0u32..7, 4), rot in 0usize..4) {
        let mut p = m.clone();
        p.rotate_left(rot);
        p.swap(0, 3);
        let a = sector_grading(&m, 3).unwrap();
        let b = sector_grading(&p, 3).unwrap();
        prop_assert_eq!((a.beta.clone(), a.alpha.clone(), a.hodge_p), (b.beta, b.alpha.clone(), b.hodge_p));
        prop_assert!(a.alpha <= qi(0) && a.alpha > qi(-1));
        prop_assert!((a.beta - a.alpha).is_integer());
    }

    #[test]
    fn pf_operator_permutation_invariant(m in proptest::collection::vec(0u32..5, 5)) {
        let mut p = m.clone();
        p.reverse();
        prop_assert!(pf_operator(4, &m).unwrap().same_parameters(&pf_operator(4, &p).unwrap()));
    }
}

#[test]
fn pf_operator_examples() {
    let op = pf_operator(2, &[0, 0, 0]).unwrap();
    assert_eq!(op.lower, vec![qi(-2), qi(-1), qi(0)]);
    assert_eq!(op.upper, vec![qi(1), qi(1), qi(1)]);
    assert_eq!((op.scale.clone(), op.power), (q(1, 27), 3));
    let op = pf_operator(3, &[1, 1, 0, 0]).unwrap();
    assert_eq!(op.lower, vec![qi(-3), qi(-2), qi(-1), qi(0)]);
    assert_eq!(op.upper, vec![qi(1), qi(1), qi(2), qi(2)]);
    assert!(matches!(pf_operator(3, &[0, 0]), Err(Error::DimensionError(_))));
}

#[test]
fn reduced_operators_match_tables() {
    for row in &constants().operator_row {
        let (red, cert) = reduce(&pf_operator(row.n, &row.m).unwrap());
        assert_eq!(red.lower, rationals(&row.lower).unwrap(), "m = {:?}", row.m);
        assert_eq!(red.upper, rationals(&row.upper).unwrap(), "m = {:?}", row.m);
        assert_eq!(red.variable, Variable::A);
        assert_eq!(cert.reduced_order, row.lower.len());
    }
}

#[test]
fn base_change_examples() {
    let quartic = sector_operator(3, &[0, 0, 0, 0]).unwrap();
    assert_eq!(quartic.lower, vec![q(-1, 2), q(-1, 4), qi(0)]);
    assert_eq!(quartic.upper, vec![q(1, 4); 3]);
    assert!(quartic.is_canonical());
    assert_eq!(quartic.to_string(), "(θ-1/2)(θ-1/4)θ - b(θ+1/4)^3");
    let cubic = sector_operator(2, &[0, 0, 0]).unwrap();
    assert_eq!(cubic.lower, vec![q(-1, 3), qi(0)]);
    assert_eq!(cubic.upper, vec![q(1, 3); 2]);
    assert_eq!(cubic.base_change_to_b(), cubic);
}

#[test]
fn quintic_after_rescaling() {
    let red = sector_operator(4, &[0; 5]).unwrap();
    let quintic = red.invert(Variable::Z).twist(&q(-1, 5));
    assert_eq!(quintic.lower, vec![qi(0); 4]);
    assert_eq!(quintic.upper, vec![q(1, 5), q(2, 5), q(3, 5), q(4, 5)]);
    assert!(quintic.is_canonical());
}

#[test]
fn reduced_order_law_brute_force() {
    for n in 2..=4usize {
        for m in all_vectors(n + 1, n as u32) {
            let (_, cert) = reduce(&pf_operator(n, &m).unwrap());
            let law = reduced_order_law(n, &m);
            assert_eq!(cert.reduced_order, law, "n={n} m={m:?}");
            assert_eq!(admissible_count(n, &m), law, "n={n} m={m:?}");
        }
    }
}

#[test]
fn reduced_operator_annihilates_period_branches() {
    // a^delta G(...) with G from the period expansion, for each admissible delta
    for (n, m) in [(2usize, vec![0u32, 0, 0]), (2, vec![1, 0, 0]), (3, vec![0, 0, 0, 0]), (3, vec![1, 1, 0, 0])] {
        let (red, _) = reduce(&pf_operator(n, &m).unwrap());
        let big_n = n as i64 + 1;
        for delta in dwork_core::sectors::admissible_deltas(n, &m) {
            // coefficient of a^(delta + N k) is prod Gamma((delta+N k+m_i+1)/N) / (delta + N k)!
            // ratio form: c_{k+1}/c_k = prod ((delta+m_i+1)/N + k) / prod_{j=1..N} (delta+N k+j)
            let trunc = 45 * big_n as usize;
            let mut coeffs = vec![Rational::zero(); trunc];
            let mut c = Rational::one();
            let mut k = 0i64;
            while ((big_n * k) as usize) < trunc {
                coeffs[(big_n * k) as usize] = c.clone();
                let mut num = Rational::one();
                for mi in &m {
                    num *= q(delta as i64 + *mi as i64 + 1, big_n) + qi(k);
                }
                let den: Rational = (1..=big_n).map(|j| qi(delta as i64 + big_n * k + j)).product();
                c = c * num / den;
                k += 1;
            }
            let s = LogSeries::from_coeffs(qi(delta as i64), coeffs);
            let img = red.apply(&s).truncate(trunc - big_n as usize);
            assert!(img.is_zero(), "n={n} m={m:?} delta={delta}");
        }
    }
}

#[test]
fn shift_relation_cases() {
    assert!(shift_relation_check(2, &[0, 0, 0], 40).unwrap());
    assert!(shift_relation_check(2, &[1, 0, 0], 40).unwrap());
    assert!(shift_relation_check(3, &[0, 0, 0, 0], 40).unwrap());
    assert!(shift_relation_check(3, &[1, 0, 0, 0], 40).unwrap());
    assert!(matches!(shift_relation_check(2, &[0, 0, 0], 0), Err(Error::TruncationError(_))));
}

fn triangular() -> ThetaOperator {
    ThetaOperator::b_form(vec![qi(0), q(-1, 4)], vec![q(1, 8), q(1, 8)]).unwrap()
}

#[test]
fn symmetric_square_of_triangular() {
    let sym = symmetric_power(&triangular().twist(&q(1, 8)), 2).unwrap();
    let target = ThetaOperator::b_form(vec![q(-1, 4), q(-1, 2), q(-3, 4)], vec![qi(0); 3]).unwrap();
    assert!(sym.same_parameters(&target), "{sym}");
    let quartic = sector_operator(3, &[0, 0, 0, 0]).unwrap().twist(&q(1, 4));
    assert!(quartic.same_parameters(&target));
    assert_eq!(symmetric_power(&triangular(), 1).unwrap(), triangular());
    let first = ThetaOperator::b_form(vec![qi(0)], vec![q(1, 3)]).unwrap();
    let s = symmetric_power(&first, 2).unwrap();
    assert_eq!((s.lower.clone(), s.upper.clone()), (vec![qi(0)], vec![q(2, 3)]));
    assert!(matches!(symmetric_power(&quartic, 2), Err(Error::OrderError(_))));
}

#[test]
fn symmetric_square_annihilates_products() {
    let tri = triangular();
    let sym = symmetric_power(&tri, 2).unwrap();
    let basis = frobenius_basis::<Rational>(&tri, Point::Zero, 50).unwrap();
    for i in 0..2 {
        for j in i..2 {
            let p = basis.solutions[i].mul(&basis.solutions[j]);
            assert!(sym.apply(&p).truncate(42).is_zero());
        }
    }
}

#[test]
fn indicial_root_examples() {
    let quintic = ThetaOperator::b_form(vec![qi(0); 4], (1..5).map(|k| q(k, 5)).collect()).unwrap();
    assert_eq!(indicial_roots(&quintic, Point::Zero).unwrap(), vec![qi(0); 4]);
    let quartic = sector_operator(3, &[0, 0, 0, 0]).unwrap();
    assert_eq!(indicial_roots(&quartic, Point::Zero).unwrap(), vec![qi(0), q(1, 4), q(1, 2)]);
    assert_eq!(indicial_roots(&quartic, Point::One).unwrap(), vec![qi(0), q(1, 2), qi(1)]);
    let cubic = sector_operator(2, &[0, 0, 0]).unwrap();
    assert_eq!(indicial_roots(&cubic, Point::Zero).unwrap(), vec![qi(0), q(1, 3)]);
    assert_eq!(indicial_roots(&cubic, Point::Infinity).unwrap(), vec![q(1, 3), q(1, 3)]);
}

#[test]
fn fuchs_relation_for_sector_operators() {
    for n in 2..=3usize {
        for s in sector_orbits(n, &qi(1)).unwrap() {
            let op = sector_operator(n, &s.m).unwrap();
            let k = op.order() as i64;
            if k == 0 {
                continue;
            }
            let total: Rational = [Point::Zero, Point::One, Point::Infinity]
                .iter()
                .flat_map(|&p| indicial_roots(&op, p).unwrap())
                .sum();
            assert_eq!(total, q(k * (k - 1), 2), "m = {:?}", s.m);
        }
    }
}

#[test]
fn quintic_fundamental_period() {
    let quintic = ThetaOperator::b_form(vec![qi(0); 4], (1..5).map(|k| q(k, 5)).collect()).unwrap();
    let basis = frobenius_basis::<Rational>(&quintic, Point::Zero, 12).unwrap();
    assert_eq!(basis.solutions.len(), 4);
    let i0 = &basis.solutions[0];
    assert_eq!(i0.log_degree(), 0);
    for d in 0..12u64 {
        // in w = 5^5 z the coefficient is (5d)!/(d!)^5 / 5^(5d)
        let c = Rational::new(factorial(5 * d), factorial(d).pow(5u32) * BigInt::from(5).pow(5 * d as u32));
        assert_eq!(i0.coeff(0, d as usize), c);
    }
    for (j, s) in basis.solutions.iter().enumerate() {
        assert_eq!(s.log_degree(), j);
        assert!(residual(&quintic.local_operator(Point::Zero).unwrap(), s) == 0.0);
    }
}

#[test]
fn cubic_basis_is_gauss_series() {
    let cubic = sector_operator(2, &[0, 0, 0]).unwrap();
    let basis = frobenius_basis::<Rational>(&cubic, Point::Zero, 30).unwrap();
    let (u3, u4) = (&basis.solutions[0], &basis.solutions[1]);
    assert_eq!((u3.exponent.clone(), u4.exponent.clone()), (qi(0), q(1, 3)));
    for k in 0..30usize {
        // theta (theta - 1/3) forces the lower parameter 2/3
        let a = pochhammer(&q(1, 3), k) * pochhammer(&q(1, 3), k) / (pochhammer(&q(2, 3), k) * pochhammer(&qi(1), k));
        let b = pochhammer(&q(2, 3), k) * pochhammer(&q(2, 3), k) / (pochhammer(&q(4, 3), k) * pochhammer(&qi(1), k));
        assert_eq!(u3.coeff(0, k), a);
        assert_eq!(u4.coeff(0, k), b);
    }
}

#[test]
fn first_order_cubic_sectors_are_binomials() {
    for (m, e) in [([1u32, 0, 0], q(-1, 3)), ([1, 1, 0], q(-2, 3))] {
        let op = sector_operator(2, &m).unwrap();
        let s = &frobenius_basis::<Rational>(&op, Point::Zero, 25).unwrap().solutions[0];
        // (1-b)^e = sum (-e)_k / k! b^k
        for k in 0..25usize {
            assert_eq!(s.coeff(0, k), pochhammer(&-e.clone(), k) / pochhammer(&qi(1), k));
        }
    }
}

#[test]
fn bases_are_annihilated_exactly() {
    for n in 2..=3usize {
        for s in sector_orbits(n, &qi(1)).unwrap() {
            let op = sector_operator(n, &s.m).unwrap();
            if op.order() == 0 {
                continue;
            }
            for point in [Point::Zero, Point::One, Point::Infinity] {
                let lo = op.local_operator(point).unwrap();
                let basis = frobenius_basis::<Rational>(&op, point, 30).unwrap();
                assert_eq!(basis.solutions.len(), op.order());
                for sol in &basis.solutions {
                    assert_eq!(residual(&lo, sol), 0.0, "m={:?} at {point}", s.m);
                }
            }
        }
    }
}

#[test]
fn rgs_trivial_values() {
    let z = BigComplex::from_rational(&q(1, 3));
    let v = eval_rgs(&[q(2, 7)], &[q(2, 7)], &z, None, DEFAULT_MARGIN).unwrap();
    assert!((v.value - BigComplex::from_rational(&q(3, 2))).abs_f64() < 1e-70);
    let v = eval_rgs(&[q(1, 3), q(1, 2)], &[qi(1), q(5, 2)], &BigComplex::zero(), None, DEFAULT_MARGIN).unwrap();
    assert_eq!(v.value, BigComplex::from_i64(1));
    assert!(matches!(
        eval_rgs(&[q(1, 2)], &[qi(1)], &BigComplex::new(0.96, 0.0), None, DEFAULT_MARGIN),
        Err(Error::ConvergenceError(_))
    ));
    assert!(matches!(
        eval_rgs(&[q(1, 2)], &[qi(-3)], &z, Some(10), DEFAULT_MARGIN),
        Err(Error::ParameterPole(_))
    ));
}

#[test]
fn gauss_value_two_ways() {
    let cubic = sector_operator(2, &[0, 0, 0]).unwrap();
    let b = BigComplex::from_rational(&q(1, 2));
    let direct = hyp2f1(&q(1, 3), &q(1, 3), &q(2, 3), &b).unwrap();
    let basis = frobenius_basis::<BigComplex>(&cubic, Point::Zero, 260).unwrap();
    let via = basis.solutions[0].eval(&b).unwrap();
    assert!((direct - via).abs_f64() < 1e-60);
}
