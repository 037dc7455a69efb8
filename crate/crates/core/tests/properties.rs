use num_bigint::BigInt;
use proptest::prelude::*;
use qcfrac::catalog::{self, Status};
use qcfrac::cfrac::{CFrac, CfElement};
use qcfrac::euler::{euclid_cf, euclid_value, euler_expand, euler_step};
use qcfrac::qseries::{pochhammer_finite, pochhammer_infinite, sample_params, QMonomial, QSeries};
use qcfrac::Rational;

const ORDER: usize = 8;

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=5).prop_map(|(p, q)| Rational::new(p, q))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |r| !r.is_zero())
}

fn series() -> impl Strategy<Value = QSeries> {
    prop::collection::vec(rational(), ORDER + 1).prop_map(QSeries::from_coeffs)
}

fn unit_series() -> impl Strategy<Value = QSeries> {
    (nonzero_rational(), series()).prop_map(|(c, s)| {
        let mut v = s.coeffs().to_vec();
        v[0] = c;
        QSeries::from_coeffs(v)
    })
}

/// Constant term 1, as the Euler step expects.
fn normalized_series() -> impl Strategy<Value = QSeries> {
    series().prop_map(|s| {
        let mut v = s.coeffs().to_vec();
        v[0] = Rational::one();
        QSeries::from_coeffs(v)
    })
}

/// Zero constant term.
fn positive_valuation() -> impl Strategy<Value = QSeries> {
    series().prop_map(|s| s.mul_monomial(&QMonomial::q_power(1)))
}

fn monomial() -> impl Strategy<Value = QMonomial> {
    (nonzero_rational(), 0usize..=3).prop_map(|(c, p)| QMonomial::new(c, p))
}

fn elements(depth: usize) -> impl Strategy<Value = Vec<CfElement>> {
    prop::collection::vec((positive_valuation(), unit_series()), depth)
        .prop_map(|v| v.into_iter().map(|(a, b)| CfElement::new(a, b)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(x in series(), y in series(), z in series()) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&(&x - &y) + &y, x.clone());
        prop_assert_eq!(&x * &QSeries::one(ORDER), x);
    }

    #[test]
    fn inverse_is_an_involution(u in unit_series()) {
        let inv = u.inverse().unwrap();
        prop_assert_eq!(&u * &inv, QSeries::one(ORDER));
        prop_assert_eq!(inv.inverse().unwrap(), u);
    }

    #[test]
    fn non_units_have_no_inverse(x in positive_valuation()) {
        prop_assert!(x.inverse().is_err());
    }

    #[test]
    fn division_helpers_agree(x in series(), c in rational(), m in 1usize..=4) {
        let direct = x.div_one_minus(&c, m).unwrap();
        let factor = QSeries::from_terms(&[QMonomial::one(), QMonomial::new(-&c, m)], ORDER);
        prop_assert_eq!(direct, x.divide(&factor).unwrap());
    }

    #[test]
    fn pochhammer_step(x in monomial(), k in 0usize..6) {
        let lhs = pochhammer_finite(&x, k + 1, 20);
        let rhs = pochhammer_finite(&x, k, 20).mul_binomial(&QMonomial::one(), &x.neg().shifted(k));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn infinite_pochhammer_shift(c in nonzero_rational(), p in 1usize..=3) {
        let x = QMonomial::new(c, p);
        let lhs = pochhammer_infinite(&x, 20).unwrap();
        let rhs = pochhammer_infinite(&x.shifted(1), 20).unwrap().mul_binomial(&QMonomial::one(), &x.neg());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn determinant_identity(els in elements(6), b0 in series()) {
        let cf = CFrac::from_elements(b0, els.clone());
        let conv = cf.convergents(6, ORDER);
        let mut prod = QSeries::one(ORDER);
        for n in 1..=6 {
            prod = &prod * &els[n - 1].a;
            let det = &(conv.numerator(n) * conv.denominator(n - 1)) - &(conv.numerator(n - 1) * conv.denominator(n));
            let expected = if n % 2 == 1 { prod.clone() } else { -&prod };
            prop_assert_eq!(det, expected, "n = {}", n);
        }
    }

    #[test]
    fn equivalence_keeps_approximants(els in elements(6), b0 in unit_series(), head in unit_series(), with_head: bool) {
        let mut cf = CFrac::from_elements(b0, els);
        if with_head {
            cf = cf.with_head(head);
        }
        let eq = cf.equivalence_unit_denominators(6, ORDER).unwrap();
        for n in 0..=6 {
            prop_assert_eq!(cf.approximant(n, ORDER).unwrap(), eq.approximant(n, ORDER).unwrap(), "n = {}", n);
            let e = eq.element(n.max(1), ORDER);
            prop_assert_eq!(e.b, QSeries::one(ORDER));
        }
    }

    #[test]
    fn euclid_round_trip(p in 1u64..2_000_000, q in 1u64..2_000_000) {
        let (p, q) = (BigInt::from(p), BigInt::from(q));
        let quotients = euclid_cf(&p, &q).unwrap();
        prop_assert_eq!(euclid_value(&quotients), Rational::from_bigints(p, q));
        prop_assert!(quotients[1..].iter().all(|b| *b >= BigInt::from(1)));
    }

    #[test]
    fn euler_step_contract(n in normalized_series(), d in normalized_series()) {
        let step = euler_step(&n, &d).unwrap();
        let delta = &n - &d;
        if step.terminated {
            prop_assert!(delta.is_zero());
        } else {
            let m = step.factor.power();
            prop_assert!(step.next_denominator.coeffs()[0].is_one());
            prop_assert_eq!(step.residual_order(), ORDER - m);
            let rebuilt = step.next_denominator.padded(ORDER).mul_monomial(&step.factor);
            prop_assert_eq!(rebuilt, delta);
        }
    }

    #[test]
    fn euler_reconstruction(n in normalized_series(), d in normalized_series()) {
        let Ok(trace) = euler_expand(&n, &d, 4) else { return Ok(()) };
        let k = trace.steps.len();
        let r = trace.residual_order;
        let value = trace.produced().modified_approximant(k, &trace.tail_value(), r).unwrap();
        let target = n.divide(&d).unwrap().truncate(r);
        prop_assert_eq!(value.first_mismatch(&target), None);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    /// Fresh random points keep passing; a wrong identity would fail at almost every point.
    #[test]
    fn catalog_holds_at_random_points(seed in any::<u64>()) {
        let p = &sample_params(seed, 1)[0];
        for id in ["RR_CF", "G_CFRAC_g2", "HEINE_CF", "QBIN", "REC_G2"] {
            let r = catalog::verify(id, p, 20, 6).unwrap();
            prop_assert_eq!(r.status, Status::Pass, "{} at {}", id, p);
        }
    }
}
