use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

use ncs4_core::json::{algebra_from_json, algebra_to_json, local_from_json, local_to_json};
use ncs4_core::{
    parse_algebra, parse_local, tau, tau_delta_loc, AlgebraElement, CentralFactor, Derivation, DerivationBasis,
    GaussianRational, LocalElement, MultiIndex, Perturbation, QScalar,
};

fn coefficient() -> impl Strategy<Value = QScalar> {
    (-6i64..=6, 1i64..=5, -3i64..=3, 1i64..=3, -2i64..=2).prop_map(|(a, b, c, d, n)| {
        let g = GaussianRational::new(BigRational::new(a.into(), b.into()), BigRational::new(c.into(), d.into()));
        QScalar::monomial(g, n)
    })
}

fn element(max_degree: u32) -> impl Strategy<Value = AlgebraElement> {
    let basis = MultiIndex::up_to_degree(max_degree);
    let n = basis.len();
    prop::collection::vec((0..n, coefficient()), 0..4).prop_map(move |terms| {
        let mut out = AlgebraElement::default();
        for (i, c) in terms {
            out.add_term(basis[i], &c);
        }
        out
    })
}

fn denominator() -> impl Strategy<Value = LocalElement> {
    (0i32..=2, 0i32..=2, 0i32..=2, 0i32..=2).prop_map(|(a, b, c, e)| {
        [
            (CentralFactor::AbsZ2, a),
            (CentralFactor::AbsW2, b),
            (CentralFactor::OneMinusT2, c),
            (CentralFactor::OnePlusT2, e),
        ]
        .iter()
        .fold(LocalElement::one(), |acc, (f, n)| acc.mul(&LocalElement::factor_pow(*f, -n)))
    })
}

fn derivation() -> impl Strategy<Value = Derivation> {
    prop_oneof![
        Just(DerivationBasis::D4),
        (0u32..=3).prop_map(DerivationBasis::D1),
        (0u32..=3).prop_map(DerivationBasis::D2),
        (0u32..=3).prop_map(DerivationBasis::D3),
    ]
    .prop_map(Derivation::basis)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplication_is_associative(a in element(2), b in element(2), c in element(2)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn star_reverses_products(a in element(3), b in element(3)) {
        prop_assert_eq!((&a * &b).star(), &b.star() * &a.star());
        prop_assert_eq!(a.star().star(), a);
    }

    #[test]
    fn derivations_satisfy_leibniz(d in derivation(), a in element(2), b in element(2)) {
        let lhs = d.apply(&(&a * &b));
        let rhs = &(&d.apply(&a) * &b) + &(&a * &d.apply(&b));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivations_are_real(d in derivation(), a in element(3)) {
        prop_assert_eq!(d.apply(&a.star()), d.apply(&a).star());
    }

    #[test]
    fn trace_kills_commutators(a in element(3), b in element(3)) {
        prop_assert!(tau(&a.commutator(&b)).is_zero());
    }

    #[test]
    fn trace_is_real(a in element(4)) {
        prop_assert_eq!(tau(&a.star()), tau(&a).conj());
    }

    #[test]
    fn trace_of_positive_elements_is_positive(a in element(2)) {
        let v = tau(&(&a.star() * &a)).eval(Complex64::from_polar(1.0, 0.7));
        prop_assert!(v.re >= -1e-9 && v.im.abs() < 1e-9, "{}", v);
    }

    #[test]
    fn localized_trace_is_linear(x in element(3), y in element(3), d in denominator()) {
        let id = Perturbation::identity();
        let cz = |e: AlgebraElement| {
            let mut central = AlgebraElement::default();
            for (idx, c) in e.terms().filter(|(idx, _)| idx.is_central()) {
                central.add_term(*idx, c);
            }
            LocalElement::from_algebra(central).mul(&d)
        };
        let (a, b) = (cz(x), cz(y));
        let sum = tau_delta_loc(&(&a + &b), &id);
        let parts = (tau_delta_loc(&a, &id), tau_delta_loc(&b, &id));
        if let (Ok(s), (Ok(p), Ok(q))) = (sum, parts) {
            prop_assert_eq!(s, p.add(&q));
        }
    }

    #[test]
    fn display_parses_back(a in element(3)) {
        prop_assert_eq!(parse_algebra(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn localized_display_parses_back(a in element(2), d in denominator()) {
        let x = LocalElement::from_algebra(a).mul(&d);
        prop_assert_eq!(parse_local(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn json_round_trip(a in element(3), d in denominator()) {
        prop_assert_eq!(algebra_from_json(&algebra_to_json(&a)).unwrap(), a.clone());
        let x = LocalElement::from_algebra(a).mul(&d);
        prop_assert_eq!(local_from_json(&local_to_json(&x)).unwrap(), x);
    }

    #[test]
    fn division_undoes_central_multiplication(a in element(3), i in 0usize..4) {
        let f = CentralFactor::ALL[i];
        prop_assert_eq!((&a * &f.element()).try_divide_central(f).unwrap(), a);
    }
}
