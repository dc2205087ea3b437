//! Trace values against independent Beta-integral formulas.
//!
//! Under `u = s(1−t²)`, `v = (1−s)(1−t²)` the trace of a central monomial is
//! `2π² ∫₀¹ sʲ(1−s)ˡ ds ∫₋₁¹ (1−t²)^{j+l+1} tᵋ dt`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use ncs4_core::{
    euler_characteristic, parse_algebra, parse_local, quadrature_oracle, tau, tau_delta, tau_delta_loc,
    AlgebraElement, MultiIndex, Perturbation, TraceError, TraceValue,
};

fn fact(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn beta(j: u32, l: u32) -> BigRational {
    BigRational::new(fact(j) * fact(l), fact(j + l + 1))
}

/// `∫₋₁¹ (1−t²)ⁿ dt = 2^{2n+1} (n!)² / (2n+1)!`
fn wallis(n: u32) -> BigRational {
    BigRational::new(BigInt::from(2).pow(2 * n + 1) * fact(n) * fact(n), fact(2 * n + 1))
}

fn expected(j: u32, l: u32) -> BigRational {
    BigRational::from_integer(2.into()) * beta(j, l) * wallis(j + l + 1)
}

fn central(j: u32, l: u32, eps: u8) -> AlgebraElement {
    AlgebraElement::basis(MultiIndex::new(j, j, l, l, eps))
}

#[test]
fn central_monomials_match_beta_integrals() {
    for j in 0..=5 {
        for l in 0..=5 - j {
            let got = tau(&central(j, l, 0)).as_rational_pi2().unwrap();
            assert_eq!(got, expected(j, l), "j={} l={}", j, l);
            assert!(tau(&central(j, l, 1)).is_zero());
        }
    }
}

#[test]
fn volume_and_generators() {
    assert_eq!(tau(&AlgebraElement::one()).to_string(), "8/3 pi^2");
    for g in ["Z", "Zs", "W", "Ws", "T", "Z W", "Z Ws T"] {
        assert!(tau(&parse_algebra(g).unwrap()).is_zero(), "{}", g);
    }
}

#[test]
fn sphere_relation_is_consistent() {
    // τ(|Z|²) + τ(|W|²) + τ(T²) = τ(1)
    let parts = ["Z Zs", "W Ws", "T^2"].map(|s| tau(&parse_algebra(s).unwrap()));
    let sum = parts.iter().fold(TraceValue::pi2(Default::default()), |acc, v| acc.add(v));
    assert_eq!(sum, tau(&AlgebraElement::one()));
    assert_eq!(parts[0], parts[1]);
}

#[test]
fn localized_values() {
    let id = Perturbation::identity();
    let rat = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let cases = [
        ("(1-T^2)^-1", rat(4, 1)),
        ("W Ws / (1-T^2)", rat(4, 3)),
        ("Z Zs W Ws / (1-T^2)^2", rat(4, 9)),
        ("Z Zs / (Z Zs + W Ws)", rat(4, 3)),
    ];
    for (src, want) in cases {
        let got = tau_delta_loc(&parse_local(src).unwrap(), &id).unwrap();
        assert_eq!(got.as_rational_pi2(), Some(want), "{}", src);
    }
}

#[test]
fn arctangent_terms_carry_pi_cubed() {
    // ∫₋₁¹ (1−t²)/(1+t²) dt = π − 2
    let got = tau_delta_loc(&parse_local("(1+T^2)^-1").unwrap(), &Perturbation::identity()).unwrap();
    assert_eq!(got.coeff.as_rational(), Some(BigRational::from_integer((-4).into())));
    assert_eq!(got.pi_cubed.as_rational(), Some(BigRational::from_integer(2.into())));
    let numeric = quadrature_oracle(&parse_local("(1+T^2)^-1").unwrap(), &Perturbation::identity(), 1e-9).unwrap();
    assert!((got.to_f64().unwrap() - numeric).abs() < 1e-8);
}

#[test]
fn divergent_integrals_are_reported() {
    for src in ["(1-T^2)^-2", "(Z Zs)^-1", "(W Ws)^-1 (1-T^2)^-1"] {
        let err = tau_delta_loc(&parse_local(src).unwrap(), &Perturbation::identity()).unwrap_err();
        assert!(matches!(err, TraceError::DivergentIntegral(_)), "{}: {}", src, err);
    }
}

#[test]
fn non_central_input_is_rejected() {
    let err = tau_delta_loc(&parse_local("Z / (1-T^2)").unwrap(), &Perturbation::identity());
    assert!(matches!(err, Err(TraceError::NotCentral)));
}

#[test]
fn perturbed_trace_weights_by_delta_squared() {
    // τ_δ(1) with δ = 1+T²: 2π² ∫ (1−t²)(1+t²)² dt
    let got = tau_delta(&AlgebraElement::one(), &Perturbation::one_plus_t2_pow(1)).unwrap();
    let poly = [(0, 1), (2, 1), (4, -1), (6, -1)]; // (1−t²)(1+t²)² = 1 + t² − t⁴ − t⁶
    let integral = poly.iter().fold(BigRational::zero(), |acc, (k, c)| {
        acc + BigRational::new((2 * c).into(), (k + 1).into())
    });
    assert_eq!(got.as_rational_pi2(), Some(integral * BigRational::from_integer(2.into())));
}

#[test]
fn quadrature_agrees_with_exact_values() {
    let d = Perturbation::one_plus_t2_pow(2);
    for src in ["1", "Z Zs", "W Ws T^2", "Z Zs W Ws"] {
        let a = parse_local(src).unwrap();
        let exact = tau_delta_loc(&a, &d).unwrap().to_f64().unwrap();
        let numeric = quadrature_oracle(&a, &d, 1e-9).unwrap();
        assert!((exact - numeric).abs() < 1e-8, "{}: {} vs {}", src, exact, numeric);
    }
}

#[test]
fn euler_characteristic_is_two() {
    for n in 0..=3 {
        let e = euler_characteristic(&Perturbation::one_plus_t2_pow(n)).unwrap();
        assert_eq!(e.chi, BigRational::from_integer(2.into()));
        assert!(e.alpha_at_1.is_zero() && e.alpha_at_minus1.is_zero());
    }
}

#[test]
fn nonvanishing_boundary_values_are_rejected() {
    let alpha = parse_local("T").unwrap();
    let err = euler_characteristic(&Perturbation::formal(alpha).unwrap()).unwrap_err();
    assert!(matches!(err, TraceError::AlphaBoundaryNonzero { .. }), "{}", err);
}
