//! Trace functionals `τ`, `τ_δ`, `τ_{δ,loc}`, the Euler characteristic and a
//! numerical quadrature oracle.
//!
//! Under `φ₀` a central element becomes a rational function of
//! `s = cos²φ` and `t = sinψ`, integrated against `4π² · ½ ds (1−t²) dt`
//! over `[0,1] × [−1,1]`.

use std::cell::Cell;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::AlgebraElement;
use crate::chart::ChartPoint;
use crate::connection::solve_connection;
use crate::curvature::{gcb_integrand, CurvatureError, CurvatureTensor};
use crate::geometry::{GeometryError, Metric, Perturbation};
use crate::localization::LocalElement;
use crate::poly2::{LinearFactor, Poly2};
use crate::scalar::{rat, ratio, rational_to_f64, QScalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TraceError {
    #[error("element is not central")]
    NotCentral,
    #[error("integral diverges: denominator keeps {0}")]
    DivergentIntegral(String),
    #[error("alpha does not vanish at the boundary: alpha(1) = {at_1}, alpha(-1) = {at_minus1}")]
    AlphaBoundaryNonzero { at_1: String, at_minus1: String },
    #[error("alpha is singular or not a function of T alone at t = {0}")]
    AlphaSingular(i64),
    #[error("quadrature did not converge (error estimate {0:e})")]
    ConvergenceFailure(f64),
    #[error("delta is not a polynomial in S4_theta")]
    NonPolynomialDelta,
    #[error("integrand keeps a Delta^{0} factor after weighting by delta^2")]
    UnresolvedDelta(i32),
    #[error("coefficients must be real rationals for numerical integration")]
    NotReal,
    #[error("trace route gives {trace_route}, antiderivative gives {antiderivative}")]
    ClosedFormMismatch { trace_route: String, antiderivative: String },
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// `coeff · π² + pi_cubed · π³`.
///
/// Polynomial traces only ever fill `coeff`; the `π³` part appears for
/// localized elements with `(𝟙+T²)` denominators.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TraceValue {
    pub coeff: QScalar,
    pub pi_cubed: QScalar,
}

impl TraceValue {
    pub fn pi2(coeff: QScalar) -> Self {
        Self { coeff, pi_cubed: QScalar::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero() && self.pi_cubed.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { coeff: &self.coeff + &other.coeff, pi_cubed: &self.pi_cubed + &other.pi_cubed }
    }

    pub fn conj(&self) -> Self {
        Self { coeff: self.coeff.conj(), pi_cubed: self.pi_cubed.conj() }
    }

    /// The `π²` coefficient as a rational, when there is no `π³`, `q` or `i` part.
    pub fn as_rational_pi2(&self) -> Option<BigRational> {
        if self.pi_cubed.is_zero() {
            self.coeff.as_rational()
        } else {
            None
        }
    }

    /// Numeric value when both coefficients are real rationals.
    pub fn to_f64(&self) -> Option<f64> {
        let a = rational_to_f64(&self.coeff.as_rational()?);
        let b = rational_to_f64(&self.pi_cubed.as_rational()?);
        Some(a * PI.powi(2) + b * PI.powi(3))
    }

    pub fn eval(&self, q_value: Complex64) -> Complex64 {
        self.coeff.eval(q_value) * PI.powi(2) + self.pi_cubed.eval(q_value) * PI.powi(3)
    }
}

impl fmt::Display for TraceValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let part = |c: &QScalar, p: u32| {
            if c.len() == 1 && c.as_rational().is_some() {
                format!("{} pi^{}", c, p)
            } else {
                format!("({}) pi^{}", c, p)
            }
        };
        match (self.coeff.is_zero(), self.pi_cubed.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", part(&self.coeff, 2)),
            (true, false) => write!(f, "{}", part(&self.pi_cubed, 3)),
            (false, false) => write!(f, "{} + {}", part(&self.coeff, 2), part(&self.pi_cubed, 3)),
        }
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `τ(e^{(j,j,l,l,0)}) / π²`.
pub fn tau_basis_coefficient(j: u32, l: u32) -> BigRational {
    let n = j + l;
    let beta = BigRational::new(factorial(j) * factorial(l), BigInt::from(2) * factorial(n + 1));
    let wallis = BigRational::new(
        (BigInt::one() << (2 * n + 3)) * factorial(n + 1).pow(2),
        factorial(2 * n + 3),
    );
    rat(4) * beta * wallis
}

/// `τ(a)`; only the central, `T`-free basis elements contribute.
pub fn tau(a: &AlgebraElement) -> TraceValue {
    let mut coeff = QScalar::zero();
    for (idx, c) in a.terms() {
        if idx.j == idx.k && idx.l == idx.m && idx.eps == 0 {
            coeff += &c.scale(&tau_basis_coefficient(idx.j, idx.l));
        }
    }
    TraceValue::pi2(coeff)
}

/// `τ_δ(a) = τ(δaδ)` for a polynomial `δ`.
pub fn tau_delta(a: &AlgebraElement, d: &Perturbation) -> Result<TraceValue, TraceError> {
    let delta = d.delta().as_algebra().ok_or(TraceError::NonPolynomialDelta)?;
    Ok(tau(&(&(delta * a) * delta)))
}

/// `φ₀(x)` for a central localized element, kept as numerator plus
/// multiplicities of the linear factors and of `1+t²` in the denominator.
#[derive(Clone, Debug)]
struct PhiImage {
    num: Poly2,
    linear: BTreeMap<LinearFactor, u32>,
    one_plus_t2: u32,
}

impl PhiImage {
    fn new(x: &LocalElement) -> Result<Self, TraceError> {
        if x.delta_pow() != 0 && !x.is_zero() {
            return Err(TraceError::UnresolvedDelta(x.delta_pow()));
        }
        let parts = x.num().center_decompose().map_err(|_| TraceError::NotCentral)?;
        let one_minus_t2 = LinearFactor::OneMinusT.poly().mul(&LinearFactor::OnePlusT.poly());
        let s = LinearFactor::S.poly();
        let one_minus_s = LinearFactor::OneMinusS.poly();
        let mut num = Poly2::zero();
        for ((j, l, eps), c) in parts {
            let term = s
                .pow(j)
                .mul(&one_minus_s.pow(l))
                .mul(&one_minus_t2.pow(j + l))
                .mul(&Poly2::monomial(0, u32::from(eps), c));
            num = num.add(&term);
        }
        let den = x.den();
        let t_exp = den.a + den.b + den.c;
        let linear = BTreeMap::from([
            (LinearFactor::S, den.a),
            (LinearFactor::OneMinusS, den.b),
            (LinearFactor::OneMinusT, t_exp),
            (LinearFactor::OnePlusT, t_exp),
        ]);
        let mut out = Self { num, linear, one_plus_t2: den.e };
        out.cancel();
        Ok(out)
    }

    fn cancel(&mut self) {
        if self.num.is_zero() {
            self.linear.values_mut().for_each(|e| *e = 0);
            self.one_plus_t2 = 0;
            return;
        }
        for (f, e) in self.linear.iter_mut() {
            while *e > 0 {
                match self.num.div_linear(*f) {
                    Some(q) => {
                        self.num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
    }

    fn mul_linear(&mut self, f: LinearFactor) {
        let e = self.linear.get_mut(&f).expect("all factors tracked");
        if *e > 0 {
            *e -= 1;
        } else {
            self.num = self.num.mul(&f.poly());
        }
    }

    /// `∫₀¹∫₋₁¹ (num / den)(1−t²) dt ds · 2`, exact.
    fn integrate(mut self) -> Result<TraceValue, TraceError> {
        self.mul_linear(LinearFactor::OneMinusT);
        self.mul_linear(LinearFactor::OnePlusT);
        self.cancel();
        let left: Vec<String> = self
            .linear
            .iter()
            .filter(|(_, e)| **e > 0)
            .map(|(f, e)| if *e == 1 { f.name().to_string() } else { format!("({})^{}", f.name(), e) })
            .collect();
        if !left.is_empty() {
            return Err(TraceError::DivergentIntegral(left.join(" ")));
        }
        let mut out = TraceValue::default();
        for (n, c) in self.num.integrate_s() {
            let (r, p) = t_integral(self.one_plus_t2, n);
            out.coeff += &c.scale(&(rat(2) * r));
            out.pi_cubed += &c.scale(&(rat(2) * p));
        }
        Ok(out)
    }

    /// Value at `t = t0 ∈ {±1}`, required to be independent of `s`.
    fn at_boundary(&self, t0: i64) -> Result<QScalar, TraceError> {
        let blocked = match t0 {
            1 => LinearFactor::OneMinusT,
            _ => LinearFactor::OnePlusT,
        };
        let singular = self.linear[&LinearFactor::S] > 0
            || self.linear[&LinearFactor::OneMinusS] > 0
            || self.linear[&blocked] > 0;
        if singular {
            return Err(TraceError::AlphaSingular(t0));
        }
        let value = self.num.at_t(t0).as_constant().ok_or(TraceError::AlphaSingular(t0))?;
        let other = if t0 == 1 { LinearFactor::OnePlusT } else { LinearFactor::OneMinusT };
        let den = BigInt::from(2).pow(self.linear[&other] + self.one_plus_t2);
        Ok(value.scale(&BigRational::new(BigInt::one(), den)))
    }
}

/// `∫₋₁¹ tⁿ (1+t²)^{−k} dt = r + p·π`.
fn t_integral(k: u32, n: u32) -> (BigRational, BigRational) {
    if n % 2 == 1 {
        return (BigRational::zero(), BigRational::zero());
    }
    if k == 0 {
        return (ratio(2, i64::from(n) + 1), BigRational::zero());
    }
    if n == 0 {
        let mut value = (BigRational::zero(), ratio(1, 2));
        for j in 1..k {
            let j = i64::from(j);
            let free = BigRational::new(BigInt::one(), BigInt::from(j) * (BigInt::one() << j));
            let f = ratio(2 * j - 1, 2 * j);
            value = (free + &f * value.0, f * value.1);
        }
        return value;
    }
    let a = t_integral(k - 1, n - 2);
    let b = t_integral(k, n - 2);
    (a.0 - b.0, a.1 - b.1)
}

fn weighted(a: &LocalElement, d: &Perturbation) -> LocalElement {
    d.delta().mul(a).mul(d.delta())
}

/// `τ_{δ,loc}(a) = τ_loc(δaδ)` for central `a`, computed exactly.
pub fn tau_delta_loc(a: &LocalElement, d: &Perturbation) -> Result<TraceValue, TraceError> {
    if !a.is_central() {
        return Err(TraceError::NotCentral);
    }
    PhiImage::new(&weighted(a, d))?.integrate()
}

/// Numerical `τ_{δ,loc}(a)` over the chart angles, for real rational coefficients.
pub fn quadrature_oracle(a: &LocalElement, d: &Perturbation, tolerance: f64) -> Result<f64, TraceError> {
    let b = weighted(a, d);
    if b.delta_pow() != 0 && !b.is_zero() {
        return Err(TraceError::UnresolvedDelta(b.delta_pow()));
    }
    let parts = b.num().center_decompose().map_err(|_| TraceError::NotCentral)?;
    if parts.values().any(|c| c.as_rational().is_none()) {
        return Err(TraceError::NotReal);
    }
    let num = b.num();
    let den = b.den().to_element();
    let one = Complex64::new(1.0, 0.0);
    let scale = 4.0 * PI * PI;
    let target = tolerance / (scale * 10.0);
    let inner_error = Cell::new(0.0f64);
    let integrand = |phi: f64, psi: f64| {
        let p = ChartPoint { xi1: PI, xi2: PI, phi, psi };
        let value = num.classical_eval(&p, one).re / den.classical_eval(&p, one).re
            * psi.cos().powi(3)
            * phi.sin()
            * phi.cos();
        if value.is_finite() {
            value
        } else {
            0.0
        }
    };
    let outer = quadrature::integrate(
        |psi| {
            let inner = quadrature::integrate(|phi| integrand(phi, psi), 0.0, PI / 2.0, target);
            inner_error.set(inner_error.get().max(inner.error_estimate));
            inner.integral
        },
        -PI / 2.0,
        PI / 2.0,
        target,
    );
    let estimate = scale * (outer.error_estimate + PI * inner_error.get());
    if !outer.integral.is_finite() || estimate > tolerance {
        return Err(TraceError::ConvergenceFailure(estimate));
    }
    Ok(scale * outer.integral)
}

/// Result of the Gauss–Chern–Bonnet computation.
#[derive(Clone, Debug)]
pub struct EulerCharacteristic {
    pub chi: BigRational,
    pub alpha_at_1: BigRational,
    pub alpha_at_minus1: BigRational,
    pub integrand: LocalElement,
    pub exact: bool,
}

/// `α(t)` at `t = ±1`.
pub fn alpha_boundary(d: &Perturbation) -> Result<(BigRational, BigRational), TraceError> {
    let image = PhiImage::new(d.alpha())?;
    let real = |v: QScalar, t0| v.as_rational().ok_or(TraceError::AlphaSingular(t0));
    Ok((real(image.at_boundary(1)?, 1)?, real(image.at_boundary(-1)?, -1)?))
}

/// `(3/2)(F(1) − F(−1))` with `F(t) = (α+t) − (α+t)³/3`.
fn antiderivative_chi(at_1: &BigRational, at_minus1: &BigRational) -> BigRational {
    let f = |x: BigRational| &x - x.pow(3) / rat(3);
    ratio(3, 2) * (f(at_1 + rat(1)) - f(at_minus1 - rat(1)))
}

/// `χ = τ_{δ,loc}(R^{abcd}R_abcd − 4Ric_ab Ric^ab + S²) / 32π²`.
///
/// The integrand comes from the Koszul-solved connection; the trace is
/// compared with the antiderivative evaluation.
pub fn euler_characteristic(d: &Perturbation) -> Result<EulerCharacteristic, TraceError> {
    let (alpha_at_1, alpha_at_minus1) = alpha_boundary(d)?;
    if !alpha_at_1.is_zero() || !alpha_at_minus1.is_zero() {
        return Err(TraceError::AlphaBoundaryNonzero {
            at_1: alpha_at_1.to_string(),
            at_minus1: alpha_at_minus1.to_string(),
        });
    }
    let h = Metric::new(d.clone())?;
    let curvature = CurvatureTensor::compute(&solve_connection(&h), &h);
    let integrand = gcb_integrand(&curvature, d)?;
    euler_from_integrand(d, integrand, alpha_at_1, alpha_at_minus1)
}

fn euler_from_integrand(
    d: &Perturbation,
    integrand: LocalElement,
    alpha_at_1: BigRational,
    alpha_at_minus1: BigRational,
) -> Result<EulerCharacteristic, TraceError> {
    let value = tau_delta_loc(&integrand, d)?;
    let closed = antiderivative_chi(&alpha_at_1, &alpha_at_minus1);
    let chi = value.as_rational_pi2().map(|c| c / rat(32));
    if chi.as_ref() != Some(&closed) {
        return Err(TraceError::ClosedFormMismatch {
            trace_route: format!("({}) / 32", value),
            antiderivative: closed.to_string(),
        });
    }
    Ok(EulerCharacteristic { chi: closed, alpha_at_1, alpha_at_minus1, integrand, exact: true })
}

/// `χ` from the closed-form integrand, skipping the curvature computation.
pub fn euler_characteristic_closed_form(d: &Perturbation) -> Result<EulerCharacteristic, TraceError> {
    let (a1, am1) = alpha_boundary(d)?;
    if !a1.is_zero() || !am1.is_zero() {
        return Err(TraceError::AlphaBoundaryNonzero { at_1: a1.to_string(), at_minus1: am1.to_string() });
    }
    euler_from_integrand(d, crate::curvature::closed_form_integrand(d), a1, am1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::MultiIndex;
    use crate::central::CentralFactor;
    use rand::SeedableRng;

    fn pi2(r: BigRational) -> TraceValue {
        TraceValue::pi2(QScalar::from_rational(r))
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau(&AlgebraElement::one()), pi2(ratio(8, 3)));
        assert!(tau(&AlgebraElement::z()).is_zero());
        assert_eq!(tau(&AlgebraElement::abs_z2()), pi2(ratio(16, 15)));
        assert_eq!(tau(&AlgebraElement::abs_w2()), pi2(ratio(16, 15)));
        assert_eq!(tau(&AlgebraElement::t().pow(2)), pi2(ratio(8, 15)));
        let sum = &(&AlgebraElement::abs_z2() + &AlgebraElement::abs_w2()) + &AlgebraElement::t().pow(2);
        assert_eq!(tau(&sum), tau(&AlgebraElement::one()));
    }

    #[test]
    fn tau_scales_q_coefficients() {
        let a = AlgebraElement::abs_z2().scale(&QScalar::q_pow(2));
        assert_eq!(tau(&a).coeff, QScalar::q_pow(2).scale(&ratio(16, 15)));
        assert_eq!(tau(&a.star()), tau(&a).conj());
    }

    #[test]
    fn loc_examples() {
        let id = Perturbation::identity();
        let inv = LocalElement::factor_pow(CentralFactor::OneMinusT2, -1);
        assert_eq!(tau_delta_loc(&inv, &id).unwrap(), pi2(rat(4)));
        let inv2 = LocalElement::factor_pow(CentralFactor::OneMinusT2, -2);
        assert!(matches!(tau_delta_loc(&inv2, &id), Err(TraceError::DivergentIntegral(_))));
        assert_eq!(tau_delta_loc(&LocalElement::one(), &id).unwrap(), pi2(ratio(8, 3)));
        let u_inv = LocalElement::factor_pow(CentralFactor::AbsZ2, -1);
        assert!(matches!(tau_delta_loc(&u_inv, &id), Err(TraceError::DivergentIntegral(_))));
        assert_eq!(tau_delta_loc(&LocalElement::from_algebra(AlgebraElement::z()), &id), Err(TraceError::NotCentral));
    }

    #[test]
    fn loc_agrees_with_tau_on_polynomials() {
        for idx in MultiIndex::up_to_degree(6).into_iter().filter(|i| i.is_central()) {
            let a = AlgebraElement::basis(idx);
            let d = Perturbation::one_plus_t2_pow(1);
            assert_eq!(
                tau_delta_loc(&LocalElement::from_algebra(a.clone()), &d).unwrap(),
                tau_delta(&a, &d).unwrap(),
                "{}",
                idx
            );
        }
    }

    #[test]
    fn one_plus_t2_inverse_brings_pi_cubed() {
        // ∫₋₁¹ (1−t²)/(1+t²) dt = π − 2
        let x = LocalElement::factor_pow(CentralFactor::OnePlusT2, -1);
        let v = tau_delta_loc(&x, &Perturbation::identity()).unwrap();
        assert_eq!(v.coeff, QScalar::from_int(-4));
        assert_eq!(v.pi_cubed, QScalar::from_int(2));
    }

    #[test]
    fn t_integrals() {
        assert_eq!(t_integral(0, 4), (ratio(2, 5), rat(0)));
        assert_eq!(t_integral(1, 0), (rat(0), ratio(1, 2)));
        assert_eq!(t_integral(2, 0), (ratio(1, 2), ratio(1, 4)));
        assert_eq!(t_integral(1, 2), (rat(2), ratio(-1, 2)));
        let (r, p) = t_integral(3, 4);
        let numeric = quadrature::integrate(|t| t.powi(4) / (1.0 + t * t).powi(3), -1.0, 1.0, 1e-14).integral;
        assert!((rational_to_f64(&r) + rational_to_f64(&p) * PI - numeric).abs() < 1e-12);
    }

    #[test]
    fn oracle_examples() {
        let id = Perturbation::identity();
        let v = quadrature_oracle(&LocalElement::one(), &id, 1e-9).unwrap();
        assert!((v - 8.0 * PI * PI / 3.0).abs() < 1e-8);
        let t2 = LocalElement::from_algebra(AlgebraElement::t().pow(2));
        let v = quadrature_oracle(&t2, &id, 1e-9).unwrap();
        assert!((v - 8.0 * PI * PI / 15.0).abs() < 1e-8);
    }

    #[test]
    fn phi0_matches_classical_evaluation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let x = &(&AlgebraElement::abs_z2().pow(2) * &AlgebraElement::t()) - &AlgebraElement::abs_w2().scale_rational(&ratio(3, 7));
        let image = PhiImage::new(&LocalElement::from_algebra(x.clone())).unwrap();
        for _ in 0..20 {
            let p = ChartPoint::random(&mut rng);
            let s = p.phi.cos().powi(2);
            let t = p.psi.sin();
            let lhs: f64 = image
                .num
                .terms()
                .map(|((i, k), c)| c.eval(Complex64::new(1.0, 0.0)).re * s.powi(*i as i32) * t.powi(*k as i32))
                .sum();
            let rhs = x.classical_eval(&p, Complex64::new(1.0, 0.0)).re;
            assert!((lhs - rhs).abs() < 1e-10);
        }
    }

    #[test]
    fn euler_examples() {
        for n in [0, 1, 3] {
            let e = euler_characteristic(&Perturbation::one_plus_t2_pow(n)).unwrap();
            assert_eq!(e.chi, rat(2), "N = {}", n);
        }
        let err = euler_characteristic(&Perturbation::explicit(rat(1), 1, 0).unwrap()).unwrap_err();
        assert_eq!(err, TraceError::AlphaBoundaryNonzero { at_1: "1".into(), at_minus1: "-1".into() });
    }

    #[test]
    fn euler_formal_alpha() {
        let alpha = LocalElement::from_algebra(&AlgebraElement::t().pow(2) - &AlgebraElement::one()).scale_rational(&ratio(1, 2));
        let p = Perturbation::formal(alpha).unwrap();
        assert_eq!(euler_characteristic(&p).unwrap().chi, rat(2));
    }
}
