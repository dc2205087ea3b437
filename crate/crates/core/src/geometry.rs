//! The free module spanned by `E₁ … E₄`, its ambient embedding in the free
//! module of rank 5, the metric `h^δ = δh` and the projector onto the tangent module.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::AlgebraElement;
use crate::central::CentralFactor;
use crate::derivations::{DeltaRule, Derivation, DerivationBasis};
use crate::localization::LocalElement;
use crate::scalar::{ratio, QScalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("vector is not in the image of the projector")]
    NotInImage,
    #[error("unsupported perturbation: {0}")]
    UnsupportedDelta(String),
    #[error("metric entry h_{0}{0} is not invertible")]
    NotInvertibleMetric(usize),
}

/// `U = Σ_a E_a U^a` with right coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleVec {
    pub coeffs: [LocalElement; 4],
}

impl ModuleVec {
    pub fn zero() -> Self {
        Self { coeffs: std::array::from_fn(|_| LocalElement::zero()) }
    }

    /// `E_a` (1-based).
    pub fn unit(a: usize) -> Self {
        let mut v = Self::zero();
        v.coeffs[a - 1] = LocalElement::one();
        v
    }

    /// `E_a · f` (1-based).
    pub fn basis_times(a: usize, f: LocalElement) -> Self {
        let mut v = Self::zero();
        v.coeffs[a - 1] = f;
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(LocalElement::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { coeffs: std::array::from_fn(|a| &self.coeffs[a] + &other.coeffs[a]) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { coeffs: std::array::from_fn(|a| &self.coeffs[a] - &other.coeffs[a]) }
    }

    /// Right action `U · f`.
    pub fn right_mul(&self, f: &LocalElement) -> Self {
        Self { coeffs: std::array::from_fn(|a| self.coeffs[a].mul(f)) }
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        Self { coeffs: std::array::from_fn(|a| self.coeffs[a].scale_rational(r)) }
    }
}

impl fmt::Display for ModuleVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(a, c)| format!("E{} [{}]", a + 1, c))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// An element of the free module of rank 5 in the basis `e₁ … e₅`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ambient5 {
    pub comps: [LocalElement; 5],
}

impl Ambient5 {
    pub fn zero() -> Self {
        Self { comps: std::array::from_fn(|_| LocalElement::zero()) }
    }

    /// `e_i` (1-based).
    pub fn unit(i: usize) -> Self {
        let mut v = Self::zero();
        v.comps[i - 1] = LocalElement::one();
        v
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { comps: std::array::from_fn(|i| &self.comps[i] + &other.comps[i]) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { comps: std::array::from_fn(|i| &self.comps[i] - &other.comps[i]) }
    }

    pub fn right_mul(&self, f: &LocalElement) -> Self {
        Self { comps: std::array::from_fn(|i| self.comps[i].mul(f)) }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(LocalElement::is_zero)
    }
}

fn loc(a: AlgebraElement) -> LocalElement {
    LocalElement::from_algebra(a)
}

/// The hermitian coordinate `X^i` as a localized element.
pub fn x_loc(i: usize) -> LocalElement {
    loc(AlgebraElement::x(i))
}

/// Ambient components of `E_a` (1-based).
pub fn e_vector(a: usize) -> Ambient5 {
    let x = |i: usize| AlgebraElement::x(i);
    let one_minus = CentralFactor::OneMinusT2.element();
    let u = AlgebraElement::abs_z2();
    let v = AlgebraElement::abs_w2();
    let t = AlgebraElement::t();
    let zero = AlgebraElement::zero;
    let comps: [AlgebraElement; 5] = match a {
        1 => [-(&x(2) * &one_minus), &x(1) * &one_minus, zero(), zero(), zero()],
        2 => [zero(), zero(), -(&x(4) * &one_minus), &x(3) * &one_minus, zero()],
        3 => [&x(1) * &v, &x(2) * &v, -(&x(3) * &u), -(&x(4) * &u), zero()],
        4 => [&x(1) * &t, &x(2) * &t, &x(3) * &t, &x(4) * &t, &(&t * &t) - &AlgebraElement::one()],
        _ => panic!("E_{} does not exist; indices run from 1 to 4", a),
    };
    Ambient5 { comps: comps.map(loc) }
}

/// `Σ_a E_a U^a` written out componentwise.
pub fn embed(u: &ModuleVec) -> Ambient5 {
    let mut out = Ambient5::zero();
    for (a, c) in u.coeffs.iter().enumerate() {
        if !c.is_zero() {
            out = out.add(&e_vector(a + 1).right_mul(c));
        }
    }
    out
}

/// The canonical hermitian form `Σ_i (u^i)* v^i`.
pub fn ambient_h(u: &Ambient5, v: &Ambient5) -> LocalElement {
    u.comps
        .iter()
        .zip(&v.comps)
        .fold(LocalElement::zero(), |acc, (x, y)| &acc + &x.star().mul(y))
}

/// `φ`: `D_i(n) ↦ E_i Tⁿ`, `D_4 ↦ E_4`, extended linearly.
pub fn phi_map(d: &Derivation) -> ModuleVec {
    let mut out = ModuleVec::zero();
    for (b, c) in d.terms() {
        let (i, n) = b.parts();
        let tn = loc(AlgebraElement::t().pow(n));
        let term = ModuleVec::basis_times(i, tn.scale_rational(c));
        out = out.add(&term);
    }
    out
}

pub fn phi_basis(b: DerivationBasis) -> ModuleVec {
    phi_map(&Derivation::basis(b))
}

/// How the metric is perturbed.
#[derive(Clone, Debug, PartialEq)]
pub enum PerturbationKind {
    /// `δ = c (𝟙−T²)^p (𝟙+T²)^r`.
    Explicit { scale: BigRational, p: i32, r: i32 },
    /// `δ = Δ` with `∂₄Δ = 2αΔ`.
    Formal,
}

/// A central hermitian unit `δ` together with `α = ½ δ⁻¹ ∂₄δ`.
#[derive(Clone, Debug)]
pub struct Perturbation {
    kind: PerturbationKind,
    delta: LocalElement,
    alpha: LocalElement,
}

impl Perturbation {
    /// `δ = 𝟙`.
    pub fn identity() -> Self {
        Self::explicit(BigRational::one(), 0, 0).expect("identity is a valid perturbation")
    }

    /// `δ = (𝟙+T²)^n`.
    pub fn one_plus_t2_pow(n: i32) -> Self {
        Self::explicit(BigRational::one(), 0, n).expect("(1+T^2)^n is a valid perturbation")
    }

    /// `δ = c (𝟙−T²)^p (𝟙+T²)^r` with `c > 0`.
    pub fn explicit(scale: BigRational, p: i32, r: i32) -> Result<Self, GeometryError> {
        if !scale.is_positive() {
            return Err(GeometryError::UnsupportedDelta(format!("scale {} must be positive", scale)));
        }
        let delta = LocalElement::factor_pow(CentralFactor::OneMinusT2, p)
            .mul(&LocalElement::factor_pow(CentralFactor::OnePlusT2, r))
            .scale_rational(&scale);
        let d_delta = Derivation::partial(4).apply_local(&delta, &DeltaRule::default());
        let inv = delta.invert().map_err(|e| GeometryError::UnsupportedDelta(e.to_string()))?;
        let alpha = d_delta.mul(&inv).scale_rational(&ratio(1, 2));
        debug_assert_eq!(d_delta, delta.mul(&alpha).scale_rational(&ratio(2, 1)));
        Ok(Self { kind: PerturbationKind::Explicit { scale, p, r }, delta, alpha })
    }

    /// Formal unit `Δ` with a prescribed hermitian central `α`.
    pub fn formal(alpha: LocalElement) -> Result<Self, GeometryError> {
        if alpha.delta_pow() != 0 && !alpha.is_zero() {
            return Err(GeometryError::UnsupportedDelta("alpha must not involve Delta".into()));
        }
        if !alpha.is_central() || alpha.star() != alpha {
            return Err(GeometryError::UnsupportedDelta("alpha must be central and hermitian".into()));
        }
        Ok(Self { kind: PerturbationKind::Formal, delta: LocalElement::delta(1), alpha })
    }

    /// Recognise `c (𝟙−T²)^p (𝟙+T²)^r` (`c > 0` rational) among localized elements.
    pub fn from_delta(delta: &LocalElement) -> Result<Self, GeometryError> {
        let unsupported = || GeometryError::UnsupportedDelta(delta.to_string());
        if delta.delta_pow() != 0 {
            return Err(GeometryError::UnsupportedDelta("use a formal perturbation for Delta".into()));
        }
        let den = delta.den();
        if den.a != 0 || den.b != 0 || !delta.is_central() || delta.is_zero() {
            return Err(unsupported());
        }
        let mut rest = delta.num().clone();
        let mut p = -(den.c as i32);
        let mut r = -(den.e as i32);
        while let Ok(q) = rest.try_divide_central(CentralFactor::OneMinusT2) {
            rest = q;
            p += 1;
        }
        while let Ok(q) = rest.try_divide_central(CentralFactor::OnePlusT2) {
            rest = q;
            r += 1;
        }
        let scale = match (rest.len(), rest.terms().next()) {
            (1, Some((idx, c))) if *idx == crate::algebra::MultiIndex::ONE => c.as_rational().ok_or_else(unsupported)?,
            _ => return Err(unsupported()),
        };
        Self::explicit(scale, p, r)
    }

    pub fn kind(&self) -> &PerturbationKind {
        &self.kind
    }

    pub fn is_formal(&self) -> bool {
        self.kind == PerturbationKind::Formal
    }

    pub fn delta(&self) -> &LocalElement {
        &self.delta
    }

    /// `α` with `∂₄δ = 2αδ` (and `α₁ = α₂ = α₃ = 0`).
    pub fn alpha(&self) -> &LocalElement {
        &self.alpha
    }

    /// Derivative of `α` with respect to `T`: `α′ = −∂₄α / (𝟙−T²)`.
    pub fn alpha_prime(&self) -> LocalElement {
        Derivation::partial(4)
            .apply_local(&self.alpha, &DeltaRule::default())
            .mul(&LocalElement::factor_pow(CentralFactor::OneMinusT2, -1))
            .scale(&QScalar::from_int(-1))
    }

    pub fn rule(&self) -> DeltaRule {
        DeltaRule::new(self.alpha.clone())
    }
}

impl fmt::Display for Perturbation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            PerturbationKind::Formal => write!(f, "Delta (alpha = {})", self.alpha),
            PerturbationKind::Explicit { .. } => write!(f, "{}", self.delta),
        }
    }
}

/// The diagonal entries `h_aa` of the unperturbed metric (1-based).
pub fn base_metric_entry(a: usize) -> LocalElement {
    let one_minus = CentralFactor::OneMinusT2.element();
    let u = AlgebraElement::abs_z2();
    let v = AlgebraElement::abs_w2();
    let e = match a {
        1 => &u * &one_minus.pow(2),
        2 => &v * &one_minus.pow(2),
        3 => &(&u * &v) * &one_minus,
        4 => one_minus,
        _ => panic!("metric index {} out of range", a),
    };
    loc(e)
}

/// `h^δ = δh` on the free module spanned by `E₁ … E₄`.
#[derive(Clone, Debug)]
pub struct Metric {
    perturbation: Perturbation,
    diag: [LocalElement; 4],
    inverse: [LocalElement; 4],
}

impl Metric {
    pub fn new(perturbation: Perturbation) -> Result<Self, GeometryError> {
        let diag: [LocalElement; 4] = std::array::from_fn(|a| perturbation.delta().mul(&base_metric_entry(a + 1)));
        let mut inverse: [LocalElement; 4] = std::array::from_fn(|_| LocalElement::zero());
        for a in 0..4 {
            inverse[a] = diag[a].invert().map_err(|_| GeometryError::NotInvertibleMetric(a + 1))?;
        }
        Ok(Self { perturbation, diag, inverse })
    }

    pub fn perturbation(&self) -> &Perturbation {
        &self.perturbation
    }

    /// `h^δ_aa` (1-based).
    pub fn entry(&self, a: usize) -> &LocalElement {
        &self.diag[a - 1]
    }

    /// `(h^δ)^{aa}` (1-based).
    pub fn inverse_entry(&self, a: usize) -> &LocalElement {
        &self.inverse[a - 1]
    }

    /// `h^δ(U, V) = Σ_a (U^a)* h^δ_aa V^a`.
    pub fn eval(&self, u: &ModuleVec, v: &ModuleVec) -> LocalElement {
        (0..4).fold(LocalElement::zero(), |acc, a| {
            if u.coeffs[a].is_zero() || v.coeffs[a].is_zero() {
                return acc;
            }
            &acc + &u.coeffs[a].star().mul(&self.diag[a]).mul(&v.coeffs[a])
        })
    }
}

/// `P_ij = δ_ij 𝟙 − X^i X^j`.
#[derive(Clone, Debug)]
pub struct Projector {
    pub matrix: [[LocalElement; 5]; 5],
}

impl Projector {
    pub fn new() -> Self {
        let matrix = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let xx = &AlgebraElement::x(i + 1) * &AlgebraElement::x(j + 1);
                let e = if i == j { &AlgebraElement::one() - &xx } else { -xx };
                loc(e)
            })
        });
        Self { matrix }
    }

    pub fn apply(&self, u: &Ambient5) -> Ambient5 {
        Ambient5 {
            comps: std::array::from_fn(|i| {
                (0..5).fold(LocalElement::zero(), |acc, j| {
                    if u.comps[j].is_zero() {
                        acc
                    } else {
                        &acc + &self.matrix[i][j].mul(&u.comps[j])
                    }
                })
            }),
        }
    }

    /// `P(e_i)` in the basis `E₁ … E₄` (1-based `i`).
    pub fn image_of_unit(i: usize) -> ModuleVec {
        let inv = |f: CentralFactor| LocalElement::factor_pow(f, -1);
        let omt = inv(CentralFactor::OneMinusT2);
        let by_u = inv(CentralFactor::AbsZ2).mul(&omt);
        let by_v = inv(CentralFactor::AbsW2).mul(&omt);
        let t = loc(AlgebraElement::t());
        let x = x_loc;
        let mut out = ModuleVec::zero();
        match i {
            1 => {
                out.coeffs[0] = -x(2).mul(&by_u);
                out.coeffs[2] = x(1).mul(&by_u);
                out.coeffs[3] = x(1).mul(&t).mul(&omt);
            }
            2 => {
                out.coeffs[0] = x(1).mul(&by_u);
                out.coeffs[2] = x(2).mul(&by_u);
                out.coeffs[3] = x(2).mul(&t).mul(&omt);
            }
            3 => {
                out.coeffs[1] = -x(4).mul(&by_v);
                out.coeffs[2] = -x(3).mul(&by_v);
                out.coeffs[3] = x(3).mul(&t).mul(&omt);
            }
            4 => {
                out.coeffs[1] = x(3).mul(&by_v);
                out.coeffs[2] = -x(4).mul(&by_v);
                out.coeffs[3] = x(4).mul(&t).mul(&omt);
            }
            5 => out.coeffs[3] = -LocalElement::one(),
            _ => panic!("e_{} does not exist", i),
        }
        out
    }

    /// Coordinates in the basis `E₁ … E₄` of a vector fixed by `P`.
    pub fn to_basis(&self, u: &Ambient5) -> Result<ModuleVec, GeometryError> {
        if self.apply(u) != *u {
            return Err(GeometryError::NotInImage);
        }
        let mut out = ModuleVec::zero();
        for (i, c) in u.comps.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&Self::image_of_unit(i + 1).right_mul(c));
            }
        }
        debug_assert_eq!(embed(&out), *u);
        Ok(out)
    }
}

impl Default for Projector {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn embed_examples() {
        let e4 = embed(&ModuleVec::unit(4));
        let t = loc(AlgebraElement::t());
        assert_eq!(e4.comps[0], x_loc(1).mul(&t));
        assert_eq!(e4.comps[4], loc(&(&AlgebraElement::t() * &AlgebraElement::t()) - &AlgebraElement::one()));
        assert!(embed(&ModuleVec::zero()).is_zero());
        let e3t = embed(&ModuleVec::basis_times(3, t.clone()));
        assert_eq!(e3t, e_vector(3).right_mul(&t));
    }

    #[test]
    fn ambient_metric_table() {
        for a in 1..=4 {
            for b in 1..=4 {
                let h = ambient_h(&e_vector(a), &e_vector(b));
                if a == b {
                    assert_eq!(h, base_metric_entry(a), "h_{}{}", a, b);
                } else {
                    assert!(h.is_zero(), "h_{}{}", a, b);
                }
            }
        }
        assert_eq!(ambient_h(&Ambient5::unit(5), &Ambient5::unit(5)), LocalElement::one());
    }

    #[test]
    fn perturbed_metric_examples() {
        let h = Metric::new(Perturbation::identity()).unwrap();
        assert_eq!(h.eval(&ModuleVec::unit(2), &ModuleVec::unit(2)), base_metric_entry(2));
        let h = Metric::new(Perturbation::one_plus_t2_pow(1)).unwrap();
        let expected = LocalElement::factor_pow(CentralFactor::OnePlusT2, 1)
            .mul(&LocalElement::factor_pow(CentralFactor::OneMinusT2, 1));
        assert_eq!(h.eval(&ModuleVec::unit(4), &ModuleVec::unit(4)), expected);
    }

    #[test]
    fn projector_examples() {
        let p = Projector::new();
        let pe5 = p.apply(&Ambient5::unit(5));
        let minus_e4 = e_vector(4).right_mul(&LocalElement::from_int(-1));
        assert_eq!(pe5, minus_e4);
        assert_eq!(p.apply(&e_vector(1)), e_vector(1));
        assert_eq!(p.to_basis(&Ambient5::unit(5)), Err(GeometryError::NotInImage));
        for i in 1..=5 {
            let pe = p.apply(&Ambient5::unit(i));
            assert_eq!(embed(&Projector::image_of_unit(i)), pe, "P(e_{})", i);
            assert_eq!(p.to_basis(&pe).unwrap(), Projector::image_of_unit(i));
        }
    }

    #[test]
    fn alpha_of_explicit_perturbations() {
        let t = loc(AlgebraElement::t());
        let one_minus = LocalElement::factor_pow(CentralFactor::OneMinusT2, 1);
        let inv_plus = LocalElement::factor_pow(CentralFactor::OnePlusT2, -1);
        for n in 0..4 {
            let expected = t.mul(&one_minus).mul(&inv_plus).scale_rational(&rat(-(n as i64)));
            assert_eq!(Perturbation::one_plus_t2_pow(n).alpha(), &expected);
        }
        let p = Perturbation::explicit(rat(1), 1, 0).unwrap();
        assert_eq!(p.alpha(), &t);
        assert_eq!(p.alpha_prime(), LocalElement::one());
    }

    #[test]
    fn formal_alpha_prime() {
        let lambda = ratio(3, 1);
        let t2_minus_one = loc(&(&AlgebraElement::t() * &AlgebraElement::t()) - &AlgebraElement::one());
        let alpha = t2_minus_one.scale_rational(&(&lambda / rat(2)));
        let p = Perturbation::formal(alpha).unwrap();
        assert_eq!(p.alpha_prime(), loc(AlgebraElement::t()).scale_rational(&lambda));
        assert!(Perturbation::formal(loc(AlgebraElement::z())).is_err());
    }

    #[test]
    fn recognise_delta() {
        let d = LocalElement::factor_pow(CentralFactor::OnePlusT2, 3).scale_rational(&rat(2));
        let p = Perturbation::from_delta(&d).unwrap();
        assert_eq!(p.kind(), &PerturbationKind::Explicit { scale: rat(2), p: 0, r: 3 });
        assert!(Perturbation::from_delta(&loc(AlgebraElement::t())).is_err());
        assert!(Perturbation::from_delta(&LocalElement::from_int(-1)).is_err());
        let inv = LocalElement::factor_pow(CentralFactor::OneMinusT2, -2);
        assert_eq!(
            Perturbation::from_delta(&inv).unwrap().kind(),
            &PerturbationKind::Explicit { scale: rat(1), p: -2, r: 0 }
        );
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_basis(DerivationBasis::D1(0)), ModuleVec::unit(1));
        let t2 = loc(AlgebraElement::t().pow(2));
        assert_eq!(phi_basis(DerivationBasis::D3(2)), ModuleVec::basis_times(3, t2));
        assert_eq!(phi_basis(DerivationBasis::D4), ModuleVec::unit(4));
    }
}
