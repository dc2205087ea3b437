//! Fractions over the central multiplicative set generated by
//! `|Z|², |W|², 𝟙−T², 𝟙+T²`, with an optional formal central unit `Δ`.

use std::fmt;
use std::ops::{Mul, Neg};

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use num_complex::Complex64;

use crate::algebra::AlgebraElement;
use crate::chart::ChartPoint;
use crate::central::{CentralFactor, CentralPoly};
use crate::scalar::QScalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalizationError {
    #[error("cannot add elements of Delta-grade {0} and {1}")]
    DeltaGradeMismatch(i32, i32),
    #[error("element is not a unit of the localized center")]
    NotAUnit,
}

/// `(|Z|²)^a (|W|²)^b (𝟙−T²)^c (𝟙+T²)^e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct CentralDenominator {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub e: u32,
}

impl CentralDenominator {
    pub const ONE: CentralDenominator = CentralDenominator { a: 0, b: 0, c: 0, e: 0 };

    pub fn new(a: u32, b: u32, c: u32, e: u32) -> Self {
        Self { a, b, c, e }
    }

    pub fn single(f: CentralFactor, n: u32) -> Self {
        let mut d = Self::ONE;
        *d.exponent_mut(f) = n;
        d
    }

    pub fn exponent(&self, f: CentralFactor) -> u32 {
        match f {
            CentralFactor::AbsZ2 => self.a,
            CentralFactor::AbsW2 => self.b,
            CentralFactor::OneMinusT2 => self.c,
            CentralFactor::OnePlusT2 => self.e,
        }
    }

    fn exponent_mut(&mut self, f: CentralFactor) -> &mut u32 {
        match f {
            CentralFactor::AbsZ2 => &mut self.a,
            CentralFactor::AbsW2 => &mut self.b,
            CentralFactor::OneMinusT2 => &mut self.c,
            CentralFactor::OnePlusT2 => &mut self.e,
        }
    }

    pub fn is_one(&self) -> bool {
        *self == Self::ONE
    }

    pub fn product(&self, other: &Self) -> Self {
        Self::new(self.a + other.a, self.b + other.b, self.c + other.c, self.e + other.e)
    }

    /// Least common multiple (componentwise max).
    pub fn lcm(&self, other: &Self) -> Self {
        Self::new(self.a.max(other.a), self.b.max(other.b), self.c.max(other.c), self.e.max(other.e))
    }

    /// `self / other`, assuming `other` divides `self`.
    fn quotient(&self, other: &Self) -> Self {
        Self::new(self.a - other.a, self.b - other.b, self.c - other.c, self.e - other.e)
    }

    pub fn poly(&self) -> CentralPoly {
        CentralFactor::ALL
            .iter()
            .fold(CentralPoly::one(), |acc, f| acc.mul(&f.poly().pow(self.exponent(*f))))
    }

    pub fn to_element(&self) -> AlgebraElement {
        self.poly().to_element()
    }
}

/// `Δ^k · num / den`.
#[derive(Clone, Debug)]
pub struct LocalElement {
    num: AlgebraElement,
    den: CentralDenominator,
    delta_pow: i32,
}

impl LocalElement {
    /// Builds `Δ^delta_pow · num / den`, cancelling common factors where possible.
    pub fn new(num: AlgebraElement, den: CentralDenominator, delta_pow: i32) -> Self {
        let mut x = Self { num, den, delta_pow };
        x.reduce();
        x
    }

    pub fn one() -> Self {
        Self::from_algebra(AlgebraElement::one())
    }

    pub fn from_algebra(a: AlgebraElement) -> Self {
        Self::new(a, CentralDenominator::ONE, 0)
    }

    pub fn scalar(c: QScalar) -> Self {
        Self::from_algebra(AlgebraElement::scalar(c))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::from_algebra(AlgebraElement::from_rational(r))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_algebra(AlgebraElement::from_int(n))
    }

    /// The formal unit `Δ^k`.
    pub fn delta(k: i32) -> Self {
        Self { num: AlgebraElement::one(), den: CentralDenominator::ONE, delta_pow: k }
    }

    /// `f^n` for a distinguished factor, `n` of either sign.
    pub fn factor_pow(f: CentralFactor, n: i32) -> Self {
        if n >= 0 {
            Self::from_algebra(f.poly().pow(n as u32).to_element())
        } else {
            Self { num: AlgebraElement::one(), den: CentralDenominator::single(f, n.unsigned_abs()), delta_pow: 0 }
        }
    }

    pub fn num(&self) -> &AlgebraElement {
        &self.num
    }

    pub fn den(&self) -> CentralDenominator {
        self.den
    }

    pub fn delta_pow(&self) -> i32 {
        self.delta_pow
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_central(&self) -> bool {
        self.num.is_central()
    }

    /// The underlying algebra element when the denominator is trivial and
    /// there is no `Δ`.
    pub fn as_algebra(&self) -> Option<&AlgebraElement> {
        (self.den.is_one() && self.delta_pow == 0).then_some(&self.num)
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = CentralDenominator::ONE;
            self.delta_pow = 0;
            return;
        }
        for f in CentralFactor::ALL {
            while self.den.exponent(f) > 0 {
                match self.num.try_divide_central(f) {
                    Ok(q) => {
                        self.num = q;
                        *self.den.exponent_mut(f) -= 1;
                    }
                    Err(_) => break,
                }
            }
        }
    }

    /// Sum of two elements; both must carry the same power of `Δ` unless one is zero.
    pub fn checked_add(&self, other: &Self) -> Result<Self, LocalizationError> {
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if self.delta_pow != other.delta_pow {
            return Err(LocalizationError::DeltaGradeMismatch(self.delta_pow, other.delta_pow));
        }
        if self.den == other.den {
            return Ok(Self::new(&self.num + &other.num, self.den, self.delta_pow));
        }
        let den = self.den.lcm(&other.den);
        let x = self.num.mul_central(&den.quotient(&self.den).poly());
        let y = other.num.mul_central(&den.quotient(&other.den).poly());
        Ok(Self::new(&x + &y, den, self.delta_pow))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, LocalizationError> {
        self.checked_add(&-other)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self::new(&self.num * &other.num, self.den.product(&other.den), self.delta_pow + other.delta_pow)
    }

    pub fn scale(&self, c: &QScalar) -> Self {
        Self::new(self.num.scale(c), self.den, self.delta_pow)
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        self.scale(&QScalar::from_rational(r.clone()))
    }

    pub fn star(&self) -> Self {
        Self { num: self.num.star(), den: self.den, delta_pow: self.delta_pow }
    }

    /// Integer power; negative exponents go through [`invert`](Self::invert).
    pub fn pow(&self, n: i32) -> Result<Self, LocalizationError> {
        let base = if n < 0 { self.invert()? } else { self.clone() };
        let mut out = Self::one();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    /// Exact inverse of `c·qⁿ · Δ^k · Π fᵢ^{nᵢ} / den`.
    pub fn invert(&self) -> Result<Self, LocalizationError> {
        if self.num.is_zero() || !self.num.is_central() {
            return Err(LocalizationError::NotAUnit);
        }
        let mut rest = self.num.clone();
        let mut stripped = CentralDenominator::ONE;
        for f in CentralFactor::ALL {
            while let Ok(q) = rest.try_divide_central(f) {
                rest = q;
                *stripped.exponent_mut(f) += 1;
            }
        }
        if rest.len() != 1 {
            return Err(LocalizationError::NotAUnit);
        }
        let c = rest.coefficient(&crate::algebra::MultiIndex::ONE);
        let c_inv = c.inverse().ok_or(LocalizationError::NotAUnit)?;
        Ok(Self::new(self.den.to_element().scale(&c_inv), stripped, -self.delta_pow))
    }

    /// Classical value at a chart point; `None` when a `Δ` factor remains.
    pub fn classical_eval(&self, p: &ChartPoint, q_value: Complex64) -> Option<Complex64> {
        if self.delta_pow != 0 && !self.is_zero() {
            return None;
        }
        Some(self.num.classical_eval(p, q_value) / self.den.to_element().classical_eval(p, q_value))
    }

    /// Exact equality by cross-multiplication.
    pub fn loc_eq(&self, other: &Self) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        if self.delta_pow != other.delta_pow {
            return false;
        }
        if self.den == other.den {
            return self.num == other.num;
        }
        self.num.mul_central(&other.den.poly()) == other.num.mul_central(&self.den.poly())
    }
}

impl PartialEq for LocalElement {
    fn eq(&self, other: &Self) -> bool {
        self.loc_eq(other)
    }
}

impl Zero for LocalElement {
    fn zero() -> Self {
        Self { num: AlgebraElement::zero(), den: CentralDenominator::ONE, delta_pow: 0 }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl From<AlgebraElement> for LocalElement {
    fn from(a: AlgebraElement) -> Self {
        Self::from_algebra(a)
    }
}

/// Panics on a `Δ`-grade mismatch; use [`LocalElement::checked_add`] to handle it.
impl std::ops::Add for &LocalElement {
    type Output = LocalElement;
    fn add(self, rhs: &LocalElement) -> LocalElement {
        self.checked_add(rhs).expect("Delta-grade mismatch in addition")
    }
}

/// Panics on a `Δ`-grade mismatch; use [`LocalElement::checked_sub`] to handle it.
impl std::ops::Sub for &LocalElement {
    type Output = LocalElement;
    fn sub(self, rhs: &LocalElement) -> LocalElement {
        self.checked_sub(rhs).expect("Delta-grade mismatch in subtraction")
    }
}

impl std::ops::Add for LocalElement {
    type Output = LocalElement;
    fn add(self, rhs: LocalElement) -> LocalElement {
        &self + &rhs
    }
}

impl std::ops::Sub for LocalElement {
    type Output = LocalElement;
    fn sub(self, rhs: LocalElement) -> LocalElement {
        &self - &rhs
    }
}

impl Mul for &LocalElement {
    type Output = LocalElement;
    fn mul(self, rhs: &LocalElement) -> LocalElement {
        LocalElement::mul(self, rhs)
    }
}

impl Neg for &LocalElement {
    type Output = LocalElement;
    fn neg(self) -> LocalElement {
        LocalElement { num: -&self.num, den: self.den, delta_pow: self.delta_pow }
    }
}

impl Neg for LocalElement {
    type Output = LocalElement;
    fn neg(self) -> LocalElement {
        -&self
    }
}

impl fmt::Display for LocalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut factors = Vec::new();
        if self.delta_pow != 0 {
            factors.push(if self.delta_pow == 1 { "Delta".to_string() } else { format!("Delta^{}", self.delta_pow) });
        }
        for fac in CentralFactor::ALL {
            let n = self.den.exponent(fac);
            if n > 0 {
                let base = match fac {
                    CentralFactor::AbsZ2 => "(Z Zs)",
                    CentralFactor::AbsW2 => "(W Ws)",
                    CentralFactor::OneMinusT2 => "(1 - T^2)",
                    CentralFactor::OnePlusT2 => "(1 + T^2)",
                };
                factors.push(format!("{}^-{}", base, n));
            }
        }
        if factors.is_empty() {
            return write!(f, "{}", self.num);
        }
        if self.num.is_zero() {
            return write!(f, "0");
        }
        let num = if self.num.len() > 1 { format!("({})", self.num) } else { self.num.to_string() };
        write!(f, "{} {}", num, factors.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Generator;

    fn f(fac: CentralFactor, n: i32) -> LocalElement {
        LocalElement::factor_pow(fac, n)
    }

    #[test]
    fn add_examples() {
        let x = f(CentralFactor::OneMinusT2, -1);
        assert_eq!(x.checked_add(&LocalElement::zero()).unwrap(), x);
        let a = LocalElement::from_algebra(AlgebraElement::abs_z2()).mul(&x);
        let b = LocalElement::from_algebra(AlgebraElement::abs_w2()).mul(&x);
        let sum = a.checked_add(&b).unwrap();
        assert_eq!(sum, LocalElement::one());
        assert!(sum.den().is_one());
        assert_eq!(
            LocalElement::delta(1).checked_add(&LocalElement::one()),
            Err(LocalizationError::DeltaGradeMismatch(1, 0))
        );
    }

    #[test]
    fn mul_examples() {
        let u = LocalElement::from_algebra(AlgebraElement::abs_z2());
        assert_eq!(f(CentralFactor::AbsZ2, -1).mul(&u), LocalElement::one());
        let z = LocalElement::from_algebra(AlgebraElement::z());
        let w = LocalElement::from_algebra(AlgebraElement::w());
        let lhs = z.mul(&f(CentralFactor::OneMinusT2, -1)).mul(&w.mul(&f(CentralFactor::OnePlusT2, -1)));
        let rhs = LocalElement::new(&AlgebraElement::z() * &AlgebraElement::w(), CentralDenominator::new(0, 0, 1, 1), 0);
        assert_eq!(lhs, rhs);
        let t = LocalElement::from_algebra(AlgebraElement::t());
        let prod = LocalElement::delta(1).mul(&t).mul(&LocalElement::delta(-1).mul(&t));
        assert_eq!(prod, LocalElement::from_algebra(&AlgebraElement::t() * &AlgebraElement::t()));
        assert_eq!(prod.delta_pow(), 0);
    }

    #[test]
    fn equality_examples() {
        let u = AlgebraElement::abs_z2();
        let x = LocalElement { num: u, den: CentralDenominator::new(1, 0, 0, 0), delta_pow: 0 };
        assert!(x.loc_eq(&LocalElement::one()));
        let y = LocalElement {
            num: CentralFactor::OneMinusT2.element(),
            den: CentralDenominator::new(0, 0, 1, 1),
            delta_pow: 0,
        };
        assert!(y.loc_eq(&f(CentralFactor::OnePlusT2, -1)));
        let z = LocalElement::new(AlgebraElement::z(), CentralDenominator::new(1, 0, 0, 0), 0);
        let zs = LocalElement::new(AlgebraElement::generator(Generator::Zs), CentralDenominator::new(1, 0, 0, 0), 0);
        assert!(!z.loc_eq(&zs));
    }

    #[test]
    fn invert_examples() {
        let one_plus = f(CentralFactor::OnePlusT2, 1);
        assert_eq!(one_plus.invert().unwrap(), f(CentralFactor::OnePlusT2, -1));
        let cube = f(CentralFactor::OnePlusT2, 3);
        assert_eq!(cube.invert().unwrap(), f(CentralFactor::OnePlusT2, -3));
        let t = LocalElement::from_algebra(AlgebraElement::t());
        assert_eq!(t.invert(), Err(LocalizationError::NotAUnit));
        let mixed = LocalElement::from_algebra(&AlgebraElement::abs_z2() + &AlgebraElement::abs_w2().pow(2));
        assert_eq!(mixed.invert(), Err(LocalizationError::NotAUnit));
        let x = LocalElement::new(
            (&AlgebraElement::abs_z2() * &CentralFactor::OneMinusT2.element()).scale(&QScalar::q_pow(2)),
            CentralDenominator::new(0, 1, 0, 2),
            3,
        )
        .scale(&QScalar::from_int(-5));
        assert_eq!(x.mul(&x.invert().unwrap()), LocalElement::one());
    }

    #[test]
    fn zero_is_grade_free() {
        let zero_delta = LocalElement::delta(2).mul(&LocalElement::zero());
        assert!(zero_delta.checked_add(&LocalElement::one()).is_ok());
        assert_eq!(zero_delta, LocalElement::zero());
    }
}
