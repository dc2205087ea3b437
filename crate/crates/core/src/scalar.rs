//! Exact coefficients: Gaussian rationals and Laurent polynomials in the
//! deformation parameter `q`.
//!
//! `q` is treated as a formal invertible symbol with `|q| = 1`, so that
//! conjugation sends `q^n` to `q^-n`. Two [`QScalar`]s are equal only if they
//! agree as Laurent polynomials, which is exactly the semantics of a generic
//! (irrational) deformation angle.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand for `n / d`. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Huge numerators/denominators: scale down before converting.
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(900);
            let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
            n / d
        }
    }
}

/// An exact complex number `re + i·im` with rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    pub fn i() -> Self {
        Self { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self { re: &self.re * r, im: &self.im * r }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        let norm = &self.re * &self.re + &self.im * &self.im;
        if norm.is_zero() {
            return None;
        }
        Some(Self { re: &self.re / &norm, im: -(&self.im / &norm) })
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::real(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::real(BigRational::one())
    }
}

impl From<BigRational> for GaussianRational {
    fn from(r: BigRational) -> Self {
        Self::real(r)
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::real(rat(n))
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self { re: -self.re, im: -self.im }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => fmt_imaginary(f, &self.im),
            (false, false) => {
                write!(f, "({}", self.re)?;
                if self.im.is_negative() {
                    write!(f, " - ")?;
                    fmt_imaginary(f, &-self.im.clone())?;
                } else {
                    write!(f, " + ")?;
                    fmt_imaginary(f, &self.im)?;
                }
                write!(f, ")")
            }
        }
    }
}

fn fmt_imaginary(f: &mut fmt::Formatter<'_>, im: &BigRational) -> fmt::Result {
    if im.is_one() {
        write!(f, "i")
    } else if (-im.clone()).is_one() {
        write!(f, "-i")
    } else {
        write!(f, "{} i", im)
    }
}

/// A finite Laurent sum `Σ cₙ qⁿ` with Gaussian-rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QScalar {
    terms: BTreeMap<i64, GaussianRational>,
}

impl QScalar {
    pub fn from_gaussian(c: GaussianRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::monomial(GaussianRational::real(r), 0)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n))
    }

    /// `c · q^n`.
    pub fn monomial(c: GaussianRational, n: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(n, c);
        }
        Self { terms }
    }

    /// `q^n`.
    pub fn q_pow(n: i64) -> Self {
        Self::monomial(GaussianRational::one(), n)
    }

    pub fn i() -> Self {
        Self::from_gaussian(GaussianRational::i())
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &GaussianRational)> {
        self.terms.iter().map(|(n, c)| (*n, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, n: i64) -> GaussianRational {
        self.terms.get(&n).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn add_term(&mut self, n: i64, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(n).or_insert_with(GaussianRational::zero);
        *entry = &*entry + c;
        if entry.is_zero() {
            self.terms.remove(&n);
        }
    }

    /// Multiply by `q^n` (an index shift).
    pub fn mul_q_pow(&self, n: i64) -> Self {
        if n == 0 {
            return self.clone();
        }
        Self { terms: self.terms.iter().map(|(k, c)| (k + n, c.clone())).collect() }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(k, c)| (*k, c.scale(r))).collect() }
    }

    pub fn scale_gaussian(&self, g: &GaussianRational) -> Self {
        if g.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(k, c)| (*k, c * g)).collect() }
    }

    /// Conjugation on the deformation circle: `q ↦ q⁻¹`, `i ↦ −i`.
    pub fn conj(&self) -> Self {
        Self { terms: self.terms.iter().map(|(k, c)| (-k, c.conj())).collect() }
    }

    /// The value as a plain rational, when it has no `q` or `i` part.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (n, c) = self.terms.iter().next()?;
                (*n == 0 && c.is_real()).then(|| c.re.clone())
            }
            _ => None,
        }
    }

    /// Inverse of a monomial `c qⁿ`; sums are not invertible.
    pub fn inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (n, c) = self.terms.iter().next()?;
        Some(Self::monomial(c.inverse()?, -n))
    }

    /// Numerical value with `q` specialised to `q_value`.
    pub fn eval(&self, q_value: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(n, c)| c.to_complex() * q_value.powi(*n as i32))
            .sum()
    }
}

impl Zero for QScalar {
    fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for QScalar {
    fn one() -> Self {
        Self::from_int(1)
    }
}

impl From<BigRational> for QScalar {
    fn from(r: BigRational) -> Self {
        Self::from_rational(r)
    }
}

impl From<GaussianRational> for QScalar {
    fn from(g: GaussianRational) -> Self {
        Self::from_gaussian(g)
    }
}

impl From<i64> for QScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl AddAssign<&QScalar> for QScalar {
    fn add_assign(&mut self, rhs: &QScalar) {
        for (n, c) in &rhs.terms {
            self.add_term(*n, c);
        }
    }
}

impl SubAssign<&QScalar> for QScalar {
    fn sub_assign(&mut self, rhs: &QScalar) {
        for (n, c) in &rhs.terms {
            self.add_term(*n, &-c.clone());
        }
    }
}

impl<'a> Add<&'a QScalar> for &'a QScalar {
    type Output = QScalar;
    fn add(self, rhs: &QScalar) -> QScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a QScalar> for &'a QScalar {
    type Output = QScalar;
    fn sub(self, rhs: &QScalar) -> QScalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> Mul<&'a QScalar> for &'a QScalar {
    type Output = QScalar;
    fn mul(self, rhs: &QScalar) -> QScalar {
        let mut out = QScalar::zero();
        for (n1, c1) in &self.terms {
            for (n2, c2) in &rhs.terms {
                out.add_term(n1 + n2, &(c1 * c2));
            }
        }
        out
    }
}

impl Add for QScalar {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += &rhs;
        self
    }
}

impl Sub for QScalar {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= &rhs;
        self
    }
}

impl Mul for QScalar {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl Neg for QScalar {
    type Output = Self;
    fn neg(self) -> Self {
        Self { terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect() }
    }
}

impl Neg for &QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        -self.clone()
    }
}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (n, c)) in self.terms.iter().enumerate() {
            // Pull a leading minus sign out of purely real or purely imaginary
            // coefficients so sums read "a - b" instead of "a + -b".
            let negative = (c.im.is_zero() && c.re.is_negative())
                || (c.re.is_zero() && c.im.is_negative());
            let shown = if negative { -c.clone() } else { c.clone() };
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            let unit = shown.is_one();
            match (*n, unit) {
                (0, _) => write!(f, "{}", shown)?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{} q", shown)?,
                (k, true) => write!(f, "q^{}", k)?,
                (k, false) => write!(f, "{} q^{}", shown, k)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_inverse_round_trips() {
        let g = GaussianRational::new(ratio(3, 2), ratio(-1, 5));
        let inv = g.inverse().unwrap();
        assert_eq!(&g * &inv, GaussianRational::one());
        assert!(GaussianRational::zero().inverse().is_none());
    }

    #[test]
    fn q_arithmetic_is_laurent() {
        let a = &QScalar::one() + &QScalar::q_pow(1);
        let b = &QScalar::one() - &QScalar::q_pow(-1);
        // (1 + q)(1 - q^-1) = q - q^-1
        let expected = &QScalar::q_pow(1) - &QScalar::q_pow(-1);
        assert_eq!(&a * &b, expected);
        assert!((&QScalar::q_pow(2) - &QScalar::q_pow(2)).is_zero());
    }

    #[test]
    fn conjugation_inverts_q_and_i() {
        let s = QScalar::monomial(GaussianRational::new(rat(2), rat(1)), 3);
        let c = s.conj();
        assert_eq!(c, QScalar::monomial(GaussianRational::new(rat(2), rat(-1)), -3));
        assert_eq!(c.conj(), s);
    }

    #[test]
    fn eval_on_unit_circle() {
        let s = &QScalar::q_pow(1) + &QScalar::q_pow(-1);
        let q = Complex64::from_polar(1.0, 0.3);
        let v = s.eval(q);
        assert!((v.re - 2.0 * 0.3f64.cos()).abs() < 1e-14);
        assert!(v.im.abs() < 1e-14);
    }

    #[test]
    fn display_is_readable() {
        let s = &QScalar::from_int(1) - &QScalar::q_pow(1);
        assert_eq!(s.to_string(), "1 - q");
        let t = QScalar::monomial(GaussianRational::new(ratio(1, 2), rat(0)), -2);
        assert_eq!(t.to_string(), "1/2 q^-2");
        assert_eq!(QScalar::i().to_string(), "i");
        assert_eq!((-QScalar::i()).to_string(), "-i");
    }
}
