//! Exact arithmetic in the θ-deformed four-sphere algebra.
//!
//! Elements are stored in the normal-form basis
//! `e^I = Z^j (Z*)^k W^l (W*)^m T^ε` with `ε ∈ {0, 1}`, the only relation
//! needed to multiply being `WZ = qZW`, `W*Z = q̄ZW*` together with
//! `T² = 𝟙 − |Z|² − |W|²`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::central::{self, CentralFactor, CentralPoly};
use crate::chart::ChartPoint;
use crate::scalar::{ratio, GaussianRational, QScalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("element is not central")]
    NotCentral,
    #[error("element is not divisible by {0}")]
    NotDivisible(&'static str),
}

/// Exponents `(j, k, l, m, ε)` of a normal-form basis element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex {
    pub j: u32,
    pub k: u32,
    pub l: u32,
    pub m: u32,
    pub eps: u8,
}

impl MultiIndex {
    /// Panics if `eps > 1`.
    pub fn new(j: u32, k: u32, l: u32, m: u32, eps: u8) -> Self {
        assert!(eps <= 1, "T exponent must be reduced to 0 or 1");
        Self { j, k, l, m, eps }
    }

    pub const ONE: MultiIndex = MultiIndex { j: 0, k: 0, l: 0, m: 0, eps: 0 };
    /// `1_Z = (1,1,0,0,0)`
    pub const ONE_Z: MultiIndex = MultiIndex { j: 1, k: 1, l: 0, m: 0, eps: 0 };
    /// `1_W = (0,0,1,1,0)`
    pub const ONE_W: MultiIndex = MultiIndex { j: 0, k: 0, l: 1, m: 1, eps: 0 };

    /// Total degree `j + k + l + m + ε`.
    pub fn degree(&self) -> u32 {
        self.j + self.k + self.l + self.m + u32::from(self.eps)
    }

    pub fn is_central(&self) -> bool {
        self.j == self.k && self.l == self.m
    }

    /// Component-wise sum of the `(j,k,l,m)` parts, with the given `ε`.
    fn hat_sum(&self, other: &Self, eps: u8) -> Self {
        Self::new(self.j + other.j, self.k + other.k, self.l + other.l, self.m + other.m, eps)
    }

    /// All indices with `j+k+l+m ≤ max_degree` and both values of `ε`.
    pub fn up_to_degree(max_degree: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for j in 0..=max_degree {
            for k in 0..=max_degree - j {
                for l in 0..=max_degree - j - k {
                    for m in 0..=max_degree - j - k - l {
                        for eps in 0..=1 {
                            out.push(Self::new(j, k, l, m, eps));
                        }
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{},{})", self.j, self.k, self.l, self.m, self.eps)
    }
}

/// The generators `Z, Z*, W, W*, T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Z,
    Zs,
    W,
    Ws,
    T,
}

impl Generator {
    pub const ALL: [Generator; 5] = [Generator::Z, Generator::Zs, Generator::W, Generator::Ws, Generator::T];

    pub fn index(self) -> MultiIndex {
        match self {
            Generator::Z => MultiIndex::new(1, 0, 0, 0, 0),
            Generator::Zs => MultiIndex::new(0, 1, 0, 0, 0),
            Generator::W => MultiIndex::new(0, 0, 1, 0, 0),
            Generator::Ws => MultiIndex::new(0, 0, 0, 1, 0),
            Generator::T => MultiIndex::new(0, 0, 0, 0, 1),
        }
    }

    pub fn star(self) -> Generator {
        match self {
            Generator::Z => Generator::Zs,
            Generator::Zs => Generator::Z,
            Generator::W => Generator::Ws,
            Generator::Ws => Generator::W,
            Generator::T => Generator::T,
        }
    }
}

/// Product of two basis elements, in normal form.
///
/// `e^{I₁} e^{I₂} = q^{(l₁−m₁)(j₂−k₂)} e^{I₁+I₂}`, with `T²` rewritten as
/// `𝟙 − |Z|² − |W|²` when both factors carry a `T`.
pub fn basis_product(i1: MultiIndex, i2: MultiIndex) -> AlgebraElement {
    let phase = (i64::from(i1.l) - i64::from(i1.m)) * (i64::from(i2.j) - i64::from(i2.k));
    let q = QScalar::q_pow(phase);
    let mut out = AlgebraElement::zero();
    if i1.eps + i2.eps <= 1 {
        out.add_term(i1.hat_sum(&i2, i1.eps + i2.eps), &q);
    } else {
        let base = i1.hat_sum(&i2, 0);
        let neg = -&q;
        out.add_term(base, &q);
        out.add_term(base.hat_sum(&MultiIndex::ONE_Z, 0), &neg);
        out.add_term(base.hat_sum(&MultiIndex::ONE_W, 0), &neg);
    }
    out
}

/// A sparse element `Σ a_I e^I` of the algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<MultiIndex, QScalar>,
}

impl AlgebraElement {
    pub fn basis(idx: MultiIndex) -> Self {
        Self::basis_scaled(idx, QScalar::one())
    }

    pub fn basis_scaled(idx: MultiIndex, c: QScalar) -> Self {
        let mut out = Self::zero();
        out.add_term(idx, &c);
        out
    }

    pub fn scalar(c: QScalar) -> Self {
        Self::basis_scaled(MultiIndex::ONE, c)
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::scalar(QScalar::from_rational(r))
    }

    pub fn from_int(n: i64) -> Self {
        Self::scalar(QScalar::from_int(n))
    }

    pub fn generator(g: Generator) -> Self {
        Self::basis(g.index())
    }

    pub fn z() -> Self {
        Self::generator(Generator::Z)
    }

    pub fn w() -> Self {
        Self::generator(Generator::W)
    }

    pub fn t() -> Self {
        Self::generator(Generator::T)
    }

    /// `|Z|² = ZZ*`
    pub fn abs_z2() -> Self {
        Self::basis(MultiIndex::ONE_Z)
    }

    /// `|W|² = WW*`
    pub fn abs_w2() -> Self {
        Self::basis(MultiIndex::ONE_W)
    }

    /// The hermitian coordinates `X¹ … X⁵` (`i` is 1-based).
    ///
    /// `X¹ = (Z+Z*)/2`, `X² = (Z−Z*)/2i`, `X³ = (W+W*)/2`, `X⁴ = (W−W*)/2i`,
    /// `X⁵ = T`. Panics for `i` outside `1..=5`.
    pub fn x(i: usize) -> Self {
        let half = QScalar::from_rational(ratio(1, 2));
        // 1/(2i) = −i/2
        let minus_half_i = QScalar::from_gaussian(GaussianRational::new(ratio(0, 1), ratio(-1, 2)));
        let combo = |a: Generator, b: Generator, ca: QScalar, cb: QScalar| {
            let mut e = Self::zero();
            e.add_term(a.index(), &ca);
            e.add_term(b.index(), &cb);
            e
        };
        match i {
            1 => combo(Generator::Z, Generator::Zs, half.clone(), half),
            2 => combo(Generator::Z, Generator::Zs, minus_half_i.clone(), -minus_half_i),
            3 => combo(Generator::W, Generator::Ws, half.clone(), half),
            4 => combo(Generator::W, Generator::Ws, minus_half_i.clone(), -minus_half_i),
            5 => Self::t(),
            _ => panic!("X^{} does not exist; indices run from 1 to 5", i),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &QScalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, idx: &MultiIndex) -> QScalar {
        self.terms.get(idx).cloned().unwrap_or_else(QScalar::zero)
    }

    pub fn add_term(&mut self, idx: MultiIndex, c: &QScalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(idx).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&idx);
        }
    }

    /// Largest total degree among the terms (0 for the zero element).
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &QScalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut out = Self::zero();
        for (idx, a) in &self.terms {
            out.add_term(*idx, &(a * c));
        }
        out
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        self.scale(&QScalar::from_rational(r.clone()))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Multiply by a central polynomial in `|Z|², |W|²` (index shifts only).
    pub fn mul_central(&self, p: &CentralPoly) -> Self {
        let mut out = Self::zero();
        for (idx, a) in &self.terms {
            for ((u, v), c) in &p.terms {
                let shifted = MultiIndex::new(idx.j + u, idx.k + u, idx.l + v, idx.m + v, idx.eps);
                out.add_term(shifted, &(a * c));
            }
        }
        out
    }

    /// The involution: `(e^{(j,k,l,m,ε)})* = q^{(j−k)(l−m)} e^{(k,j,m,l,ε)}`,
    /// coefficients conjugated.
    pub fn star(&self) -> Self {
        let mut out = Self::zero();
        for (idx, a) in &self.terms {
            let phase = (i64::from(idx.j) - i64::from(idx.k)) * (i64::from(idx.l) - i64::from(idx.m));
            let starred = MultiIndex::new(idx.k, idx.j, idx.m, idx.l, idx.eps);
            out.add_term(starred, &a.conj().mul_q_pow(phase));
        }
        out
    }

    pub fn is_hermitian(&self) -> bool {
        &self.star() == self
    }

    /// `[a, b] = ab − ba`
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// True iff every term has `j = k` and `l = m`. For generic `q` this is
    /// exactly membership in the center.
    pub fn is_central(&self) -> bool {
        self.terms.keys().all(MultiIndex::is_central)
    }

    /// Coefficients `a_{i₁ i₂ ε}` with `a = Σ a (|Z|²)^{i₁} (|W|²)^{i₂} T^ε`.
    pub fn center_decompose(&self) -> Result<BTreeMap<(u32, u32, u8), QScalar>, AlgebraError> {
        if !self.is_central() {
            return Err(AlgebraError::NotCentral);
        }
        Ok(self.terms.iter().map(|(idx, c)| ((idx.j, idx.l, idx.eps), c.clone())).collect())
    }

    /// Rebuild a central element from its [`center_decompose`](Self::center_decompose) map.
    pub fn from_center_decomposition(parts: &BTreeMap<(u32, u32, u8), QScalar>) -> Self {
        let mut out = Self::zero();
        for ((a, b, eps), c) in parts {
            out.add_term(MultiIndex::new(*a, *a, *b, *b, *eps), c);
        }
        out
    }

    /// Solve `d·x = self` for `x`, where `d` is one of the distinguished
    /// central factors. The quotient is verified by multiplying back.
    pub fn try_divide_central(&self, d: CentralFactor) -> Result<Self, AlgebraError> {
        let parts = central::decompose(self);
        let mut quotient = BTreeMap::new();
        for (base, poly) in parts {
            let q = poly.div_factor(d).ok_or(AlgebraError::NotDivisible(d.name()))?;
            quotient.insert(base, q);
        }
        let x = central::recompose(&quotient);
        debug_assert_eq!(&x.mul_central(&d.poly()), self);
        Ok(x)
    }

    /// Linear evaluation `Σ a_I(q) φ(e^I)(p)` with `q` specialised numerically.
    ///
    /// At `q_value = 1` this is evaluation of the classical coordinate
    /// functions and is multiplicative.
    pub fn classical_eval(&self, p: &ChartPoint, q_value: Complex64) -> Complex64 {
        let cz = p.phi.cos() * p.psi.cos();
        let sw = p.phi.sin() * p.psi.cos();
        let t = p.psi.sin();
        self.terms
            .iter()
            .map(|(idx, c)| {
                let phase = (i64::from(idx.j) - i64::from(idx.k)) as f64 * p.xi1
                    + (i64::from(idx.l) - i64::from(idx.m)) as f64 * p.xi2;
                let modulus = cz.powi((idx.j + idx.k) as i32)
                    * sw.powi((idx.l + idx.m) as i32)
                    * t.powi(i32::from(idx.eps));
                c.eval(q_value) * Complex64::from_polar(modulus, phase)
            })
            .sum()
    }
}

impl Zero for AlgebraElement {
    fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for AlgebraElement {
    fn one() -> Self {
        Self::basis(MultiIndex::ONE)
    }
}

impl From<QScalar> for AlgebraElement {
    fn from(c: QScalar) -> Self {
        Self::scalar(c)
    }
}

impl AddAssign<&AlgebraElement> for AlgebraElement {
    fn add_assign(&mut self, rhs: &AlgebraElement) {
        for (idx, c) in &rhs.terms {
            self.add_term(*idx, c);
        }
    }
}

impl SubAssign<&AlgebraElement> for AlgebraElement {
    fn sub_assign(&mut self, rhs: &AlgebraElement) {
        for (idx, c) in &rhs.terms {
            self.add_term(*idx, &-c);
        }
    }
}

impl<'a> Add<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> Mul<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (i1, c1) in &self.terms {
            for (i2, c2) in &rhs.terms {
                let phase = (i64::from(i1.l) - i64::from(i1.m)) * (i64::from(i2.j) - i64::from(i2.k));
                let coeff = (c1 * c2).mul_q_pow(phase);
                if i1.eps + i2.eps <= 1 {
                    out.add_term(i1.hat_sum(i2, i1.eps + i2.eps), &coeff);
                } else {
                    let base = i1.hat_sum(i2, 0);
                    let neg = -&coeff;
                    out.add_term(base, &coeff);
                    out.add_term(base.hat_sum(&MultiIndex::ONE_Z, 0), &neg);
                    out.add_term(base.hat_sum(&MultiIndex::ONE_W, 0), &neg);
                }
            }
        }
        out
    }
}

impl Add for AlgebraElement {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += &rhs;
        self
    }
}

impl Sub for AlgebraElement {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= &rhs;
        self
    }
}

impl Mul for AlgebraElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl Neg for AlgebraElement {
    type Output = Self;
    fn neg(self) -> Self {
        Self { terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect() }
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        -self.clone()
    }
}

fn fmt_monomial(idx: &MultiIndex) -> String {
    let mut parts = Vec::new();
    for (name, e) in [("Z", idx.j), ("Zs", idx.k), ("W", idx.l), ("Ws", idx.m), ("T", u32::from(idx.eps))] {
        match e {
            0 => {}
            1 => parts.push(name.to_string()),
            _ => parts.push(format!("{}^{}", name, e)),
        }
    }
    parts.join(" ")
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (idx, c)) in self.terms.iter().enumerate() {
            let monomial = fmt_monomial(idx);
            let coeff = c.to_string();
            let (negative, body) = match coeff.strip_prefix('-') {
                Some(rest) if c.len() == 1 => (true, rest.to_string()),
                _ => (false, coeff),
            };
            if n == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            let body = if c.len() > 1 { format!("({})", body) } else { body };
            match (monomial.is_empty(), body.as_str()) {
                (true, _) => write!(f, "{}", body)?,
                (false, "1") => write!(f, "{}", monomial)?,
                (false, _) => write!(f, "{} {}", body, monomial)?,
            }
        }
        Ok(())
    }
}
