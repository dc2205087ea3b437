//! Polynomials in the central variables `u = |Z|²` and `v = |W|²`.
//!
//! Every basis element factors uniquely as `e^I = e^{I₀} · u^a · v^b` where
//! `I₀` has `min(j,k) = min(l,m) = 0`. The algebra is therefore a free module
//! over `ℚ(i)[q,q⁻¹][u,v]` on the reduced indices, and dividing by a central
//! element of that polynomial ring is ordinary exact polynomial division in
//! each reduced-index component.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{AlgebraElement, MultiIndex};
use crate::scalar::{rat, QScalar};

/// `Σ c_{ab} u^a v^b`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CentralPoly {
    pub(crate) terms: BTreeMap<(u32, u32), QScalar>,
}

impl CentralPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, QScalar::one())
    }

    pub fn monomial(a: u32, b: u32, c: QScalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((a, b), c);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: (u32, u32), c: &QScalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                out.add_term((a1 + a2, b1 + b2), &(c1 * c2));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// The element `Σ c_{ab} (|Z|²)^a (|W|²)^b` of the algebra.
    pub fn to_element(&self) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for ((a, b), c) in &self.terms {
            out.add_term(MultiIndex::new(*a, *a, *b, *b, 0), c);
        }
        out
    }

    /// Exact quotient by `u − r(v)` with `r(v) = r0 + r1·v`, if it exists.
    fn div_u_minus(&self, r0: &BigRational, r1: &BigRational) -> Option<Self> {
        // Coefficients of u^i as polynomials in v.
        let mut by_u: BTreeMap<u32, BTreeMap<u32, QScalar>> = BTreeMap::new();
        for ((a, b), c) in &self.terms {
            by_u.entry(*a).or_default().insert(*b, c.clone());
        }
        let Some(&top) = by_u.keys().next_back() else {
            return Some(Self::zero());
        };
        let mul_r = |p: &BTreeMap<u32, QScalar>| {
            let mut out: BTreeMap<u32, QScalar> = BTreeMap::new();
            for (b, c) in p {
                if !r0.is_zero() {
                    add_v(&mut out, *b, &c.scale(r0));
                }
                if !r1.is_zero() {
                    add_v(&mut out, b + 1, &c.scale(r1));
                }
            }
            out
        };
        // Horner from the top: B_{i-1} = P_i + r·B_i.
        let mut quotient = Self::zero();
        let mut carry: BTreeMap<u32, QScalar> = BTreeMap::new();
        for i in (0..=top).rev() {
            let mut current = mul_r(&carry);
            if let Some(p) = by_u.get(&i) {
                for (b, c) in p {
                    add_v(&mut current, *b, c);
                }
            }
            if i == 0 {
                return current.is_empty().then_some(quotient);
            }
            for (b, c) in &current {
                quotient.add_term((i - 1, *b), c);
            }
            carry = current;
        }
        unreachable!("loop returns at i == 0")
    }

    fn div_v(&self) -> Option<Self> {
        let mut out = Self::zero();
        for ((a, b), c) in &self.terms {
            if *b == 0 {
                return None;
            }
            out.terms.insert((*a, b - 1), c.clone());
        }
        Some(out)
    }

    /// Exact division by one of the four distinguished central factors.
    pub fn div_factor(&self, factor: CentralFactor) -> Option<Self> {
        match factor {
            CentralFactor::AbsZ2 => self.div_u_minus(&rat(0), &rat(0)),
            CentralFactor::AbsW2 => self.div_v(),
            // 1 − T² = u + v = u − (−v)
            CentralFactor::OneMinusT2 => self.div_u_minus(&rat(0), &rat(-1)),
            // 1 + T² = 2 − u − v = −(u − (2 − v))
            CentralFactor::OnePlusT2 => self
                .div_u_minus(&rat(2), &rat(-1))
                .map(|q| q.scale(&rat(-1))),
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            out.add_term(*k, &c.scale(r));
        }
        out
    }

    /// The single scalar if this is a constant.
    pub fn as_constant(&self) -> Option<QScalar> {
        match self.terms.len() {
            0 => Some(QScalar::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }
}

fn add_v(p: &mut BTreeMap<u32, QScalar>, b: u32, c: &QScalar) {
    if c.is_zero() {
        return;
    }
    let entry = p.entry(b).or_default();
    *entry += c;
    if entry.is_zero() {
        p.remove(&b);
    }
}

/// The central regular elements inverted by the localization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CentralFactor {
    /// `|Z|² = ZZ*`
    AbsZ2,
    /// `|W|² = WW*`
    AbsW2,
    /// `𝟙 − T² = |Z|² + |W|²`
    OneMinusT2,
    /// `𝟙 + T² = 2·𝟙 − |Z|² − |W|²`
    OnePlusT2,
}

impl CentralFactor {
    pub const ALL: [CentralFactor; 4] = [
        CentralFactor::AbsZ2,
        CentralFactor::AbsW2,
        CentralFactor::OneMinusT2,
        CentralFactor::OnePlusT2,
    ];

    pub fn poly(self) -> CentralPoly {
        let one = QScalar::one();
        let mut p = CentralPoly::zero();
        match self {
            CentralFactor::AbsZ2 => p.add_term((1, 0), &one),
            CentralFactor::AbsW2 => p.add_term((0, 1), &one),
            CentralFactor::OneMinusT2 => {
                p.add_term((1, 0), &one);
                p.add_term((0, 1), &one);
            }
            CentralFactor::OnePlusT2 => {
                p.add_term((0, 0), &QScalar::from_int(2));
                p.add_term((1, 0), &-&one);
                p.add_term((0, 1), &-&one);
            }
        }
        p
    }

    pub fn element(self) -> AlgebraElement {
        self.poly().to_element()
    }

    pub fn name(self) -> &'static str {
        match self {
            CentralFactor::AbsZ2 => "|Z|^2",
            CentralFactor::AbsW2 => "|W|^2",
            CentralFactor::OneMinusT2 => "1-T^2",
            CentralFactor::OnePlusT2 => "1+T^2",
        }
    }
}

/// Split an element into reduced-index components with polynomial
/// coefficients in `u, v`.
pub(crate) fn decompose(a: &AlgebraElement) -> BTreeMap<MultiIndex, CentralPoly> {
    let mut out: BTreeMap<MultiIndex, CentralPoly> = BTreeMap::new();
    for (idx, c) in a.terms() {
        let r = idx.j.min(idx.k);
        let s = idx.l.min(idx.m);
        let reduced = MultiIndex::new(idx.j - r, idx.k - r, idx.l - s, idx.m - s, idx.eps);
        out.entry(reduced).or_default().add_term((r, s), c);
    }
    out
}

pub(crate) fn recompose(parts: &BTreeMap<MultiIndex, CentralPoly>) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (base, poly) in parts {
        for ((a, b), c) in &poly.terms {
            let idx = MultiIndex::new(base.j + a, base.k + a, base.l + b, base.m + b, base.eps);
            out.add_term(idx, c);
        }
    }
    out
}
