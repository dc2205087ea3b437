//! The hermitian derivations `∂̃₁ … ∂̃₄` and the tower `D_i(n)` they generate.
//!
//! `D_i(n) = Tⁿ(𝟙−T²)∂̃_i` for `i = 1, 2`, `D_3(n) = Tⁿ∂̃₃`, and `D_4 = ∂̃₄`.
//! `D_i(0)` are the four distinguished derivations `∂₁ … ∂₄`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{AlgebraElement, Generator, MultiIndex};
use crate::central::CentralFactor;
use crate::localization::{CentralDenominator, LocalElement};
use crate::scalar::{rat, GaussianRational, QScalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DerivationBasis {
    D1(u32),
    D2(u32),
    D3(u32),
    D4,
}

impl DerivationBasis {
    /// `∂₁ … ∂₄` (1-based).
    pub fn partial(i: usize) -> Self {
        match i {
            1 => Self::D1(0),
            2 => Self::D2(0),
            3 => Self::D3(0),
            4 => Self::D4,
            _ => panic!("no derivation ∂{}", i),
        }
    }

    /// Which of `∂̃₁ … ∂̃₄` this is built on, and the power of `T` in front.
    pub fn parts(self) -> (usize, u32) {
        match self {
            Self::D1(n) => (1, n),
            Self::D2(n) => (2, n),
            Self::D3(n) => (3, n),
            Self::D4 => (4, 0),
        }
    }

    fn with_level(i: usize, n: u32) -> Self {
        match i {
            1 => Self::D1(n),
            2 => Self::D2(n),
            3 => Self::D3(n),
            _ => Self::D4,
        }
    }

    /// The central prefactor `Tⁿ(𝟙−T²)`, `Tⁿ` or `𝟙`.
    pub fn prefactor(self) -> AlgebraElement {
        let (i, n) = self.parts();
        let tn = AlgebraElement::t().pow(n);
        match i {
            1 | 2 => &tn * &CentralFactor::OneMinusT2.element(),
            _ => tn,
        }
    }
}

impl fmt::Display for DerivationBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::D4 => write!(f, "d4"),
            _ => {
                let (i, n) = self.parts();
                if n == 0 {
                    write!(f, "d{}", i)
                } else {
                    write!(f, "d{}@{}", i, n)
                }
            }
        }
    }
}

impl FromStr for DerivationBasis {
    type Err = String;

    /// Accepts `d1`, `d2`, `d3`, `d4` and `d1@n`, `d2@n`, `d3@n`.
    fn from_str(s: &str) -> Result<Self, String> {
        let (head, level) = match s.split_once('@') {
            Some((h, n)) => (h, n.parse::<u32>().map_err(|_| format!("bad level in {:?}", s))?),
            None => (s, 0),
        };
        match head {
            "d1" => Ok(Self::D1(level)),
            "d2" => Ok(Self::D2(level)),
            "d3" => Ok(Self::D3(level)),
            "d4" if level == 0 => Ok(Self::D4),
            _ => Err(format!("unknown derivation {:?}", s)),
        }
    }
}

/// A finite rational combination of tower derivations.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Derivation {
    terms: BTreeMap<DerivationBasis, BigRational>,
}

impl Derivation {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(b: DerivationBasis) -> Self {
        let mut d = Self::zero();
        d.add_term(b, &BigRational::one());
        d
    }

    /// `∂₁ … ∂₄` (1-based).
    pub fn partial(i: usize) -> Self {
        Self::basis(DerivationBasis::partial(i))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DerivationBasis, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, b: DerivationBasis) -> BigRational {
        self.terms.get(&b).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, b: DerivationBasis, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(b).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&b);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(*b, c);
        }
        out
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        let mut out = Self::zero();
        for (b, c) in &self.terms {
            out.add_term(*b, &(c * r));
        }
        out
    }

    /// Lie bracket from the structure constants of the tower.
    pub fn bracket(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (b1, c1) in &self.terms {
            for (b2, c2) in &other.terms {
                let c = c1 * c2;
                for (b, k) in basis_bracket(*b1, *b2).terms {
                    out.add_term(b, &(&c * &k));
                }
            }
        }
        out
    }

    pub fn apply(&self, a: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (b, c) in &self.terms {
            let (i, _) = b.parts();
            let inner = tilde_apply(i, a);
            if inner.is_zero() {
                continue;
            }
            out += &(&b.prefactor() * &inner).scale_rational(c);
        }
        out
    }

    /// Action on a localized element via the quotient rule, with
    /// `∂₄Δ = 2αΔ` supplied by `rule`.
    pub fn apply_local(&self, x: &LocalElement, rule: &DeltaRule) -> LocalElement {
        if x.is_zero() {
            return LocalElement::zero();
        }
        let den = x.den();
        let mut out = LocalElement::new(self.apply(x.num()), den, x.delta_pow());
        for f in CentralFactor::ALL {
            let e = den.exponent(f);
            if e == 0 {
                continue;
            }
            let df = self.apply(&f.element());
            if df.is_zero() {
                continue;
            }
            let log_derivative = match df.try_divide_central(f) {
                Ok(q) => LocalElement::from_algebra(q),
                Err(_) => LocalElement::new(df, CentralDenominator::single(f, 1), 0),
            };
            out = &out - &x.mul(&log_derivative).scale_rational(&rat(i64::from(e)));
        }
        let c4 = self.coefficient(DerivationBasis::D4);
        if x.delta_pow() != 0 && !c4.is_zero() && !rule.alpha.is_zero() {
            let k = rat(2 * i64::from(x.delta_pow()));
            out = &out + &x.mul(&rule.alpha).scale_rational(&(k * c4));
        }
        out
    }

    /// Word-level Leibniz expansion using only the generator table.
    pub fn apply_word(&self, word: &[Generator]) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (b, c) in &self.terms {
            let (i, _) = b.parts();
            let mut sum = AlgebraElement::zero();
            for pos in 0..word.len() {
                let image = generator_image(i, word[pos]);
                if image.is_zero() {
                    continue;
                }
                let prefix = word_element(&word[..pos]);
                let suffix = word_element(&word[pos + 1..]);
                sum += &(&(&prefix * &image) * &suffix);
            }
            out += &(&b.prefactor() * &sum).scale_rational(c);
        }
        out
    }
}

impl From<DerivationBasis> for Derivation {
    fn from(b: DerivationBasis) -> Self {
        Self::basis(b)
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, c)| if c.is_one() { b.to_string() } else { format!("{} {}", c, b) })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn basis_bracket(b1: DerivationBasis, b2: DerivationBasis) -> Derivation {
    match (b1, b2) {
        (DerivationBasis::D4, DerivationBasis::D4) => Derivation::zero(),
        (DerivationBasis::D4, other) => {
            let (i, n) = other.parts();
            let mut d = Derivation::zero();
            d.add_term(DerivationBasis::with_level(i, n + 1), &rat(i64::from(n) + 2));
            if n > 0 {
                d.add_term(DerivationBasis::with_level(i, n - 1), &rat(-i64::from(n)));
            }
            d
        }
        (other, DerivationBasis::D4) => basis_bracket(DerivationBasis::D4, other).scale(&rat(-1)),
        _ => Derivation::zero(),
    }
}

/// `∂̃_i` on a normal-form element, from its diagonal action on basis elements:
/// `∂̃₁e^I = i(j−k)e^I`, `∂̃₂e^I = i(l−m)e^I`,
/// `∂̃₃e^I = ((j+k)|W|² − (l+m)|Z|²)e^I`,
/// `∂̃₄e^I = (j+k+l+m)e^I T + ε e^Î(T²−𝟙)`.
pub fn tilde_apply(i: usize, a: &AlgebraElement) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    let i_unit = GaussianRational::i();
    for (idx, c) in a.terms() {
        match i {
            1 | 2 => {
                let w = if i == 1 {
                    i64::from(idx.j) - i64::from(idx.k)
                } else {
                    i64::from(idx.l) - i64::from(idx.m)
                };
                if w != 0 {
                    out.add_term(*idx, &c.scale_gaussian(&i_unit.scale(&rat(w))));
                }
            }
            3 => {
                let zw = i64::from(idx.j + idx.k);
                let ww = i64::from(idx.l + idx.m);
                if zw != 0 {
                    let shifted = MultiIndex::new(idx.j, idx.k, idx.l + 1, idx.m + 1, idx.eps);
                    out.add_term(shifted, &c.scale(&rat(zw)));
                }
                if ww != 0 {
                    let shifted = MultiIndex::new(idx.j + 1, idx.k + 1, idx.l, idx.m, idx.eps);
                    out.add_term(shifted, &c.scale(&rat(-ww)));
                }
            }
            4 => {
                let deg = i64::from(idx.j + idx.k + idx.l + idx.m);
                let hat = MultiIndex::new(idx.j, idx.k, idx.l, idx.m, 0);
                if deg != 0 {
                    let times_t = &AlgebraElement::basis(*idx) * &AlgebraElement::t();
                    out += &times_t.scale(&c.scale(&rat(deg)));
                }
                if idx.eps == 1 {
                    // e^Î (T² − 𝟙) = −e^Î (|Z|² + |W|²)
                    let neg = -c;
                    out.add_term(MultiIndex::new(hat.j + 1, hat.k + 1, hat.l, hat.m, 0), &neg);
                    out.add_term(MultiIndex::new(hat.j, hat.k, hat.l + 1, hat.m + 1, 0), &neg);
                }
            }
            _ => panic!("no derivation ∂̃{}", i),
        }
    }
    out
}

/// `∂̃_i(g)` for a generator, straight from the defining table.
pub fn generator_image(i: usize, g: Generator) -> AlgebraElement {
    let el = AlgebraElement::generator;
    let s = |c: GaussianRational, e: AlgebraElement| e.scale(&QScalar::from_gaussian(c));
    let u = AlgebraElement::abs_z2();
    let v = AlgebraElement::abs_w2();
    let t = AlgebraElement::t();
    match (i, g) {
        (1, Generator::Z) => s(GaussianRational::i(), el(Generator::Z)),
        (1, Generator::Zs) => s(-GaussianRational::i(), el(Generator::Zs)),
        (2, Generator::W) => s(GaussianRational::i(), el(Generator::W)),
        (2, Generator::Ws) => s(-GaussianRational::i(), el(Generator::Ws)),
        (1 | 2, _) => AlgebraElement::zero(),
        (3, Generator::Z) => &el(Generator::Z) * &v,
        (3, Generator::Zs) => &el(Generator::Zs) * &v,
        (3, Generator::W) => -(&el(Generator::W) * &u),
        (3, Generator::Ws) => -(&el(Generator::Ws) * &u),
        (3, Generator::T) => AlgebraElement::zero(),
        (4, Generator::T) => &(&t * &t) - &AlgebraElement::one(),
        (4, g) => &el(g) * &t,
        _ => panic!("no derivation ∂̃{}", i),
    }
}

fn word_element(word: &[Generator]) -> AlgebraElement {
    word.iter().fold(AlgebraElement::one(), |acc, g| &acc * &AlgebraElement::generator(*g))
}

/// A defining relation `Σ c · word = 0`.
pub type Relation = Vec<(QScalar, Vec<Generator>)>;

/// The seven defining relations, as formal combinations of words.
pub fn defining_relations() -> Vec<(&'static str, Relation)> {
    use Generator::*;
    let one = QScalar::one;
    let neg = |c: QScalar| -c;
    vec![
        ("WZ - qZW", vec![(one(), vec![W, Z]), (neg(QScalar::q_pow(1)), vec![Z, W])]),
        ("W*Z - q^-1 ZW*", vec![(one(), vec![Ws, Z]), (neg(QScalar::q_pow(-1)), vec![Z, Ws])]),
        (
            "ZZ* + WW* + T^2 - 1",
            vec![(one(), vec![Z, Zs]), (one(), vec![W, Ws]), (one(), vec![T, T]), (neg(one()), vec![])],
        ),
        ("TZ - ZT", vec![(one(), vec![T, Z]), (neg(one()), vec![Z, T])]),
        ("TW - WT", vec![(one(), vec![T, W]), (neg(one()), vec![W, T])]),
        ("WW* - W*W", vec![(one(), vec![W, Ws]), (neg(one()), vec![Ws, W])]),
        ("ZZ* - Z*Z", vec![(one(), vec![Z, Zs]), (neg(one()), vec![Zs, Z])]),
    ]
}

/// Evaluate a relation in the algebra (should be zero).
pub fn relation_element(r: &Relation) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (c, w) in r {
        out += &word_element(w).scale(c);
    }
    out
}

/// Apply a derivation to a relation word by word.
pub fn apply_to_relation(d: &Derivation, r: &Relation) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (c, w) in r {
        out += &d.apply_word(w).scale(c);
    }
    out
}

/// How the formal unit `Δ` is differentiated: `∂₄Δ = 2αΔ`, all others zero.
#[derive(Clone, Debug)]
pub struct DeltaRule {
    pub alpha: LocalElement,
}

impl DeltaRule {
    pub fn new(alpha: LocalElement) -> Self {
        Self { alpha }
    }
}

impl Default for DeltaRule {
    fn default() -> Self {
        Self { alpha: LocalElement::zero() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(b: DerivationBasis) -> Derivation {
        Derivation::basis(b)
    }

    #[test]
    fn apply_examples() {
        let z = AlgebraElement::z();
        assert_eq!(tilde_apply(3, &z), &z * &AlgebraElement::abs_w2());
        let zw = &z * &AlgebraElement::w();
        let expected = (&zw * &AlgebraElement::t()).scale(&QScalar::from_int(2));
        assert_eq!(Derivation::partial(4).apply(&zw), expected);
        let u = AlgebraElement::abs_z2();
        let expected = (&u * &AlgebraElement::abs_w2()).scale(&QScalar::from_int(2));
        assert_eq!(Derivation::partial(3).apply(&u), expected);
    }

    #[test]
    fn apply_local_examples() {
        let rule = DeltaRule::default();
        let x = LocalElement::factor_pow(CentralFactor::OneMinusT2, -1);
        let t = LocalElement::from_algebra(AlgebraElement::t());
        // ∂₄(1−T²) = 2T(1−T²), so ∂₄(1−T²)⁻¹ = −2T(1−T²)⁻¹
        let expected = t.mul(&x).scale(&QScalar::from_int(-2));
        assert_eq!(Derivation::partial(4).apply_local(&x, &rule), expected);
        let inv_u = LocalElement::factor_pow(CentralFactor::AbsZ2, -1);
        assert!(Derivation::partial(1).apply_local(&inv_u, &rule).is_zero());

        let alpha = t
            .mul(&LocalElement::factor_pow(CentralFactor::OneMinusT2, 1))
            .mul(&LocalElement::factor_pow(CentralFactor::OnePlusT2, -1))
            .scale(&QScalar::from_int(-1));
        let rule = DeltaRule::new(alpha.clone());
        let delta = LocalElement::delta(1);
        let expected = delta.mul(&alpha).scale(&QScalar::from_int(2));
        assert_eq!(Derivation::partial(4).apply_local(&delta, &rule), expected);
    }

    #[test]
    fn bracket_examples() {
        assert!(Derivation::partial(1).bracket(&Derivation::partial(2)).is_zero());
        let b = Derivation::partial(4).bracket(&Derivation::partial(3));
        assert_eq!(b, d(DerivationBasis::D3(1)).scale(&rat(2)));
        let b = Derivation::partial(4).bracket(&d(DerivationBasis::D1(1)));
        let expected = d(DerivationBasis::D1(2)).scale(&rat(3)).add(&d(DerivationBasis::D1(0)).scale(&rat(-1)));
        assert_eq!(b, expected);
    }

    #[test]
    fn relations_hold_and_are_annihilated() {
        for (name, r) in defining_relations() {
            assert!(relation_element(&r).is_zero(), "{}", name);
            for b in [DerivationBasis::D1(2), DerivationBasis::D3(1), DerivationBasis::D4] {
                assert!(apply_to_relation(&d(b), &r).is_zero(), "{} {}", b, name);
            }
        }
    }

    #[test]
    fn closed_form_matches_word_expansion() {
        for idx in MultiIndex::up_to_degree(3) {
            let mut word = Vec::new();
            word.extend(std::iter::repeat_n(Generator::Z, idx.j as usize));
            word.extend(std::iter::repeat_n(Generator::Zs, idx.k as usize));
            word.extend(std::iter::repeat_n(Generator::W, idx.l as usize));
            word.extend(std::iter::repeat_n(Generator::Ws, idx.m as usize));
            word.extend(std::iter::repeat_n(Generator::T, idx.eps as usize));
            for i in 1..=4 {
                let dd = Derivation::partial(i);
                assert_eq!(dd.apply(&AlgebraElement::basis(idx)), dd.apply_word(&word), "∂{} on {}", i, idx);
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for b in [DerivationBasis::D1(0), DerivationBasis::D2(3), DerivationBasis::D3(1), DerivationBasis::D4] {
            assert_eq!(b.to_string().parse::<DerivationBasis>().unwrap(), b);
        }
        assert!("d4@1".parse::<DerivationBasis>().is_err());
        assert!("d7".parse::<DerivationBasis>().is_err());
    }
}
