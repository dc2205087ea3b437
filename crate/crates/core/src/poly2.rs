//! Polynomials in the chart variables `s = cos²φ` and `t = sinψ`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::scalar::QScalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Var {
    S,
    T,
}

/// `Σ c_{ik} s^i t^k`.
#[derive(Clone, Debug, Default, PartialEq)]
pub(crate) struct Poly2 {
    terms: BTreeMap<(u32, u32), QScalar>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: QScalar) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(i: u32, k: u32, c: QScalar) -> Self {
        let mut p = Self::zero();
        p.add_term((i, k), &c);
        p
    }

    /// `c0 + c1·x` in one variable.
    pub fn linear(var: Var, c0: i64, c1: i64) -> Self {
        let key = match var {
            Var::S => (1, 0),
            Var::T => (0, 1),
        };
        let mut p = Self::constant(QScalar::from_int(c0));
        p.add_term(key, &QScalar::from_int(c1));
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    #[cfg(test)]
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &QScalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, key: (u32, u32), c: &QScalar) {
        let slot = self.terms.entry(key).or_insert_with(QScalar::zero);
        *slot = &*slot + c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((i1, k1), c1) in &self.terms {
            for ((i2, k2), c2) in &other.terms {
                out.add_term((i1 + i2, k1 + k2), &(c1 * c2));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(QScalar::from_int(1)), |acc, _| acc.mul(self))
    }

    /// Exact quotient by `(x − root)`, or `None` when there is a remainder.
    pub fn div_root(&self, var: Var, root: i64) -> Option<Self> {
        let split = |key: (u32, u32)| match var {
            Var::S => (key.1, key.0),
            Var::T => (key.0, key.1),
        };
        let join = |other: u32, e: u32| match var {
            Var::S => (e, other),
            Var::T => (other, e),
        };
        let mut columns: BTreeMap<u32, BTreeMap<u32, QScalar>> = BTreeMap::new();
        for (key, c) in &self.terms {
            let (other, e) = split(*key);
            columns.entry(other).or_default().insert(e, c.clone());
        }
        let r = QScalar::from_int(root);
        let mut out = Self::zero();
        for (other, col) in columns {
            let top = *col.keys().next_back().expect("nonempty column");
            let mut carry = QScalar::zero();
            for e in (0..=top).rev() {
                let value = &col.get(&e).cloned().unwrap_or_else(QScalar::zero) + &carry;
                if e == 0 {
                    if !value.is_zero() {
                        return None;
                    }
                } else {
                    out.add_term(join(other, e - 1), &value);
                    carry = &value * &r;
                }
            }
        }
        Some(out)
    }

    /// Exact quotient by one of `s`, `1−s`, `1−t`, `1+t`.
    pub fn div_linear(&self, factor: LinearFactor) -> Option<Self> {
        let (var, root, flip) = factor.root();
        let q = self.div_root(var, root)?;
        Some(if flip { q.neg() } else { q })
    }

    pub fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }

    /// `∫₀¹ ds`, as coefficients of `t^k`.
    pub fn integrate_s(&self) -> BTreeMap<u32, QScalar> {
        let mut out: BTreeMap<u32, QScalar> = BTreeMap::new();
        for ((i, k), c) in &self.terms {
            let v = c.scale(&crate::scalar::ratio(1, i64::from(*i) + 1));
            let slot = out.entry(*k).or_insert_with(QScalar::zero);
            *slot = &*slot + &v;
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Substitute `t = t0`, leaving a polynomial in `s`.
    pub fn at_t(&self, t0: i64) -> Self {
        let mut out = Self::zero();
        for ((i, k), c) in &self.terms {
            let f = t0.pow(*k);
            out.add_term((*i, 0), &c.scale(&crate::scalar::rat(f)));
        }
        out
    }

    /// The constant term when the polynomial has no other terms.
    pub fn as_constant(&self) -> Option<QScalar> {
        match self.terms.len() {
            0 => Some(QScalar::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum LinearFactor {
    S,
    OneMinusS,
    OneMinusT,
    OnePlusT,
}

impl LinearFactor {
    #[cfg(test)]
    pub const ALL: [LinearFactor; 4] =
        [LinearFactor::S, LinearFactor::OneMinusS, LinearFactor::OneMinusT, LinearFactor::OnePlusT];

    fn root(self) -> (Var, i64, bool) {
        match self {
            LinearFactor::S => (Var::S, 0, false),
            LinearFactor::OneMinusS => (Var::S, 1, true),
            LinearFactor::OneMinusT => (Var::T, 1, true),
            LinearFactor::OnePlusT => (Var::T, -1, false),
        }
    }

    pub fn poly(self) -> Poly2 {
        match self {
            LinearFactor::S => Poly2::linear(Var::S, 0, 1),
            LinearFactor::OneMinusS => Poly2::linear(Var::S, 1, -1),
            LinearFactor::OneMinusT => Poly2::linear(Var::T, 1, -1),
            LinearFactor::OnePlusT => Poly2::linear(Var::T, 1, 1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LinearFactor::S => "s",
            LinearFactor::OneMinusS => "1-s",
            LinearFactor::OneMinusT => "1-t",
            LinearFactor::OnePlusT => "1+t",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_round_trip() {
        let p = Poly2::linear(Var::S, 2, 3).mul(&Poly2::linear(Var::T, -1, 5)).mul(&Poly2::monomial(1, 2, QScalar::q_pow(1)));
        for f in LinearFactor::ALL {
            let prod = p.mul(&f.poly());
            assert_eq!(prod.div_linear(f).unwrap(), p);
        }
        assert!(Poly2::linear(Var::T, 1, 1).div_linear(LinearFactor::OneMinusT).is_none());
        assert!(Poly2::constant(QScalar::from_int(1)).div_linear(LinearFactor::S).is_none());
    }

    #[test]
    fn s_integral() {
        let p = Poly2::monomial(2, 1, QScalar::from_int(3));
        let i = p.integrate_s();
        assert_eq!(i.get(&1), Some(&QScalar::from_int(1)));
    }
}
