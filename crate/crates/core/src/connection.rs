//! The Levi-Civita connection of `(M, h^δ)`: Koszul solver, closed-form
//! table, projector-induced connection and the defining predicates.

use num_traits::Zero;
use rayon::prelude::*;

use crate::algebra::AlgebraElement;
use crate::central::CentralFactor;
use crate::derivations::{DeltaRule, Derivation, DerivationBasis};
use crate::geometry::{phi_map, Ambient5, Metric, ModuleVec, Perturbation, Projector};
use crate::localization::LocalElement;
use crate::scalar::{ratio, QScalar};

/// `∇_{∂_a} E_b` for `a, b ∈ 1..=4`; everything else follows from the
/// Leibniz rule and `∇_{D_i(n)} E_b = (∇_i E_b) Tⁿ`.
#[derive(Clone, Debug)]
pub struct ConnectionTable {
    gamma: [[ModuleVec; 4]; 4],
    rule: DeltaRule,
}

impl ConnectionTable {
    pub fn new(gamma: [[ModuleVec; 4]; 4], rule: DeltaRule) -> Self {
        Self { gamma, rule }
    }

    /// `∇_a E_b` (1-based).
    pub fn entry(&self, a: usize, b: usize) -> &ModuleVec {
        &self.gamma[a - 1][b - 1]
    }

    pub fn set_entry(&mut self, a: usize, b: usize, value: ModuleVec) {
        self.gamma[a - 1][b - 1] = value;
    }

    pub fn rule(&self) -> &DeltaRule {
        &self.rule
    }

    /// `∇_{D} E_b` for a tower basis derivation.
    pub fn nabla_basis(&self, d: DerivationBasis, b: usize) -> ModuleVec {
        let (i, n) = d.parts();
        let base = self.entry(i, b);
        if n == 0 {
            base.clone()
        } else {
            base.right_mul(&LocalElement::from_algebra(AlgebraElement::t().pow(n)))
        }
    }

    /// `∇_d U` with `∇_d(E_b f) = (∇_d E_b) f + E_b d(f)`.
    pub fn nabla(&self, d: &Derivation, u: &ModuleVec) -> ModuleVec {
        let mut out = ModuleVec::zero();
        for (b, f) in u.coeffs.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            for (basis, c) in d.terms() {
                let term = self.nabla_basis(*basis, b + 1).right_mul(f).scale_rational(c);
                out = out.add(&term);
            }
            let df = d.apply_local(f, &self.rule);
            if !df.is_zero() {
                out = out.add(&ModuleVec::basis_times(b + 1, df));
            }
        }
        out
    }

    /// Entry-by-entry exact equality; returns the first differing `(a, b)`.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        for a in 1..=4 {
            for b in 1..=4 {
                if self.entry(a, b) != other.entry(a, b) {
                    return Some((a, b));
                }
            }
        }
        None
    }
}

/// `2h(∇_a E_b, E_c)` from the six-term Koszul formula.
pub fn koszul_rhs(h: &Metric, a: usize, b: usize, c: usize) -> LocalElement {
    let rule = h.perturbation().rule();
    let d = Derivation::partial;
    let e = ModuleVec::unit;
    let hv = |x: usize, y: usize| h.eval(&e(x), &e(y));
    let bracket_term = |x: usize, y: usize, z: usize| h.eval(&e(x), &phi_map(&d(y).bracket(&d(z))));
    let mut k = d(a).apply_local(&hv(b, c), &rule);
    k = &k + &d(b).apply_local(&hv(a, c), &rule);
    k = &k - &d(c).apply_local(&hv(a, b), &rule);
    k = &k - &bracket_term(a, b, c);
    k = &k + &bracket_term(b, c, a);
    k = &k + &bracket_term(c, a, b);
    k
}

/// Solve the Koszul formula in the orthogonal basis:
/// `(∇_a E_b)^c = (h^δ_cc)⁻¹ (K_abc / 2)*`.
pub fn solve_connection(h: &Metric) -> ConnectionTable {
    let half = ratio(1, 2);
    let entries: Vec<ModuleVec> = (0..16)
        .into_par_iter()
        .map(|n| {
            let (a, b) = (n / 4 + 1, n % 4 + 1);
            let mut v = ModuleVec::zero();
            for c in 1..=4 {
                let k = koszul_rhs(h, a, b, c);
                if !k.is_zero() {
                    v.coeffs[c - 1] = h.inverse_entry(c).mul(&k.scale_rational(&half).star());
                }
            }
            v
        })
        .collect();
    let mut it = entries.into_iter();
    let gamma = std::array::from_fn(|_| std::array::from_fn(|_| it.next().expect("16 entries")));
    ConnectionTable::new(gamma, h.perturbation().rule())
}

/// The closed-form Levi-Civita connection.
///
/// With `general_alpha = Some([α₁, α₂, α₃, α₄])` the table for
/// `∂_a δ = 2α_a δ` is produced; otherwise `α₁ = α₂ = α₃ = 0` and `α₄` is
/// taken from the perturbation.
pub fn closed_form_connection(p: &Perturbation, general_alpha: Option<&[LocalElement; 4]>) -> ConnectionTable {
    let zero = <LocalElement as Zero>::zero;
    let [a1, a2, a3, a4] = match general_alpha {
        Some(al) => al.clone(),
        None => [zero(), zero(), zero(), p.alpha().clone()],
    };
    let loc = LocalElement::from_algebra;
    let t = loc(AlgebraElement::t());
    let u = loc(AlgebraElement::abs_z2());
    let v = loc(AlgebraElement::abs_w2());
    let omt = LocalElement::factor_pow(CentralFactor::OneMinusT2, 1);
    let inv = |f| LocalElement::factor_pow(f, -1);
    let (u_inv, v_inv, omt_inv) =
        (inv(CentralFactor::AbsZ2), inv(CentralFactor::AbsW2), inv(CentralFactor::OneMinusT2));
    let one = LocalElement::one();
    let a4_t = &a4 + &t;
    let a4_3t = &a4 + &t.scale(&QScalar::from_int(3));

    let vec = |c: [LocalElement; 4]| ModuleVec { coeffs: c };
    let n11 = vec([
        a1.clone(),
        -a2.mul(&u).mul(&v_inv),
        -(&a3.mul(&v_inv) + &one).mul(&omt),
        -a4_t.mul(&u).mul(&omt),
    ]);
    let n12 = vec([a2.clone(), a1.clone(), zero(), zero()]);
    let n13 = vec([&a3 + &v, zero(), a1.clone(), zero()]);
    let n14 = vec([a4_t.clone(), zero(), zero(), a1.clone()]);
    let n41 = vec([a4_3t.clone(), zero(), zero(), a1.clone()]);
    let n22 = vec([
        -a1.mul(&v).mul(&u_inv),
        a2.clone(),
        -(&a3.mul(&u_inv) - &one).mul(&omt),
        -a4_t.mul(&v).mul(&omt),
    ]);
    let n23 = vec([zero(), &a3 - &u, a2.clone(), zero()]);
    let n24 = vec([zero(), a4_t.clone(), zero(), a2.clone()]);
    let n42 = vec([zero(), a4_3t.clone(), zero(), a2.clone()]);
    let n33 = vec([
        -a1.mul(&v).mul(&omt_inv),
        -a2.mul(&u).mul(&omt_inv),
        &(&a3 + &v) - &u,
        -a4_t.mul(&u).mul(&v),
    ]);
    let n34 = vec([zero(), zero(), a4_t.clone(), a3.clone()]);
    let n43 = vec([zero(), zero(), a4_3t, a3.clone()]);
    let n44 = vec([
        -a1.mul(&u_inv).mul(&omt_inv),
        -a2.mul(&v_inv).mul(&omt_inv),
        -a3.mul(&u_inv).mul(&v_inv),
        a4_t,
    ]);
    let gamma = [
        [n11, n12.clone(), n13.clone(), n14],
        [n12, n22, n23.clone(), n24],
        [n13, n23, n33, n34],
        [n41, n42, n43, n44],
    ];
    let rule = DeltaRule::new(p.alpha().clone());
    ConnectionTable::new(gamma, rule)
}

/// Derivations used to test metric compatibility.
pub fn compatibility_derivations() -> Vec<Derivation> {
    let mut ds: Vec<Derivation> = (1..=4).map(Derivation::partial).collect();
    ds.push(Derivation::basis(DerivationBasis::D1(1)));
    ds.push(Derivation::basis(DerivationBasis::D3(1)));
    ds
}

/// Derivations used to test vanishing torsion.
pub fn torsion_derivations() -> Vec<Derivation> {
    let mut ds: Vec<Derivation> = (1..=4).map(Derivation::partial).collect();
    ds.push(Derivation::basis(DerivationBasis::D1(1)));
    ds.push(Derivation::basis(DerivationBasis::D2(1)));
    ds.push(Derivation::basis(DerivationBasis::D3(1)));
    ds
}

/// `d h(E_a, E_b) = h(∇_d E_a, E_b) + h(E_a, ∇_d E_b)`.
pub fn metric_defect(t: &ConnectionTable, h: &Metric, d: &Derivation, a: usize, b: usize) -> LocalElement {
    let rule = h.perturbation().rule();
    let ea = ModuleVec::unit(a);
    let eb = ModuleVec::unit(b);
    let lhs = d.apply_local(&h.eval(&ea, &eb), &rule);
    let rhs = &h.eval(&t.nabla(d, &ea), &eb) + &h.eval(&ea, &t.nabla(d, &eb));
    &lhs - &rhs
}

pub fn check_metric_compatibility(t: &ConnectionTable, h: &Metric) -> bool {
    compatibility_derivations().par_iter().all(|d| {
        (1..=4).all(|a| (a..=4).all(|b| metric_defect(t, h, d, a, b).is_zero()))
    })
}

/// `∇_{d₁}φ(d₂) − ∇_{d₂}φ(d₁) − φ([d₁, d₂])`.
pub fn torsion(t: &ConnectionTable, d1: &Derivation, d2: &Derivation) -> ModuleVec {
    t.nabla(d1, &phi_map(d2))
        .sub(&t.nabla(d2, &phi_map(d1)))
        .sub(&phi_map(&d1.bracket(d2)))
}

pub fn check_torsion_free(t: &ConnectionTable) -> bool {
    let ds = torsion_derivations();
    let pairs: Vec<(usize, usize)> = (0..ds.len()).flat_map(|i| (i + 1..ds.len()).map(move |j| (i, j))).collect();
    pairs.par_iter().all(|&(i, j)| torsion(t, &ds[i], &ds[j]).is_zero())
}

/// `∇̄_d U = P(e_i d(U^i))`.
pub fn projector_connection(p: &Projector, d: &Derivation, u: &Ambient5) -> Ambient5 {
    let rule = DeltaRule::default();
    let du = Ambient5 { comps: std::array::from_fn(|i| d.apply_local(&u.comps[i], &rule)) };
    p.apply(&du)
}
