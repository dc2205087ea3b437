//! Curvature operator, lowered Riemann tensor, Ricci and scalar curvature,
//! and the four-dimensional Gauss–Chern–Bonnet integrand.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use num_complex::Complex64;

use crate::algebra::AlgebraElement;
use crate::central::CentralFactor;
use crate::chart::ChartPoint;
use crate::connection::ConnectionTable;
use crate::derivations::Derivation;
use crate::geometry::{Metric, ModuleVec, Perturbation};
use crate::localization::LocalElement;
use crate::scalar::QScalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurvatureError {
    #[error("contracted curvature does not match the closed form: got {got}, expected {expected}")]
    ClosedFormMismatch { got: String, expected: String },
}

/// `R(∂_p, ∂_q) E_b = ∇_p ∇_q E_b − ∇_q ∇_p E_b − ∇_{[∂_p, ∂_q]} E_b`.
pub fn curvature_op(t: &ConnectionTable, p: usize, q: usize, b: usize) -> ModuleVec {
    let dp = Derivation::partial(p);
    let dq = Derivation::partial(q);
    let eb = ModuleVec::unit(b);
    let first = t.nabla(&dp, t.entry(q, b));
    let second = t.nabla(&dq, t.entry(p, b));
    let bracket = dp.bracket(&dq);
    let third = if bracket.is_zero() { ModuleVec::zero() } else { t.nabla(&bracket, &eb) };
    first.sub(&second).sub(&third)
}

/// `R_abpq = h^δ(E_a, R(∂_p, ∂_q) E_b)` with the diagonal inverse metric.
#[derive(Clone, Debug)]
pub struct CurvatureTensor {
    lowered: BTreeMap<(usize, usize, usize, usize), LocalElement>,
    inverse_metric: [LocalElement; 4],
}

impl CurvatureTensor {
    pub fn compute(t: &ConnectionTable, h: &Metric) -> Self {
        let jobs: Vec<(usize, usize, usize)> = (1..=4)
            .flat_map(|p| (p + 1..=4).flat_map(move |q| (1..=4).map(move |b| (p, q, b))))
            .collect();
        let ops: Vec<((usize, usize, usize), ModuleVec)> =
            jobs.par_iter().map(|&(p, q, b)| ((p, q, b), curvature_op(t, p, q, b))).collect();
        let mut lowered = BTreeMap::new();
        for ((p, q, b), r) in ops {
            for a in 1..=4 {
                let c = &r.coeffs[a - 1];
                if c.is_zero() {
                    continue;
                }
                let value = h.entry(a).mul(c);
                lowered.insert((a, b, q, p), -&value);
                lowered.insert((a, b, p, q), value);
            }
        }
        let inverse_metric = std::array::from_fn(|a| h.inverse_entry(a + 1).clone());
        Self { lowered, inverse_metric }
    }

    /// `R_abpq` (1-based; zero when not stored).
    pub fn component(&self, a: usize, b: usize, p: usize, q: usize) -> LocalElement {
        self.lowered.get(&(a, b, p, q)).cloned().unwrap_or_else(LocalElement::zero)
    }

    /// All nonzero components.
    pub fn nonzero(&self) -> impl Iterator<Item = (&(usize, usize, usize, usize), &LocalElement)> {
        self.lowered.iter()
    }

    pub fn inverse_metric(&self, a: usize) -> &LocalElement {
        &self.inverse_metric[a - 1]
    }

    /// `Ric_ab = Σ_p h^{pp} R_apbp`.
    pub fn ricci(&self) -> [[LocalElement; 4]; 4] {
        std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                (1..=4).fold(LocalElement::zero(), |acc, p| {
                    let r = self.component(a + 1, p, b + 1, p);
                    if r.is_zero() {
                        acc
                    } else {
                        &acc + &self.inverse_metric(p).mul(&r)
                    }
                })
            })
        })
    }

    /// `Ric^ab = h^{aa} h^{bb} Ric_ab`.
    pub fn ricci_up(&self, ric: &[[LocalElement; 4]; 4]) -> [[LocalElement; 4]; 4] {
        std::array::from_fn(|a| {
            std::array::from_fn(|b| self.inverse_metric[a].mul(&self.inverse_metric[b]).mul(&ric[a][b]))
        })
    }

    /// `S = Σ_a h^{aa} Ric_aa`.
    pub fn scalar(&self, ric: &[[LocalElement; 4]; 4]) -> LocalElement {
        (0..4).fold(LocalElement::zero(), |acc, a| &acc + &self.inverse_metric[a].mul(&ric[a][a]))
    }

    /// `R^{abpq} R_abpq`.
    pub fn riemann_square(&self) -> LocalElement {
        self.lowered.iter().fold(LocalElement::zero(), |acc, (&(a, b, p, q), r)| {
            let up = self.inverse_metric(a)
                .mul(self.inverse_metric(b))
                .mul(self.inverse_metric(p))
                .mul(self.inverse_metric(q))
                .mul(r);
            &acc + &up.mul(r)
        })
    }

    pub fn ricci_square(&self) -> LocalElement {
        let ric = self.ricci();
        let up = self.ricci_up(&ric);
        let mut out = LocalElement::zero();
        for a in 0..4 {
            for b in 0..4 {
                out = &out + &ric[a][b].mul(&up[a][b]);
            }
        }
        out
    }

    /// `(|Riem|², |Ric|², S)` contracted in floating point from the
    /// components' classical values, or `None` when `Δ` is still present.
    pub fn classical_invariants(&self, pt: &ChartPoint, q_value: Complex64) -> Option<(f64, f64, f64)> {
        let hinv: Vec<f64> = self
            .inverse_metric
            .iter()
            .map(|h| h.classical_eval(pt, q_value).map(|z| z.re))
            .collect::<Option<_>>()?;
        let mut r = [[[[0.0f64; 4]; 4]; 4]; 4];
        for (&(a, b, p, q), x) in &self.lowered {
            r[a - 1][b - 1][p - 1][q - 1] = x.classical_eval(pt, q_value)?.re;
        }
        let mut riem = 0.0;
        let mut ric = [[0.0f64; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                for p in 0..4 {
                    ric[a][b] += hinv[p] * r[a][p][b][p];
                    for q in 0..4 {
                        riem += hinv[a] * hinv[b] * hinv[p] * hinv[q] * r[a][b][p][q].powi(2);
                    }
                }
            }
        }
        let mut ric2 = 0.0;
        let mut s = 0.0;
        for a in 0..4 {
            s += hinv[a] * ric[a][a];
            for b in 0..4 {
                ric2 += hinv[a] * hinv[b] * ric[a][b].powi(2);
            }
        }
        Some((riem, ric2, s))
    }

    /// `R^{abcd}R_abcd − 4 Ric_ab Ric^ab + S²`.
    pub fn gcb_contraction(&self) -> LocalElement {
        let s = self.scalar(&self.ricci());
        let four = QScalar::from_int(4);
        &(&self.riemann_square() - &self.ricci_square().scale(&four)) + &s.mul(&s)
    }
}

fn loc(a: AlgebraElement) -> LocalElement {
    LocalElement::from_algebra(a)
}

/// `𝟙 − (α+T)²`.
fn one_minus_shift_sq(p: &Perturbation) -> LocalElement {
    let s = p.alpha() + &loc(AlgebraElement::t());
    &LocalElement::one() - &s.mul(&s)
}

/// `𝟙 + α′`.
fn one_plus_alpha_prime(p: &Perturbation) -> LocalElement {
    &LocalElement::one() + &p.alpha_prime()
}

/// The six independent nonzero components `R_abab` (`a < b`) in closed form.
pub fn closed_form_components(p: &Perturbation) -> BTreeMap<(usize, usize), LocalElement> {
    let u = loc(AlgebraElement::abs_z2());
    let v = loc(AlgebraElement::abs_w2());
    let omt = |n: i32| LocalElement::factor_pow(CentralFactor::OneMinusT2, n);
    let a = one_minus_shift_sq(p).mul(p.delta());
    let b = one_plus_alpha_prime(p).mul(p.delta());
    let uv = u.mul(&v);
    BTreeMap::from([
        ((1, 2), a.mul(&uv).mul(&omt(3))),
        ((1, 3), a.mul(&uv).mul(&u).mul(&omt(2))),
        ((1, 4), b.mul(&u).mul(&omt(3))),
        ((2, 3), a.mul(&uv).mul(&v).mul(&omt(2))),
        ((2, 4), b.mul(&v).mul(&omt(3))),
        ((3, 4), b.mul(&uv).mul(&omt(2))),
    ])
}

/// The full closed-form lowered tensor: the six components and their
/// `(a,b)`/`(p,q)` antisymmetric orbit.
pub fn closed_form_tensor(p: &Perturbation) -> BTreeMap<(usize, usize, usize, usize), LocalElement> {
    let mut out = BTreeMap::new();
    for ((a, b), r) in closed_form_components(p) {
        let neg = -&r;
        out.insert((a, b, a, b), r.clone());
        out.insert((b, a, b, a), r);
        out.insert((a, b, b, a), neg.clone());
        out.insert((b, a, a, b), neg);
    }
    out
}

/// `24(𝟙−(α+T)²)(𝟙+α′)(𝟙−T²)⁻¹δ⁻²`.
pub fn closed_form_integrand(p: &Perturbation) -> LocalElement {
    let delta_inv = p.delta().invert().expect("perturbations are units");
    one_minus_shift_sq(p)
        .mul(&one_plus_alpha_prime(p))
        .mul(&LocalElement::factor_pow(CentralFactor::OneMinusT2, -1))
        .mul(&delta_inv)
        .mul(&delta_inv)
        .scale(&QScalar::from_int(24))
}

/// The contraction, checked against its closed form.
pub fn gcb_integrand(ct: &CurvatureTensor, p: &Perturbation) -> Result<LocalElement, CurvatureError> {
    let got = ct.gcb_contraction();
    let expected = closed_form_integrand(p);
    if got == expected {
        Ok(got)
    } else {
        Err(CurvatureError::ClosedFormMismatch { got: got.to_string(), expected: expected.to_string() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::{closed_form_connection, solve_connection};

    fn setup(p: &Perturbation) -> (ConnectionTable, Metric) {
        let h = Metric::new(p.clone()).unwrap();
        (closed_form_connection(p, None), h)
    }

    #[test]
    fn operator_examples() {
        let p = Perturbation::identity();
        let (t, _) = setup(&p);
        let u = loc(AlgebraElement::abs_z2());
        let omt = LocalElement::factor_pow(CentralFactor::OneMinusT2, 1);
        let coeff = -one_minus_shift_sq(&p).mul(&u).mul(&omt);
        assert_eq!(curvature_op(&t, 1, 2, 1), ModuleVec::basis_times(2, coeff));
        assert!(curvature_op(&t, 1, 2, 3).is_zero());

        let p = Perturbation::one_plus_t2_pow(1);
        let (t, _) = setup(&p);
        let coeff = one_plus_alpha_prime(&p).mul(&omt);
        assert_eq!(curvature_op(&t, 3, 4, 4), ModuleVec::basis_times(3, coeff));
    }

    #[test]
    fn antisymmetry() {
        let p = Perturbation::one_plus_t2_pow(1);
        let (t, _) = setup(&p);
        for b in 1..=4 {
            let r = curvature_op(&t, 1, 4, b);
            let s = curvature_op(&t, 4, 1, b);
            assert!(r.add(&s).is_zero());
        }
    }

    #[test]
    fn identity_components_and_scalar() {
        let p = Perturbation::identity();
        let (t, h) = setup(&p);
        let ct = CurvatureTensor::compute(&t, &h);
        let u = AlgebraElement::abs_z2();
        let v = AlgebraElement::abs_w2();
        let omt = CentralFactor::OneMinusT2.element();
        let expected = loc(&(&u * &v) * &omt.pow(4));
        assert_eq!(ct.component(1, 2, 1, 2), expected);
        let expected = loc(&(&u * &v) * &omt.pow(2));
        assert_eq!(ct.component(3, 4, 3, 4), expected);
        assert!(ct.component(1, 2, 1, 3).is_zero());
        let ric = ct.ricci();
        assert_eq!(ct.scalar(&ric), LocalElement::from_int(12));
        assert!(ric[0][1].is_zero());
        for a in 1..=4 {
            assert_eq!(ric[a - 1][a - 1], h.entry(a).scale(&QScalar::from_int(3)));
        }
        assert_eq!(gcb_integrand(&ct, &p).unwrap(), LocalElement::from_int(24));
    }

    #[test]
    fn classical_limit_invariants() {
        use rand::SeedableRng;
        let p = Perturbation::identity();
        let (t, h) = setup(&p);
        let ct = CurvatureTensor::compute(&t, &h);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let pt = ChartPoint::random(&mut rng);
            let (riem, ric, s) = ct.classical_invariants(&pt, Complex64::new(1.0, 0.0)).unwrap();
            assert!((riem - 24.0).abs() < 1e-9 && (ric - 36.0).abs() < 1e-9 && (s * s - 144.0).abs() < 1e-9);
        }
    }

    #[test]
    fn solved_connection_gives_table() {
        let p = Perturbation::one_plus_t2_pow(1);
        let h = Metric::new(p.clone()).unwrap();
        let ct = CurvatureTensor::compute(&solve_connection(&h), &h);
        let expected = closed_form_tensor(&p);
        assert_eq!(ct.nonzero().count(), expected.len());
        for (k, v) in &expected {
            assert_eq!(&ct.component(k.0, k.1, k.2, k.3), v, "{:?}", k);
        }
        assert!(gcb_integrand(&ct, &p).is_ok());
    }
}
