//! Points of the classical coordinate chart used by the numeric oracles.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;

/// A point `(ξ₁, ξ₂, φ, ψ)` of the open chart, where
/// `z = e^{iξ₁} cos φ cos ψ`, `w = e^{iξ₂} sin φ cos ψ`, `t = sin ψ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChartPoint {
    pub xi1: f64,
    pub xi2: f64,
    pub phi: f64,
    pub psi: f64,
}

impl ChartPoint {
    /// Returns `None` unless every coordinate lies in its open range.
    pub fn new(xi1: f64, xi2: f64, phi: f64, psi: f64) -> Option<Self> {
        let open = |x: f64, lo: f64, hi: f64| x > lo && x < hi;
        (open(xi1, 0.0, 2.0 * PI)
            && open(xi2, 0.0, 2.0 * PI)
            && open(phi, 0.0, FRAC_PI_2)
            && open(psi, -FRAC_PI_2, FRAC_PI_2))
        .then_some(Self { xi1, xi2, phi, psi })
    }

    /// Uniform sample kept a little away from the chart boundary.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let margin = 0.05;
        Self {
            xi1: rng.random_range(margin..2.0 * PI - margin),
            xi2: rng.random_range(margin..2.0 * PI - margin),
            phi: rng.random_range(margin..FRAC_PI_2 - margin),
            psi: rng.random_range(-FRAC_PI_2 + margin..FRAC_PI_2 - margin),
        }
    }

    /// `|z|² = cos²φ cos²ψ`.
    pub fn abs_z2(&self) -> f64 {
        (self.phi.cos() * self.psi.cos()).powi(2)
    }

    /// `|w|² = sin²φ cos²ψ`.
    pub fn abs_w2(&self) -> f64 {
        (self.phi.sin() * self.psi.cos()).powi(2)
    }

    /// `t = sin ψ`.
    pub fn t(&self) -> f64 {
        self.psi.sin()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_points_lie_on_the_sphere() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let p = ChartPoint::random(&mut rng);
            assert!(ChartPoint::new(p.xi1, p.xi2, p.phi, p.psi).is_some());
            assert!((p.abs_z2() + p.abs_w2() + p.t() * p.t() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn boundary_is_excluded() {
        assert!(ChartPoint::new(0.0, 1.0, 0.5, 0.0).is_none());
        assert!(ChartPoint::new(1.0, 1.0, FRAC_PI_2, 0.0).is_none());
        assert!(ChartPoint::new(1.0, 1.0, 0.5, -FRAC_PI_2).is_none());
    }
}
