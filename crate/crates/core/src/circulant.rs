//! Circulant 2×2 matrices `[[L1, L2], [L2, L1]]` over the complex Clifford
//! algebra.
//!
//! Circulant matrices are closed under products. They diagonalise on the
//! sum `L1 + L2` and difference `L1 - L2` channels: the product of two
//! circulants multiplies sums with sums and differences with differences.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::clifford::Multivector;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CirculantPair {
    pub first: Multivector,
    pub second: Multivector,
}

impl CirculantPair {
    pub fn new(first: Multivector, second: Multivector) -> Self {
        assert_eq!(first.dim(), second.dim(), "circulant entries must share a dimension");
        CirculantPair { first, second }
    }

    pub fn zero(dim: usize) -> Self {
        CirculantPair::new(Multivector::zero(dim), Multivector::zero(dim))
    }

    /// `[[1, 0], [0, 1]]`.
    pub fn identity(dim: usize) -> Self {
        CirculantPair::new(Multivector::one(dim), Multivector::zero(dim))
    }

    /// Diagonal matrix `[[L, 0], [0, L]]`.
    pub fn diagonal(value: Multivector) -> Self {
        let dim = value.dim();
        CirculantPair::new(value, Multivector::zero(dim))
    }

    /// The matrix `½[[a + b, -a + b], [-a + b, a + b]]` used for `ν̲`, `α̲`,
    /// `β̲`, `H` and `A̲`. Its sum channel is `b`, its difference channel `a`.
    pub fn from_orthogonal_pair(a: &Multivector, b: &Multivector) -> Self {
        CirculantPair::new((a + b).scale_real(0.5), (b - a).scale_real(0.5))
    }

    /// Rebuilds from sum `u = L1 + L2` and difference `v = L1 - L2`.
    pub fn from_sum_diff(sum: &Multivector, diff: &Multivector) -> Self {
        CirculantPair::new((sum + diff).scale_real(0.5), (sum - diff).scale_real(0.5))
    }

    pub fn dim(&self) -> usize {
        self.first.dim()
    }

    pub fn sum_part(&self) -> Multivector {
        &self.first + &self.second
    }

    pub fn diff_part(&self) -> Multivector {
        &self.first - &self.second
    }

    /// Matrix product `[[a1, a2],[a2, a1]] [[b1, b2],[b2, b1]]`.
    pub fn product(&self, rhs: &CirculantPair) -> CirculantPair {
        let first = &(&self.first * &rhs.first) + &(&self.second * &rhs.second);
        let second = &(&self.first * &rhs.second) + &(&self.second * &rhs.first);
        CirculantPair { first, second }
    }

    pub fn scale(&self, factor: Complex64) -> CirculantPair {
        CirculantPair { first: self.first.scale(factor), second: self.second.scale(factor) }
    }

    pub fn scale_real(&self, factor: f64) -> CirculantPair {
        CirculantPair { first: self.first.scale_real(factor), second: self.second.scale_real(factor) }
    }

    /// Entrywise Hermitean conjugate of the (symmetric) matrix.
    pub fn dagger(&self) -> CirculantPair {
        CirculantPair { first: self.first.hermitean_dagger(), second: self.second.hermitean_dagger() }
    }

    /// `|L1|² + |L2|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.first.norm_sqr() + self.second.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn distance(&self, other: &CirculantPair) -> f64 {
        (self.first.distance(&other.first).powi(2) + self.second.distance(&other.second).powi(2)).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.first.coeffs().iter().chain(self.second.coeffs()).all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

impl Add for &CirculantPair {
    type Output = CirculantPair;
    fn add(self, rhs: &CirculantPair) -> CirculantPair {
        CirculantPair { first: &self.first + &rhs.first, second: &self.second + &rhs.second }
    }
}

impl Sub for &CirculantPair {
    type Output = CirculantPair;
    fn sub(self, rhs: &CirculantPair) -> CirculantPair {
        CirculantPair { first: &self.first - &rhs.first, second: &self.second - &rhs.second }
    }
}

impl Neg for &CirculantPair {
    type Output = CirculantPair;
    fn neg(self) -> CirculantPair {
        self.scale_real(-1.0)
    }
}

impl Mul for &CirculantPair {
    type Output = CirculantPair;
    fn mul(self, rhs: &CirculantPair) -> CirculantPair {
        self.product(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_mv(rng: &mut ChaCha8Rng, dim: usize) -> Multivector {
        let coeffs = (0..1 << dim).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        Multivector::from_coeffs(dim, coeffs).unwrap()
    }

    #[test]
    fn product_acts_channelwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = CirculantPair::new(random_mv(&mut rng, 4), random_mv(&mut rng, 4));
        let b = CirculantPair::new(random_mv(&mut rng, 4), random_mv(&mut rng, 4));
        let p = &a * &b;
        assert!(p.sum_part().max_abs_diff(&(&a.sum_part() * &b.sum_part())) < 1e-13);
        assert!(p.diff_part().max_abs_diff(&(&a.diff_part() * &b.diff_part())) < 1e-13);
    }

    #[test]
    fn orthogonal_pair_channels() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let a = random_mv(&mut rng, 2);
        let b = random_mv(&mut rng, 2);
        let m = CirculantPair::from_orthogonal_pair(&a, &b);
        assert!(m.sum_part().max_abs_diff(&b) < 1e-15);
        assert!(m.diff_part().max_abs_diff(&a) < 1e-15);
    }

    #[test]
    fn identity_is_neutral() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let a = CirculantPair::new(random_mv(&mut rng, 2), random_mv(&mut rng, 2));
        assert_eq!(&CirculantPair::identity(2) * &a, a);
    }
}
