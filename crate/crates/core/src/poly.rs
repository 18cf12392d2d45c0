//! Polynomials in `x_1..x_n, y_1..y_n` with multivector coefficients and
//! exact Dirac-type differentiation.
//!
//! All operators act by left multiplication of their basis elements on the
//! coefficients.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;

use crate::clifford::{Multivector, VectorR2n, MAX_DIM};
use crate::error::{Error, Result};
use crate::hermitean::WittBasis;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Exponent tuple over `(x_1..x_n, y_1..y_n)`.
pub type Exponents = Vec<u32>;

#[derive(Clone, Debug, PartialEq)]
pub struct MultivectorPolynomial {
    n: usize,
    terms: BTreeMap<Exponents, Multivector>,
}

impl MultivectorPolynomial {
    pub fn zero(n: usize) -> Self {
        assert!(n >= 1 && 2 * n <= MAX_DIM);
        MultivectorPolynomial { n, terms: BTreeMap::new() }
    }

    pub fn constant(coeff: Multivector) -> Result<Self> {
        let n = coeff.dim() / 2;
        let mut p = Self::zero(n);
        p.add_term(vec![0; 2 * n], coeff)?;
        Ok(p)
    }

    /// The vector variable `X = Σ e_j x_j + e_{n+j} y_j` as a polynomial.
    pub fn vector_variable(n: usize) -> Self {
        let mut p = Self::zero(n);
        for k in 0..2 * n {
            let mut exps = vec![0; 2 * n];
            exps[k] = 1;
            p.add_term(exps, Multivector::generator(2 * n, k + 1)).unwrap();
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Multivector)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Adds `coeff * monomial`; cancelled terms are dropped.
    pub fn add_term(&mut self, exps: Exponents, coeff: Multivector) -> Result<()> {
        if exps.len() != 2 * self.n {
            return Err(Error::DimensionMismatch { expected: 2 * self.n, found: exps.len() });
        }
        if coeff.dim() != 2 * self.n {
            return Err(Error::DimensionMismatch { expected: 2 * self.n, found: coeff.dim() });
        }
        if coeff.is_zero() {
            return Ok(());
        }
        let remove = {
            let entry = self.terms.entry(exps.clone()).or_insert_with(|| Multivector::zero(2 * self.n));
            *entry += &coeff;
            entry.is_zero()
        };
        if remove {
            self.terms.remove(&exps);
        }
        Ok(())
    }

    /// Random polynomial of total degree `<= degree` with `terms` monomials
    /// and random complex coefficients in `[-1, 1]`.
    pub fn random<R: Rng>(n: usize, degree: u32, terms: usize, rng: &mut R) -> Self {
        let mut p = Self::zero(n);
        for _ in 0..terms {
            let total = rng.gen_range(0..=degree);
            let mut exps = vec![0u32; 2 * n];
            for _ in 0..total {
                exps[rng.gen_range(0..2 * n)] += 1;
            }
            let coeffs = (0..1usize << (2 * n))
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            p.add_term(exps, Multivector::from_coeffs(2 * n, coeffs).unwrap()).unwrap();
        }
        p
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone()).unwrap();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.scale(factor)).unwrap();
        }
        out
    }

    /// `a * P` with `a` acting on the left of every coefficient.
    pub fn left_mul(&self, a: &Multivector) -> Self {
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), a * c).unwrap();
        }
        out
    }

    /// Exact partial derivative in variable `k` (`k < n` is `x_{k+1}`,
    /// otherwise `y_{k+1-n}`).
    pub fn partial(&self, k: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            if e[k] == 0 {
                continue;
            }
            let mut de = e.clone();
            de[k] -= 1;
            out.add_term(de, c.scale_real(e[k] as f64)).unwrap();
        }
        out
    }

    pub fn evaluate(&self, x: &VectorR2n) -> Multivector {
        let mut out = Multivector::zero(2 * self.n);
        for (e, c) in &self.terms {
            let mono: f64 = e.iter().zip(x.components()).map(|(&p, &v)| v.powi(p as i32)).product();
            out += &c.scale_real(mono);
        }
        out
    }

    /// Largest coefficient modulus, used to normalise residuals.
    pub fn max_coeff(&self) -> f64 {
        self.terms
            .values()
            .flat_map(|m| m.coeffs().iter().map(|c| c.norm()))
            .fold(0.0, f64::max)
    }

    fn dim(&self) -> usize {
        2 * self.n
    }
}

/// `∂_X = Σ e_j ∂_{x_j} + e_{n+j} ∂_{y_j}`.
pub fn dirac(p: &MultivectorPolynomial) -> MultivectorPolynomial {
    let mut out = MultivectorPolynomial::zero(p.n);
    for k in 0..p.dim() {
        out = out.add(&p.partial(k).left_mul(&Multivector::generator(p.dim(), k + 1)));
    }
    out
}

/// `∂_{X|} = Σ e_j ∂_{y_j} - e_{n+j} ∂_{x_j}`.
pub fn dirac_j(p: &MultivectorPolynomial) -> MultivectorPolynomial {
    let n = p.n;
    let dim = p.dim();
    let mut out = MultivectorPolynomial::zero(n);
    for j in 0..n {
        let ej = Multivector::generator(dim, j + 1);
        let enj = Multivector::generator(dim, n + j + 1);
        out = out.add(&p.partial(n + j).left_mul(&ej));
        out = out.sub(&p.partial(j).left_mul(&enj));
    }
    out
}

/// `∂_{z_j} = ½(∂_{x_j} - i ∂_{y_j})`, 0-based `j`.
fn cauchy_riemann(p: &MultivectorPolynomial, j: usize) -> MultivectorPolynomial {
    p.partial(j).sub(&p.partial(p.n + j).scale(I)).scale(Complex64::new(0.5, 0.0))
}

/// `∂_{z_j^c} = ½(∂_{x_j} + i ∂_{y_j})`, 0-based `j`.
fn cauchy_riemann_conj(p: &MultivectorPolynomial, j: usize) -> MultivectorPolynomial {
    p.partial(j).add(&p.partial(p.n + j).scale(I)).scale(Complex64::new(0.5, 0.0))
}

/// `∂_Z = Σ f_j† ∂_{z_j}`.
pub fn dirac_z(p: &MultivectorPolynomial) -> MultivectorPolynomial {
    let witt = WittBasis::new(p.n).expect("valid n");
    let mut out = MultivectorPolynomial::zero(p.n);
    for j in 0..p.n {
        out = out.add(&cauchy_riemann(p, j).left_mul(witt.f_dag(j + 1)));
    }
    out
}

/// `∂_{Z†} = Σ f_j ∂_{z_j^c}`.
pub fn dirac_zdag(p: &MultivectorPolynomial) -> MultivectorPolynomial {
    let witt = WittBasis::new(p.n).expect("valid n");
    let mut out = MultivectorPolynomial::zero(p.n);
    for j in 0..p.n {
        out = out.add(&cauchy_riemann_conj(p, j).left_mul(witt.f(j + 1)));
    }
    out
}

/// `Δ_{2n} = Σ ∂²`.
pub fn laplacian(p: &MultivectorPolynomial) -> MultivectorPolynomial {
    let mut out = MultivectorPolynomial::zero(p.n);
    for k in 0..p.dim() {
        out = out.add(&p.partial(k).partial(k));
    }
    out
}

/// Largest coefficient modulus of `a - b`.
pub fn max_difference(a: &MultivectorPolynomial, b: &MultivectorPolynomial) -> f64 {
    a.sub(b).max_coeff()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn dirac_of_vector_variable_is_minus_2n() {
        for n in 1..=3 {
            let x = MultivectorPolynomial::vector_variable(n);
            let d = dirac(&x);
            let expected = MultivectorPolynomial::constant(Multivector::scalar(2 * n, Complex64::new(-2.0 * n as f64, 0.0))).unwrap();
            assert_eq!(d, expected);
        }
    }

    #[test]
    fn dirac_of_constant_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = MultivectorPolynomial::random(2, 0, 1, &mut rng);
        assert!(dirac(&c).is_empty());
        assert!(dirac_z(&c).is_empty());
    }

    #[test]
    fn witt_form_matches_orthogonal_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = MultivectorPolynomial::random(2, 3, 6, &mut rng);
        let dz = dirac(&p).sub(&dirac_j(&p).scale(I)).scale(Complex64::new(-0.25, 0.0));
        let dzd = dirac(&p).add(&dirac_j(&p).scale(I)).scale(Complex64::new(0.25, 0.0));
        assert!(max_difference(&dz, &dirac_z(&p)) < 1e-14);
        assert!(max_difference(&dzd, &dirac_zdag(&p)) < 1e-14);
    }

    #[test]
    fn evaluation_and_partials() {
        let x = MultivectorPolynomial::vector_variable(1);
        let pt = VectorR2n::new(vec![2.0, -3.0]).unwrap();
        let v = x.evaluate(&pt);
        assert_eq!(v.coeffs()[1], Complex64::new(2.0, 0.0));
        assert_eq!(v.coeffs()[2], Complex64::new(-3.0, 0.0));
        let sq = x.left_mul(&Multivector::one(2));
        assert_eq!(sq.partial(0).degree(), 0);
    }

    #[test]
    fn add_term_checks_shapes() {
        let mut p = MultivectorPolynomial::zero(1);
        assert!(p.add_term(vec![1], Multivector::one(2)).is_err());
        assert!(p.add_term(vec![1, 0], Multivector::one(4)).is_err());
        p.add_term(vec![1, 0], Multivector::one(2)).unwrap();
        p.add_term(vec![1, 0], -Multivector::one(2)).unwrap();
        assert!(p.is_empty());
    }
}
