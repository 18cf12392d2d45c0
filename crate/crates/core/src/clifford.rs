//! Dense arithmetic in the real Clifford algebra `R_{0,m}` and its
//! complexification.
//!
//! Basis blades `e_A` are indexed by bit masks: bit `i - 1` set means the
//! generator `e_i` occurs in the (increasing) product `e_A`. Generators square
//! to `-1` and anticommute pairwise. Coefficients are always complex; a real
//! multivector is one whose coefficients have zero imaginary part.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported algebra dimension `m` (so `n <= 4`).
pub const MAX_DIM: usize = 8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A subset of `{1..m}` encoded as a bit set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BladeIndex(pub u16);

impl BladeIndex {
    pub const SCALAR: BladeIndex = BladeIndex(0);

    /// The blade `e_{i_1 i_2 ... i_k}` from 1-based generator indices.
    pub fn from_generators(gens: &[usize]) -> Result<Self> {
        let mut mask = 0u16;
        for &g in gens {
            if g == 0 || g > MAX_DIM {
                return Err(Error::Parameter(format!("generator index {g} out of range")));
            }
            let bit = 1u16 << (g - 1);
            if mask & bit != 0 {
                return Err(Error::Parameter(format!("generator e{g} repeated")));
            }
            mask |= bit;
        }
        Ok(BladeIndex(mask))
    }

    pub fn generator(i: usize) -> Self {
        debug_assert!((1..=MAX_DIM).contains(&i));
        BladeIndex(1 << (i - 1))
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_valid_for(self, dim: usize) -> bool {
        dim <= MAX_DIM && (self.0 as usize) < (1usize << dim)
    }

    /// 1-based generator indices in increasing order.
    pub fn generators(self) -> Vec<usize> {
        (0..16).filter(|b| self.0 & (1 << b) != 0).map(|b| b + 1).collect()
    }
}

impl fmt::Display for BladeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "e0");
        }
        write!(f, "e")?;
        for g in self.generators() {
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Sign of `e_A e_B = sign * e_{A xor B}` from the counting rule
/// `(-1)^{N(A∩B)} (-1)^{P(A,B)}`, where `P(A,B)` counts pairs `i in A`,
/// `j in B` with `i > j`.
fn sign_by_counting(a: u16, b: u16) -> i8 {
    let common = (a & b).count_ones();
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        // generators of A strictly above j
        inversions += (a >> (j + 1)).count_ones();
    }
    if (common + inversions).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn sign_table(dim: usize) -> &'static [i8] {
    static TABLES: [OnceLock<Vec<i8>>; MAX_DIM + 1] = [const { OnceLock::new() }; MAX_DIM + 1];
    TABLES[dim].get_or_init(|| {
        let size = 1usize << dim;
        let mut table = vec![0i8; size * size];
        for a in 0..size {
            for b in 0..size {
                table[(a << dim) | b] = sign_by_counting(a as u16, b as u16);
            }
        }
        table
    })
}

/// `e_A e_B = sign * e_{A Δ B}`.
pub fn blade_product_sign(a: BladeIndex, b: BladeIndex, dim: usize) -> Result<(i8, BladeIndex)> {
    if dim > MAX_DIM {
        return Err(Error::Parameter(format!("dimension {dim} exceeds {MAX_DIM}")));
    }
    if !a.is_valid_for(dim) || !b.is_valid_for(dim) {
        return Err(Error::Parameter(format!("blade index outside R_(0,{dim})")));
    }
    let sign = sign_table(dim)[((a.0 as usize) << dim) | b.0 as usize];
    Ok((sign, BladeIndex(a.0 ^ b.0)))
}

/// `(-1)^{k(k+1)/2}`: the Clifford-conjugation sign of a grade-`k` blade.
#[inline]
pub(crate) fn conjugation_sign(grade: usize) -> f64 {
    if (grade * (grade + 1) / 2).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `out += scale * a * b` on raw coefficient slices of length `2^dim`.
/// Zero coefficients of `a` are skipped, which makes sparse left factors
/// (vectors, bivectors) cheap.
pub(crate) fn mul_acc(out: &mut [Complex64], a: &[Complex64], b: &[Complex64], dim: usize, scale: Complex64) {
    let size = 1usize << dim;
    let table = sign_table(dim);
    for (ia, &ca) in a.iter().enumerate().take(size) {
        if ca == ZERO {
            continue;
        }
        let ca = ca * scale;
        let row = &table[ia << dim..(ia + 1) << dim];
        for (ib, &cb) in b.iter().enumerate().take(size) {
            if cb == ZERO {
                continue;
            }
            let prod = ca * cb;
            if row[ib] > 0 {
                out[ia ^ ib] += prod;
            } else {
                out[ia ^ ib] -= prod;
            }
        }
    }
}

/// Element of the complex Clifford algebra over `dim` generators, stored as
/// a dense coefficient array indexed by blade mask.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct Multivector {
    dim: usize,
    coeffs: Vec<Complex64>,
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector(dim={}; ", self.dim)?;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c != ZERO {
                if !first {
                    write!(f, " + ")?;
                }
                write!(f, "({c}){}", BladeIndex(i as u16))?;
                first = false;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

impl Multivector {
    pub fn zero(dim: usize) -> Self {
        assert!(dim <= MAX_DIM, "dimension {dim} exceeds {MAX_DIM}");
        Multivector { dim, coeffs: vec![ZERO; 1 << dim] }
    }

    pub fn scalar(dim: usize, value: Complex64) -> Self {
        let mut m = Self::zero(dim);
        m.coeffs[0] = value;
        m
    }

    pub fn one(dim: usize) -> Self {
        Self::scalar(dim, Complex64::new(1.0, 0.0))
    }

    pub fn blade(dim: usize, blade: BladeIndex, value: Complex64) -> Result<Self> {
        if !blade.is_valid_for(dim) {
            return Err(Error::Parameter(format!("blade {blade} outside R_(0,{dim})")));
        }
        let mut m = Self::zero(dim);
        m.coeffs[blade.0 as usize] = value;
        Ok(m)
    }

    /// The generator `e_i`, `1 <= i <= dim`.
    pub fn generator(dim: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= dim, "generator e{i} outside R_(0,{dim})");
        let mut m = Self::zero(dim);
        m.coeffs[1 << (i - 1)] = Complex64::new(1.0, 0.0);
        m
    }

    pub fn from_coeffs(dim: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if dim > MAX_DIM {
            return Err(Error::Parameter(format!("dimension {dim} exceeds {MAX_DIM}")));
        }
        if coeffs.len() != 1 << dim {
            return Err(Error::DimensionMismatch { expected: 1 << dim, found: coeffs.len() });
        }
        Ok(Multivector { dim, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn coeff(&self, blade: BladeIndex) -> Complex64 {
        self.coeffs.get(blade.0 as usize).copied().unwrap_or(ZERO)
    }

    pub fn set_coeff(&mut self, blade: BladeIndex, value: Complex64) {
        self.coeffs[blade.0 as usize] = value;
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    fn check_dim(&self, other: &Multivector) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    /// Bilinear extension of the blade product.
    pub fn geometric_product(&self, other: &Multivector) -> Result<Multivector> {
        self.check_dim(other)?;
        let mut out = Multivector::zero(self.dim);
        mul_acc(&mut out.coeffs, &self.coeffs, &other.coeffs, self.dim, Complex64::new(1.0, 0.0));
        Ok(out)
    }

    pub fn scale(&self, factor: Complex64) -> Multivector {
        Multivector { dim: self.dim, coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    pub fn scale_real(&self, factor: f64) -> Multivector {
        Multivector { dim: self.dim, coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    /// Grade-`k` part scaled by `(-1)^{k(k+1)/2}`; reverses products.
    pub fn clifford_conjugate(&self) -> Multivector {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * conjugation_sign(i.count_ones() as usize))
            .collect();
        Multivector { dim: self.dim, coeffs }
    }

    /// Complex conjugation of every coefficient, blades untouched.
    pub fn complex_conjugate(&self) -> Multivector {
        Multivector { dim: self.dim, coeffs: self.coeffs.iter().map(|c| c.conj()).collect() }
    }

    /// `(a + ib)† = ā - i b̄`.
    pub fn hermitean_dagger(&self) -> Multivector {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.conj() * conjugation_sign(i.count_ones() as usize))
            .collect();
        Multivector { dim: self.dim, coeffs }
    }

    pub fn grade_part(&self, k: usize) -> Result<Multivector> {
        if k > self.dim {
            return Err(Error::Parameter(format!("grade {k} exceeds algebra dimension {}", self.dim)));
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i.count_ones() as usize == k { *c } else { ZERO })
            .collect();
        Ok(Multivector { dim: self.dim, coeffs })
    }

    pub fn scalar_part(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `sqrt([λ†λ]_0)`, which equals the Euclidean norm of the coefficients.
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Largest coefficient difference in modulus.
    pub fn max_abs_diff(&self, other: &Multivector) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn distance(&self, other: &Multivector) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }
}

impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        Multivector { dim: self.dim, coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Add for Multivector {
    type Output = Multivector;
    fn add(mut self, rhs: Multivector) -> Multivector {
        self += &rhs;
        self
    }
}

impl AddAssign<&Multivector> for Multivector {
    fn add_assign(&mut self, rhs: &Multivector) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        Multivector { dim: self.dim, coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Sub for Multivector {
    type Output = Multivector;
    fn sub(mut self, rhs: Multivector) -> Multivector {
        self -= &rhs;
        self
    }
}

impl SubAssign<&Multivector> for Multivector {
    fn sub_assign(&mut self, rhs: &Multivector) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale_real(-1.0)
    }
}

impl Neg for Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale_real(-1.0)
    }
}

/// Geometric product; panics on dimension mismatch (use
/// [`Multivector::geometric_product`] for the checked form).
impl Mul for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: &Multivector) -> Multivector {
        self.geometric_product(rhs).expect("dimension mismatch in geometric product")
    }
}

impl Mul for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Multivector) -> Multivector {
        &self * &rhs
    }
}

impl Mul<Complex64> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Complex64) -> Multivector {
        self.scale(rhs)
    }
}

/// A point of `R^{2n}` in `(x_1..x_n, y_1..y_n)` ordering.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorR2n {
    comps: Vec<f64>,
}

impl VectorR2n {
    pub fn new(comps: Vec<f64>) -> Result<Self> {
        if comps.is_empty() || !comps.len().is_multiple_of(2) || comps.len() > MAX_DIM {
            return Err(Error::Parameter(format!(
                "a vector of R^(2n) needs an even length between 2 and {MAX_DIM}, got {}",
                comps.len()
            )));
        }
        Ok(VectorR2n { comps })
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1 && 2 * n <= MAX_DIM);
        VectorR2n { comps: vec![0.0; 2 * n] }
    }

    /// Builds from separate `x` and `y` halves.
    pub fn from_xy(x: &[f64], y: &[f64]) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch { expected: x.len(), found: y.len() });
        }
        Self::new(x.iter().chain(y).copied().collect())
    }

    pub fn n(&self) -> usize {
        self.comps.len() / 2
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[f64] {
        &self.comps
    }

    pub fn x(&self, j: usize) -> f64 {
        self.comps[j]
    }

    pub fn y(&self, j: usize) -> f64 {
        self.comps[self.n() + j]
    }

    pub fn dot(&self, other: &VectorR2n) -> f64 {
        self.comps.iter().zip(&other.comps).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scaled(&self, t: f64) -> VectorR2n {
        VectorR2n { comps: self.comps.iter().map(|c| c * t).collect() }
    }

    pub fn sub(&self, other: &VectorR2n) -> VectorR2n {
        VectorR2n { comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect() }
    }

    pub fn add(&self, other: &VectorR2n) -> VectorR2n {
        VectorR2n { comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect() }
    }

    /// Coordinate `k` shifted by `h`.
    pub fn shifted(&self, k: usize, h: f64) -> VectorR2n {
        let mut comps = self.comps.clone();
        comps[k] += h;
        VectorR2n { comps }
    }
}

/// `X = Σ e_j x_j + e_{n+j} y_j` as a grade-1 multivector.
pub fn embed_vector(x: &VectorR2n) -> Multivector {
    let mut m = Multivector::zero(x.dim());
    for (k, &c) in x.components().iter().enumerate() {
        m.coeffs[1 << k] = Complex64::new(c, 0.0);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn generator_squares_to_minus_one() {
        let e1 = BladeIndex::generator(1);
        assert_eq!(blade_product_sign(e1, e1, 2).unwrap(), (-1, BladeIndex::SCALAR));
    }

    #[test]
    fn identity_blade_is_neutral() {
        let e12 = BladeIndex::from_generators(&[1, 2]).unwrap();
        assert_eq!(blade_product_sign(BladeIndex::SCALAR, e12, 2).unwrap(), (1, e12));
    }

    #[test]
    fn generators_anticommute() {
        let (s, b) = blade_product_sign(BladeIndex::generator(2), BladeIndex::generator(1), 2).unwrap();
        assert_eq!((s, b), (-1, BladeIndex::from_generators(&[1, 2]).unwrap()));
    }

    #[test]
    fn invalid_blade_rejected() {
        assert!(blade_product_sign(BladeIndex(0b100), BladeIndex(1), 2).is_err());
        assert!(blade_product_sign(BladeIndex(1), BladeIndex(1), MAX_DIM + 1).is_err());
    }

    #[test]
    fn sum_times_difference_of_generators() {
        let e1 = Multivector::generator(2, 1);
        let e2 = Multivector::generator(2, 2);
        let p = &(&e1 + &e2) * &(&e1 - &e2);
        let mut expected = Multivector::zero(2);
        expected.set_coeff(BladeIndex(0b11), c(-2.0));
        assert_eq!(p, expected);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = Multivector::one(2);
        let b = Multivector::one(3);
        assert!(matches!(a.geometric_product(&b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn conjugations_of_simple_elements() {
        let e1 = Multivector::generator(4, 1);
        assert_eq!(e1.clifford_conjugate(), -&e1);
        assert_eq!(Multivector::one(4).clifford_conjugate(), Multivector::one(4));
        let i1 = Multivector::scalar(4, Complex64::new(0.0, 1.0));
        assert_eq!(i1.hermitean_dagger(), Multivector::scalar(4, Complex64::new(0.0, -1.0)));
        assert_eq!(e1.hermitean_dagger(), -&e1);
    }

    #[test]
    fn grade_and_scalar_parts() {
        let mut a = Multivector::scalar(2, c(3.0));
        a.set_coeff(BladeIndex::generator(1), c(2.0));
        assert_eq!(a.grade_part(0).unwrap(), Multivector::scalar(2, c(3.0)));
        let e12 = Multivector::blade(2, BladeIndex(0b11), c(1.0)).unwrap();
        assert!(e12.grade_part(1).unwrap().is_zero());
        assert!(a.grade_part(3).is_err());

        let mut b = Multivector::scalar(2, c(5.0));
        b.set_coeff(BladeIndex::generator(2), c(1.0));
        assert_eq!(b.scalar_part(), c(5.0));
        let e1 = Multivector::generator(2, 1);
        assert_eq!((&e1 * &e1).scalar_part(), c(-1.0));
    }

    #[test]
    fn norms() {
        assert_eq!(Multivector::zero(2).norm(), 0.0);
        let mut m = Multivector::generator(2, 1);
        m.set_coeff(BladeIndex::generator(2), Complex64::new(0.0, 1.0));
        assert!((m.norm() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn embedded_vectors_square_to_minus_norm() {
        let x = VectorR2n::new(vec![1.0, 0.0]).unwrap();
        let ex = embed_vector(&x);
        assert_eq!(ex, Multivector::generator(2, 1));
        assert_eq!(&ex * &ex, Multivector::scalar(2, c(-1.0)));
        assert!(embed_vector(&VectorR2n::zeros(2)).is_zero());
    }

    #[test]
    fn vector_constructor_validates_length() {
        assert!(VectorR2n::new(vec![1.0, 2.0, 3.0]).is_err());
        assert!(VectorR2n::new(vec![]).is_err());
        assert!(VectorR2n::new(vec![0.0; 10]).is_err());
    }
}
