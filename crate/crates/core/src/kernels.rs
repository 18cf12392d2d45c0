//! Cauchy kernels of orthogonal and Hermitean Clifford analysis.
//!
//! `E(X) = X̄ / (w_{2n} |X|^{2n})` with `X̄ = -X` for vectors, its rotated
//! companion `E|(X) = X̄| / (w_{2n} |X|^{2n})`, the Hermitean kernels
//! `ε = -(E + iE|)`, `ε† = E - iE|`, and the circulant kernel `ℰ = (ε, ε†)`.

use num_complex::Complex64;

use crate::circulant::CirculantPair;
use crate::clifford::{embed_vector, Multivector, VectorR2n};
use crate::error::{Error, Result};
use crate::hermitean::{apply_j_vector, hermitean_vars};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Arguments closer than this to the origin are rejected.
pub const SINGULARITY_GUARD: f64 = 1e-12;

/// Area of the unit sphere `S^{2n-1}`: `2π^n / (n-1)!`.
pub fn sphere_area(n: usize) -> f64 {
    assert!(n >= 1, "sphere_area needs n >= 1");
    let factorial: f64 = (1..n).map(|k| k as f64).product();
    2.0 * std::f64::consts::PI.powi(n as i32) / factorial
}

fn guard(x: &VectorR2n) -> Result<f64> {
    let r = x.norm();
    if r < SINGULARITY_GUARD {
        return Err(Error::Singularity { norm: r });
    }
    Ok(r)
}

/// `-1 / (w_{2n} |X|^{2n})`, the real factor multiplying `X` in `E(X)`.
pub(crate) fn cauchy_factor(n: usize, r: f64) -> f64 {
    -1.0 / (sphere_area(n) * r.powi(2 * n as i32))
}

pub fn kernel_e(x: &VectorR2n) -> Result<Multivector> {
    let r = guard(x)?;
    Ok(embed_vector(x).scale_real(cauchy_factor(x.n(), r)))
}

/// `E|(X)`, built from `X| = J[X]`.
pub fn kernel_ej(x: &VectorR2n) -> Result<Multivector> {
    let r = guard(x)?;
    Ok(embed_vector(&apply_j_vector(x)).scale_real(cauchy_factor(x.n(), r)))
}

/// `ε(X) = -(E(X) + iE|(X))`.
pub fn kernel_eps(x: &VectorR2n) -> Result<Multivector> {
    let e = kernel_e(x)?;
    let ej = kernel_ej(x)?;
    Ok(-(&e + &ej.scale(I)))
}

/// `ε†(X) = E(X) - iE|(X)`.
pub fn kernel_eps_dagger(x: &VectorR2n) -> Result<Multivector> {
    let e = kernel_e(x)?;
    let ej = kernel_ej(x)?;
    Ok(&e - &ej.scale(I))
}

/// How `|Z|` is read in the alternative display `(2/w_{2n}) Z / |Z|^{2n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HermiteanNorm {
    /// `|Z|² := ZZ† + Z†Z = |X|²`.
    Anticommutator,
    /// `|Z|` as the coefficient norm of `Z`, which equals `|X| / √2`.
    Coefficient,
}

/// `(2 / w_{2n}) Z / |Z|^{2n}` under the chosen reading of `|Z|`.
pub fn kernel_eps_from_z(x: &VectorR2n, norm: HermiteanNorm) -> Result<Multivector> {
    let r = guard(x)?;
    let n = x.n();
    let (z, _) = hermitean_vars(x);
    let zr = match norm {
        HermiteanNorm::Anticommutator => r,
        HermiteanNorm::Coefficient => z.norm(),
    };
    Ok(z.scale_real(2.0 / (sphere_area(n) * zr.powi(2 * n as i32))))
}

/// Ratio `(2/w_{2n}) Z/|Z|^{2n} ÷ ε` measured on the first nonzero
/// coefficient of `ε`.
pub fn eps_discrepancy_factor(x: &VectorR2n, norm: HermiteanNorm) -> Result<Complex64> {
    let eps = kernel_eps(x)?;
    let alt = kernel_eps_from_z(x, norm)?;
    let (idx, denom) = eps
        .coeffs()
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .expect("nonempty");
    Ok(alt.coeffs()[idx] / denom)
}

/// `ℰ(X)` as the circulant pair `(ε(X), ε†(X))`.
pub fn matrix_kernel(x: &VectorR2n) -> Result<CirculantPair> {
    Ok(CirculantPair::new(kernel_eps(x)?, kernel_eps_dagger(x)?))
}
