//! Central finite differences of multivector- and circulant-valued fields.
//!
//! Used for monogenicity and harmonicity residuals where no closed form is
//! available (kernels, Cauchy integrals, Dirichlet extensions).

use num_complex::Complex64;

use crate::circulant::CirculantPair;
use crate::clifford::{Multivector, VectorR2n};
use crate::error::Result;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Central-difference partial derivatives `∂_k F(X)` for every coordinate.
pub fn gradient<F>(f: &F, x: &VectorR2n, h: f64) -> Result<Vec<Multivector>>
where
    F: Fn(&VectorR2n) -> Result<Multivector>,
{
    (0..x.dim())
        .map(|k| {
            let plus = f(&x.shifted(k, h))?;
            let minus = f(&x.shifted(k, -h))?;
            Ok((&plus - &minus).scale_real(0.5 / h))
        })
        .collect()
}

/// `Σ e_k ∂_k F` (left action) together with `Σ |∂_k F|`, the natural
/// scale for a relative residual.
pub fn dirac_residual<F>(f: &F, x: &VectorR2n, h: f64) -> Result<(Multivector, f64)>
where
    F: Fn(&VectorR2n) -> Result<Multivector>,
{
    let dim = x.dim();
    let grad = gradient(f, x, h)?;
    let mut out = Multivector::zero(dim);
    let mut scale = 0.0;
    for (k, g) in grad.iter().enumerate() {
        out += &(&Multivector::generator(dim, k + 1) * g);
        scale += g.norm();
    }
    Ok((out, scale))
}

/// `Σ J[e_k] ∂_k F`, i.e. `∂_{X|} F`.
pub fn dirac_j_residual<F>(f: &F, x: &VectorR2n, h: f64) -> Result<(Multivector, f64)>
where
    F: Fn(&VectorR2n) -> Result<Multivector>,
{
    let dim = x.dim();
    let n = dim / 2;
    let grad = gradient(f, x, h)?;
    let mut out = Multivector::zero(dim);
    let mut scale = 0.0;
    for j in 0..n {
        // ∂_{X|} = Σ e_j ∂_{y_j} - e_{n+j} ∂_{x_j}
        out += &(&Multivector::generator(dim, j + 1) * &grad[n + j]);
        out -= &(&Multivector::generator(dim, n + j + 1) * &grad[j]);
    }
    for g in &grad {
        scale += g.norm();
    }
    Ok((out, scale))
}

/// `D_{(Z,Z†)} ℒ` for a circulant-valued field, with the gradient scale.
///
/// `∂_Z = -¼(∂_X - i∂_{X|})`, `∂_{Z†} = ¼(∂_X + i∂_{X|})`, and
/// `D = [[∂_Z, ∂_{Z†}], [∂_{Z†}, ∂_Z]]` multiplies the circulant on the left.
pub fn hermitean_dirac_residual<F>(f: &F, x: &VectorR2n, h: f64) -> Result<(CirculantPair, f64)>
where
    F: Fn(&VectorR2n) -> Result<CirculantPair>,
{
    let first = |p: &VectorR2n| f(p).map(|c| c.first);
    let second = |p: &VectorR2n| f(p).map(|c| c.second);
    let (d1, s1) = dirac_residual(&first, x, h)?;
    let (dj1, _) = dirac_j_residual(&first, x, h)?;
    let (d2, s2) = dirac_residual(&second, x, h)?;
    let (dj2, _) = dirac_j_residual(&second, x, h)?;

    let dz = |d: &Multivector, dj: &Multivector| (d - &dj.scale(I)).scale_real(-0.25);
    let dzd = |d: &Multivector, dj: &Multivector| (d + &dj.scale(I)).scale_real(0.25);

    let out_first = &dz(&d1, &dj1) + &dzd(&d2, &dj2);
    let out_second = &dzd(&d1, &dj1) + &dz(&d2, &dj2);
    Ok((CirculantPair::new(out_first, out_second), s1 + s2))
}

/// Componentwise Laplacian by the 2n-dimensional five-point stencil.
pub fn laplacian_circulant<F>(f: &F, x: &VectorR2n, h: f64) -> Result<CirculantPair>
where
    F: Fn(&VectorR2n) -> Result<CirculantPair>,
{
    let centre = f(x)?;
    let mut acc = CirculantPair::zero(centre.dim());
    for k in 0..x.dim() {
        let plus = f(&x.shifted(k, h))?;
        let minus = f(&x.shifted(k, -h))?;
        acc = &acc + &(&(&plus + &minus) - &centre.scale_real(2.0));
    }
    Ok(acc.scale_real(1.0 / (h * h)))
}
