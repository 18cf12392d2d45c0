//! Restarted GMRES in the weighted `𝓛₂` inner product.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::function::BoundaryFunction;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Relative residual target `‖b - Ax‖ / ‖b‖`.
    pub tol: f64,
    /// Total inner iterations across restarts.
    pub max_iter: usize,
    /// Krylov subspace size per cycle.
    pub restart: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { tol: 1e-10, max_iter: 500, restart: 60 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveStats {
    pub iterations: usize,
    /// Final true relative residual.
    pub residual: f64,
}

fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
    if r == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if a.norm() == 0.0 {
        return (0.0, b.conj() / b.norm());
    }
    (a.norm() / r, (a / a.norm()) * b.conj() / r)
}

fn rotate(c: f64, s: Complex64, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
    (x * c + s * y, -s.conj() * x + y * c)
}

/// Solves `op(x) = b`.
pub fn gmres<F>(op: F, b: &BoundaryFunction, config: &SolverConfig) -> Result<(BoundaryFunction, SolveStats)>
where
    F: Fn(&BoundaryFunction) -> Result<BoundaryFunction>,
{
    if config.tol.is_nan() || config.tol <= 0.0 || config.restart == 0 {
        return Err(Error::Parameter("solver needs tol > 0 and restart > 0".into()));
    }
    let bnorm = b.norm();
    let mut x = BoundaryFunction::zeros(b.mesh().clone());
    if bnorm == 0.0 {
        return Ok((x, SolveStats::default()));
    }
    let mut total = 0;
    loop {
        let r = b.sub(&op(&x)?)?;
        let beta = r.norm();
        if beta / bnorm <= config.tol {
            return Ok((x, SolveStats { iterations: total, residual: beta / bnorm }));
        }
        if total >= config.max_iter {
            return Err(Error::Solver { iterations: total, residual: beta / bnorm });
        }
        let mut basis = vec![r.scale(Complex64::new(1.0 / beta, 0.0))];
        let mut hess: Vec<Vec<Complex64>> = Vec::new();
        let mut rot: Vec<(f64, Complex64)> = Vec::new();
        let mut g = vec![Complex64::new(beta, 0.0)];
        for j in 0..config.restart {
            let mut w = op(&basis[j])?;
            let mut col = Vec::with_capacity(j + 2);
            for v in &basis {
                let h = v.inner(&w)?;
                w = w.axpy(-h, v)?;
                col.push(h);
            }
            let next = w.norm();
            col.push(Complex64::new(next, 0.0));
            for (i, &(c, s)) in rot.iter().enumerate() {
                let (a, b) = rotate(c, s, col[i], col[i + 1]);
                col[i] = a;
                col[i + 1] = b;
            }
            let (c, s) = givens(col[j], col[j + 1]);
            let (a, _) = rotate(c, s, col[j], col[j + 1]);
            col[j] = a;
            col[j + 1] = Complex64::new(0.0, 0.0);
            let (gj, gn) = rotate(c, s, g[j], Complex64::new(0.0, 0.0));
            g[j] = gj;
            g.push(gn);
            rot.push((c, s));
            hess.push(col);
            total += 1;
            let done = gn.norm() / bnorm <= config.tol || total >= config.max_iter || next == 0.0;
            if !done {
                basis.push(w.scale(Complex64::new(1.0 / next, 0.0)));
            }
            if done {
                break;
            }
        }
        // back substitution on the triangularised Hessenberg matrix
        let k = hess.len();
        let mut y = vec![Complex64::new(0.0, 0.0); k];
        for i in (0..k).rev() {
            let mut acc = g[i];
            for (j, yj) in y.iter().enumerate().take(k).skip(i + 1) {
                acc -= hess[j][i] * yj;
            }
            y[i] = if hess[i][i].norm() == 0.0 { Complex64::new(0.0, 0.0) } else { acc / hess[i][i] };
        }
        for (yi, v) in y.iter().zip(&basis) {
            x = x.axpy(*yi, v)?;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::multipliers::NodeMultiplier;
    use crate::operators::BoundaryOperator;
    use crate::surface::mesh_ellipse;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    #[test]
    fn solves_shifted_multiplier() {
        // (2I + ν̲) has inverse (2I - ν̲)/5 since ν̲² = -I
        let mesh = Arc::new(mesh_ellipse(32, 2.0, 1.0).unwrap());
        let nu = NodeMultiplier::nu(mesh.clone());
        let b = BoundaryFunction::random_smooth(mesh, 2, &mut ChaCha8Rng::seed_from_u64(9));
        let op = |f: &BoundaryFunction| f.scale(Complex64::new(2.0, 0.0)).add(&nu.apply(f)?);
        let (x, stats) = gmres(op, &b, &SolverConfig::default()).unwrap();
        assert!(stats.residual <= 1e-10);
        let exact = b.scale(Complex64::new(2.0, 0.0)).sub(&nu.apply(&b).unwrap()).unwrap().scale(Complex64::new(0.2, 0.0));
        assert!(x.sub(&exact).unwrap().norm() < 1e-9 * exact.norm());
    }

    #[test]
    fn reports_non_convergence() {
        let mesh = Arc::new(mesh_ellipse(32, 2.0, 1.0).unwrap());
        let b = BoundaryFunction::random_smooth(mesh, 2, &mut ChaCha8Rng::seed_from_u64(9));
        let op = |f: &BoundaryFunction| Ok(BoundaryFunction::zeros(f.mesh().clone()));
        let config = SolverConfig { tol: 1e-10, max_iter: 3, restart: 2 };
        assert!(matches!(gmres(op, &b, &config), Err(Error::Solver { .. })));
    }
}
