//! Szegő projection `S = C (I + A_KS)^{-1}` and the Hardy decomposition.
//!
//! The operator inverted is `I + A_KS` with `A_KS = C - C* = ½(H - ν̲Hν̲)`.
//! With that normalisation an orthogonal projection `S` onto the Hardy
//! space satisfies `S(I + A_KS) = S + C - S* = C`; the undivided `H - ν̲Hν̲`
//! does not yield a projection off balls.

use std::sync::Arc;

use num_complex::Complex64;

use super::algebra::{hardy_projection, hardy_projection_adjoint, kerzman_stein, LinearCombination};
use super::function::BoundaryFunction;
use super::hilbert::MatrixHilbert;
use super::krylov::{gmres, SolveStats, SolverConfig};
use super::multipliers::NodeMultiplier;
use super::BoundaryOperator;
use crate::circulant::CirculantPair;
use crate::clifford::Multivector;
use crate::error::{Error, Result};
use crate::surface::SurfaceMesh;

#[derive(Clone)]
pub struct SzegoProjection {
    mesh: Arc<SurfaceMesh>,
    c: LinearCombination,
    c_star: LinearCombination,
    a: LinearCombination,
    ks_scale: f64,
    config: SolverConfig,
}

impl SzegoProjection {
    pub fn new(h: Arc<MatrixHilbert>, config: SolverConfig) -> Self {
        let mesh = h.mesh().clone();
        let h: Arc<dyn BoundaryOperator> = h;
        SzegoProjection {
            c: hardy_projection(h.clone(), mesh.clone()),
            c_star: hardy_projection_adjoint(h.clone(), mesh.clone()),
            a: kerzman_stein(h, mesh.clone()),
            mesh,
            ks_scale: 0.5,
            config,
        }
    }

    /// Replaces the factor `s` in `I + s (H - ν̲Hν̲)`; the default is `½`.
    pub fn with_kerzman_stein_scale(mut self, s: f64) -> Self {
        self.ks_scale = s;
        self
    }

    pub fn mesh(&self) -> &Arc<SurfaceMesh> {
        &self.mesh
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    /// The operator `A_KS` actually inverted.
    pub fn apply_a(&self, l: &BoundaryFunction) -> Result<BoundaryFunction> {
        Ok(self.a.apply(l)?.scale(Complex64::new(self.ks_scale, 0.0)))
    }

    pub fn apply_c(&self, l: &BoundaryFunction) -> Result<BoundaryFunction> {
        self.c.apply(l)
    }

    pub fn apply_c_star(&self, l: &BoundaryFunction) -> Result<BoundaryFunction> {
        self.c_star.apply(l)
    }

    /// Solves `(I + sign · A_KS) x = rhs`.
    fn solve(&self, rhs: &BoundaryFunction, sign: f64) -> Result<(BoundaryFunction, SolveStats)> {
        let s = Complex64::new(sign * self.ks_scale, 0.0);
        gmres(|x| x.axpy(s, &self.a.apply(x)?), rhs, &self.config)
    }

    /// `S L` together with the solve statistics.
    pub fn apply_with_stats(&self, l: &BoundaryFunction) -> Result<(BoundaryFunction, SolveStats)> {
        l.check_mesh(&self.mesh)?;
        let (x, stats) = self.solve(l, 1.0)?;
        Ok((self.c.apply(&x)?, stats))
    }

    /// `S* L = (I - A_KS)^{-1} C* L`, using `A_KS* = -A_KS`.
    pub fn apply_adjoint(&self, l: &BoundaryFunction) -> Result<(BoundaryFunction, SolveStats)> {
        l.check_mesh(&self.mesh)?;
        self.solve(&self.c_star.apply(l)?, -1.0)
    }
}

impl BoundaryOperator for SzegoProjection {
    fn apply(&self, f: &BoundaryFunction) -> Result<BoundaryFunction> {
        Ok(self.apply_with_stats(f)?.0)
    }

    fn name(&self) -> String {
        "S".into()
    }
}

/// `S` applied to the weight-normalised impulse `δ_k / w_k` (scalar unit in
/// the first entry), the discrete counterpart of the Szegő kernel row at
/// node `k`: `⟨row, K⟩ = [K1(node k)]_0` for every `K` fixed by `S`.
pub fn szego_kernel_row(s: &SzegoProjection, node: usize) -> Result<BoundaryFunction> {
    let mesh = s.mesh().clone();
    if mesh.n() != 1 {
        return Err(Error::Capability("kernel rows are only formed for n = 1".into()));
    }
    if node >= mesh.len() {
        return Err(Error::Parameter(format!("node {node} out of range")));
    }
    let dim = mesh.dim();
    let w = mesh.weights()[node];
    let impulse = BoundaryFunction::from_fn(mesh, |k, _| {
        if k == node {
            CirculantPair::new(Multivector::scalar(dim, Complex64::new(1.0 / w, 0.0)), Multivector::zero(dim))
        } else {
            CirculantPair::zero(dim)
        }
    })?;
    s.apply(&impulse)
}

/// `L = G + ν̲ Hc` with `G = S L` and `Hc = -ν̲(L - G)`.
pub fn hardy_decompose(s: &SzegoProjection, l: &BoundaryFunction) -> Result<(BoundaryFunction, BoundaryFunction)> {
    let g = s.apply(l)?;
    let nu = NodeMultiplier::nu(s.mesh().clone());
    let hc = nu.apply(&l.sub(&g)?)?.scale(Complex64::new(-1.0, 0.0));
    Ok((g, hc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{hilbert_h, HardyWitness};
    use crate::surface::{mesh_circle, mesh_ellipse};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn szego(mesh: &Arc<SurfaceMesh>) -> SzegoProjection {
        SzegoProjection::new(Arc::new(hilbert_h(mesh.clone())), SolverConfig::default())
    }

    #[test]
    fn kerzman_stein_identity_by_construction() {
        let mesh = Arc::new(mesh_ellipse(64, 2.0, 1.0).unwrap());
        let s = szego(&mesh);
        let l = BoundaryFunction::random_smooth(mesh, 2, &mut ChaCha8Rng::seed_from_u64(11));
        let lhs = s.apply(&l.add(&s.apply_a(&l).unwrap()).unwrap()).unwrap();
        let rhs = s.apply_c(&l).unwrap();
        assert!(lhs.sub(&rhs).unwrap().norm() <= 1e-8 * l.norm());
    }

    #[test]
    fn decomposition_reconstructs() {
        let mesh = Arc::new(mesh_ellipse(64, 2.0, 1.0).unwrap());
        let s = szego(&mesh);
        let l = BoundaryFunction::random_smooth(mesh.clone(), 2, &mut ChaCha8Rng::seed_from_u64(12));
        let (g, hc) = hardy_decompose(&s, &l).unwrap();
        let back = g.add(&NodeMultiplier::nu(mesh).apply(&hc).unwrap()).unwrap();
        assert!(back.sub(&l).unwrap().norm() <= 1e-12 * l.norm());
    }

    #[test]
    fn kernel_row_reproduces_hardy_values() {
        let mesh = Arc::new(mesh_circle(256).unwrap());
        let s = szego(&mesh);
        let row = szego_kernel_row(&s, 0).unwrap();
        // right factor e1 gives the vector-valued kernel a scalar part
        let factor = CirculantPair::new(Multivector::generator(2, 1), Multivector::zero(2));
        let pole = crate::clifford::VectorR2n::new(vec![1.2, 0.9]).unwrap();
        let w = HardyWitness::new(mesh, pole, factor).unwrap();
        let pairing = row.inner(w.trace()).unwrap();
        let value = w.trace().value(0).first.scalar_part();
        assert!((pairing - value).norm() < 5e-2 * value.norm(), "{pairing} vs {value}");
    }

    #[test]
    fn zero_impulse_gives_zero() {
        let mesh = Arc::new(mesh_circle(32).unwrap());
        let s = szego(&mesh);
        assert_eq!(s.apply(&BoundaryFunction::zeros(mesh)).unwrap().norm(), 0.0);
    }
}
