use std::sync::Arc;

use num_complex::Complex64;

use super::function::BoundaryFunction;
use crate::circulant::CirculantPair;
use crate::clifford::{Multivector, VectorR2n};
use crate::error::{Error, Result};
use crate::kernels::matrix_kernel;
use crate::surface::SurfaceMesh;

/// Boundary trace of `ℰ(X - pole) Γ` for a pole outside the closed domain and
/// a constant circulant `Γ` multiplied on the right.
///
/// `ℰ(X - pole)` is H-monogenic away from the pole and right multiplication
/// by constants preserves that, so the trace is an element of the Hardy
/// space.
#[derive(Clone, Debug)]
pub struct HardyWitness {
    pole: VectorR2n,
    factor: CirculantPair,
    trace: BoundaryFunction,
}

impl HardyWitness {
    pub fn new(mesh: Arc<SurfaceMesh>, pole: VectorR2n, factor: CirculantPair) -> Result<Self> {
        if pole.dim() != mesh.dim() || factor.dim() != mesh.dim() {
            return Err(Error::DimensionMismatch { expected: mesh.dim(), found: pole.dim() });
        }
        if pole.norm() <= mesh.circumradius() {
            return Err(Error::Parameter(format!(
                "pole at radius {} is not outside the circumradius {}",
                pole.norm(),
                mesh.circumradius()
            )));
        }
        let values = mesh
            .nodes()
            .iter()
            .map(|x| Ok(&matrix_kernel(&x.sub(&pole))? * &factor))
            .collect::<Result<Vec<_>>>()?;
        let trace = BoundaryFunction::new(mesh, values)?;
        Ok(HardyWitness { pole, factor, trace })
    }

    /// Witness with pole `1.5 R (cos θ, sin θ, 0, ...)` in the `(x1, y1)`
    /// plane, `R` the circumradius, and `Γ` the identity.
    pub fn standard(mesh: Arc<SurfaceMesh>, angle: f64) -> Result<Self> {
        Self::at_distance(mesh, angle, 1.5)
    }

    /// As [`HardyWitness::standard`] with the pole at `factor` times the
    /// circumradius (`factor > 1`).
    pub fn at_distance(mesh: Arc<SurfaceMesh>, angle: f64, factor: f64) -> Result<Self> {
        let n = mesh.n();
        let r = factor * mesh.circumradius();
        let mut comps = vec![0.0; 2 * n];
        comps[0] = r * angle.cos();
        comps[n] = r * angle.sin();
        let dim = mesh.dim();
        Self::new(mesh, VectorR2n::new(comps)?, CirculantPair::identity(dim))
    }

    /// A small family of witnesses with distinct poles and right factors.
    pub fn family(mesh: Arc<SurfaceMesh>, count: usize) -> Result<Vec<Self>> {
        let dim = mesh.dim();
        let n = mesh.n();
        let r = 1.5 * mesh.circumradius();
        (0..count)
            .map(|k| {
                let angle = 0.7 + 2.0 * std::f64::consts::PI * k as f64 / count as f64;
                let mut comps = vec![0.0; 2 * n];
                comps[0] = r * angle.cos();
                comps[n] = r * angle.sin();
                if n > 1 {
                    // tilt the pole out of the (x1, y1) plane, keeping |pole| = r
                    let tilt = 0.3 * k as f64;
                    comps[0] *= tilt.cos();
                    comps[n] *= tilt.cos();
                    comps[1] = r * tilt.sin();
                }
                let g1 = Multivector::one(dim);
                let mut g2 = Multivector::zero(dim);
                g2.coeffs_mut()[1 << (k % dim)] = Complex64::new(0.5, 0.25 * k as f64);
                Self::new(mesh.clone(), VectorR2n::new(comps)?, CirculantPair::new(g1, g2))
            })
            .collect()
    }

    pub fn pole(&self) -> &VectorR2n {
        &self.pole
    }

    pub fn trace(&self) -> &BoundaryFunction {
        &self.trace
    }

    /// The H-monogenic function itself at any point other than the pole.
    pub fn evaluate(&self, x: &VectorR2n) -> Result<CirculantPair> {
        Ok(&matrix_kernel(&x.sub(&self.pole))? * &self.factor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numdiff::hermitean_dirac_residual;
    use crate::surface::mesh_circle;

    #[test]
    fn witness_is_h_monogenic_inside() {
        let mesh = Arc::new(mesh_circle(32).unwrap());
        for w in HardyWitness::family(mesh, 3).unwrap() {
            let x = VectorR2n::new(vec![0.2, -0.3]).unwrap();
            let (res, scale) = hermitean_dirac_residual(&|p: &VectorR2n| w.evaluate(p), &x, 1e-5).unwrap();
            assert!(res.norm() < 1e-7 * scale, "{} vs {}", res.norm(), scale);
        }
    }

    #[test]
    fn pole_inside_rejected() {
        let mesh = Arc::new(mesh_circle(32).unwrap());
        let pole = VectorR2n::new(vec![0.5, 0.0]).unwrap();
        assert!(HardyWitness::new(mesh, pole, CirculantPair::identity(2)).is_err());
    }
}
