//! Pointwise circulant multipliers `ν̲`, `α̲`, `β̲`.

use std::sync::Arc;

use num_complex::Complex64;

use super::function::BoundaryFunction;
use super::BoundaryOperator;
use crate::circulant::CirculantPair;
use crate::clifford::{embed_vector, Multivector};
use crate::error::Result;
use crate::surface::SurfaceMesh;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Left multiplication by a circulant matrix that varies from node to node.
#[derive(Clone, Debug)]
pub struct NodeMultiplier {
    mesh: Arc<SurfaceMesh>,
    factors: Vec<CirculantPair>,
    name: &'static str,
}

impl NodeMultiplier {
    /// `ν̲ = ½[[ν + ν|, -ν + ν|], [-ν + ν|, ν + ν|]]`.
    pub fn nu(mesh: Arc<SurfaceMesh>) -> Self {
        let factors = (0..mesh.len())
            .map(|k| {
                let nu = embed_vector(&mesh.normals()[k]);
                let nuj = embed_vector(&mesh.normals_j()[k]);
                CirculantPair::from_orthogonal_pair(&nu, &nuj)
            })
            .collect();
        NodeMultiplier { mesh, factors, name: "nu" }
    }

    /// `α̲` built from `α = ½(1 + iν)` and `α| = ½(1 + iν|)`.
    pub fn alpha(mesh: Arc<SurfaceMesh>) -> Self {
        Self::projector(mesh, 1.0, "alpha")
    }

    /// `β̲` built from `β = ½(1 - iν)` and `β| = ½(1 - iν|)`.
    pub fn beta(mesh: Arc<SurfaceMesh>) -> Self {
        Self::projector(mesh, -1.0, "beta")
    }

    fn projector(mesh: Arc<SurfaceMesh>, sign: f64, name: &'static str) -> Self {
        let dim = mesh.dim();
        let factors = (0..mesh.len())
            .map(|k| {
                let one = Multivector::one(dim);
                let nu = embed_vector(&mesh.normals()[k]).scale(I * sign);
                let nuj = embed_vector(&mesh.normals_j()[k]).scale(I * sign);
                let a = (&one + &nu).scale_real(0.5);
                let aj = (&one + &nuj).scale_real(0.5);
                CirculantPair::from_orthogonal_pair(&a, &aj)
            })
            .collect();
        NodeMultiplier { mesh, factors, name }
    }

    pub fn factor(&self, k: usize) -> &CirculantPair {
        &self.factors[k]
    }
}

impl BoundaryOperator for NodeMultiplier {
    fn apply(&self, f: &BoundaryFunction) -> Result<BoundaryFunction> {
        f.check_mesh(&self.mesh)?;
        Ok(f.map(|k, v| &self.factors[k] * v))
    }

    fn name(&self) -> String {
        self.name.into()
    }
}

pub fn nu_multiply(mesh: &Arc<SurfaceMesh>, l: &BoundaryFunction) -> Result<BoundaryFunction> {
    NodeMultiplier::nu(mesh.clone()).apply(l)
}

pub fn alpha_multiply(mesh: &Arc<SurfaceMesh>, l: &BoundaryFunction) -> Result<BoundaryFunction> {
    NodeMultiplier::alpha(mesh.clone()).apply(l)
}

pub fn beta_multiply(mesh: &Arc<SurfaceMesh>, l: &BoundaryFunction) -> Result<BoundaryFunction> {
    NodeMultiplier::beta(mesh.clone()).apply(l)
}
