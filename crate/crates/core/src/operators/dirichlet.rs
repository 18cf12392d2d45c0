//! Dirichlet problem on the unit ball through the Hardy decomposition
//! `L = G + ν̲ Hc`: the solution is `G̃(X) + 𝒳(X) H̃(X)`, where `G̃` and `H̃`
//! are the normalised Cauchy extensions and `𝒳 = ½[[X + X|, -X + X|],
//! [-X + X|, X + X|]]` reduces to `ν̲` on the sphere.

use std::sync::Arc;

use num_complex::Complex64;

use super::cauchy::{calibrate, interior_extension, rotated_embedding, Calibration};
use super::function::BoundaryFunction;
use super::hilbert::MatrixHilbert;
use super::multipliers::NodeMultiplier;
use super::{hardy_projection, BoundaryOperator};
use crate::circulant::CirculantPair;
use crate::clifford::{embed_vector, VectorR2n};
use crate::error::{Error, Result};
use crate::surface::SurfaceMesh;

/// `𝒳(X)`; acts as `X|` on the sum channel and `X` on the difference.
pub fn position_matrix(x: &VectorR2n) -> CirculantPair {
    CirculantPair::from_orthogonal_pair(&embed_vector(x), &rotated_embedding(x))
}

/// Precomputed decomposition of one boundary datum.
///
/// On the ball the Szegő and Hardy projections coincide, and the discrete
/// `C` reproduces constants exactly, so `G = C L` is used directly.
#[derive(Clone, Debug)]
pub struct DirichletSolver {
    mesh: Arc<SurfaceMesh>,
    calibration: Calibration,
    g: BoundaryFunction,
    hc: BoundaryFunction,
}

impl DirichletSolver {
    pub fn new(mesh: Arc<SurfaceMesh>, l: &BoundaryFunction) -> Result<Self> {
        if !mesh.is_unit_ball() {
            return Err(Error::Parameter(format!("Dirichlet solver needs a unit-sphere mesh, got {}", mesh.label())));
        }
        l.check_mesh(&mesh)?;
        let h: Arc<dyn BoundaryOperator> = Arc::new(MatrixHilbert::new(mesh.clone(), Default::default()));
        let g = hardy_projection(h, mesh.clone()).apply(l)?;
        let hc = NodeMultiplier::nu(mesh.clone()).apply(&l.sub(&g)?)?.scale(Complex64::new(-1.0, 0.0));
        let calibration = calibrate(&mesh)?;
        Ok(DirichletSolver { mesh, calibration, g, hc })
    }

    pub fn hardy_part(&self) -> &BoundaryFunction {
        &self.g
    }

    pub fn complement_part(&self) -> &BoundaryFunction {
        &self.hc
    }

    pub fn calibration(&self) -> &Calibration {
        &self.calibration
    }

    /// Largest admissible `|X|`: one mesh spacing inside the sphere.
    pub fn max_radius(&self) -> f64 {
        1.0 - 2.0 * self.mesh.spacing()
    }

    pub fn evaluate(&self, x: &VectorR2n) -> Result<CirculantPair> {
        if x.dim() != self.mesh.dim() {
            return Err(Error::DimensionMismatch { expected: self.mesh.dim(), found: x.dim() });
        }
        if x.norm() >= self.max_radius() {
            return Err(Error::Parameter(format!(
                "|X| = {} is not below {} (unit ball minus guard)",
                x.norm(),
                self.max_radius()
            )));
        }
        let g = interior_extension(&self.mesh, &self.g, x, &self.calibration)?;
        let h = interior_extension(&self.mesh, &self.hc, x, &self.calibration)?;
        Ok(&g + &(&position_matrix(x) * &h))
    }
}

/// One-shot solve at a single interior point.
pub fn dirichlet_solve_ball(mesh: &Arc<SurfaceMesh>, l: &BoundaryFunction, x: &VectorR2n) -> Result<CirculantPair> {
    DirichletSolver::new(mesh.clone(), l)?.evaluate(x)
}
