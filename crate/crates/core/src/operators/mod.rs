//! Discretised boundary operators on `𝓛₂(∂Ω)`.

mod algebra;
pub mod cauchy;
pub mod dense;
pub mod dirichlet;
mod function;
pub mod hilbert;
pub mod krylov;
pub mod multipliers;
pub mod szego;
pub mod theorem41;
mod witness;

pub use algebra::{
    formula_adjoint, hardy_projection, hardy_projection_adjoint, kerzman_stein, Identity, LinearCombination, Product,
};
pub use cauchy::{
    calibrate, cauchy_interior, cauchy_interior_by_channels, interior_extension, jump_constant, orthogonal_cauchy,
    Calibration,
};
pub use dense::{hilbert_adjoint, AdjointPath, DenseHilbert};
pub use dirichlet::{dirichlet_solve_ball, DirichletSolver};
pub use function::{inner_product, BoundaryFunction};
pub use hilbert::{hilbert_h, MatrixHilbert, OrthogonalHilbert, PvRule};
pub use krylov::{gmres, SolveStats, SolverConfig};
pub use multipliers::{alpha_multiply, beta_multiply, nu_multiply, NodeMultiplier};
pub use szego::{hardy_decompose, szego_kernel_row, SzegoProjection};
pub use theorem41::{geometric_violation, theorem41_suite, ItemResidual, Theorem41Report, NONBALL_THRESHOLD};
pub use witness::HardyWitness;

use crate::error::Result;

/// A linear map `BoundaryFunction -> BoundaryFunction`, applied matrix-free.
pub trait BoundaryOperator: Send + Sync {
    fn apply(&self, f: &BoundaryFunction) -> Result<BoundaryFunction>;

    fn name(&self) -> String;
}

impl<T: BoundaryOperator + ?Sized> BoundaryOperator for std::sync::Arc<T> {
    fn apply(&self, f: &BoundaryFunction) -> Result<BoundaryFunction> {
        (**self).apply(f)
    }

    fn name(&self) -> String {
        (**self).name()
    }
}

impl<T: BoundaryOperator + ?Sized> BoundaryOperator for Box<T> {
    fn apply(&self, f: &BoundaryFunction) -> Result<BoundaryFunction> {
        (**self).apply(f)
    }

    fn name(&self) -> String {
        (**self).name()
    }
}
