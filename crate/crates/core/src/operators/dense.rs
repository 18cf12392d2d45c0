//! Dense realisation of `H` for `n = 1`, and the two adjoint paths.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::algebra::formula_adjoint;
use super::function::BoundaryFunction;
use super::hilbert::{MatrixHilbert, OrthogonalHilbert};
use super::BoundaryOperator;
use crate::clifford::{mul_acc, Multivector};
use crate::error::{Error, Result};
use crate::surface::SurfaceMesh;

/// Block matrix whose `(t, y)` entry is a multivector acting by left
/// multiplication; one such matrix per channel.
#[derive(Clone, Debug)]
struct BlockMatrix {
    dim: usize,
    len: usize,
    blocks: Vec<Complex64>,
}

impl BlockMatrix {
    fn from_hilbert(op: &OrthogonalHilbert) -> Self {
        let mesh = op.mesh();
        let (dim, len) = (mesh.dim(), mesh.len());
        let size = 1usize << dim;
        let mut blocks = vec![Complex64::new(0.0, 0.0); len * len * size];
        blocks.par_chunks_mut(len * size).enumerate().for_each(|(t, row)| {
            for y in 0..len {
                row[y * size..(y + 1) * size].copy_from_slice(op.kernel_entry(t, y).coeffs());
            }
        });
        BlockMatrix { dim, len, blocks }
    }

    fn block(&self, t: usize, y: usize) -> &[Complex64] {
        let size = 1usize << self.dim;
        let start = (t * self.len + y) * size;
        &self.blocks[start..start + size]
    }

    /// `K*(a, b) = (w_b / w_a) K(b, a)†`, the adjoint for the weighted inner
    /// product.
    fn adjoint(&self, weights: &[f64]) -> Self {
        let size = 1usize << self.dim;
        let dim = self.dim;
        let mut blocks = vec![Complex64::new(0.0, 0.0); self.blocks.len()];
        blocks.par_chunks_mut(self.len * size).enumerate().for_each(|(a, row)| {
            for b in 0..self.len {
                let k = Multivector::from_coeffs(dim, self.block(b, a).to_vec()).unwrap();
                let d = k.hermitean_dagger().scale_real(weights[b] / weights[a]);
                row[b * size..(b + 1) * size].copy_from_slice(d.coeffs());
            }
        });
        BlockMatrix { dim, len: self.len, blocks }
    }

    fn apply_flat(&self, f: &[Complex64]) -> Vec<Complex64> {
        let size = 1usize << self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); f.len()];
        out.par_chunks_mut(size).enumerate().for_each(|(t, chunk)| {
            for y in 0..self.len {
                mul_acc(chunk, self.block(t, y), &f[y * size..(y + 1) * size], self.dim, Complex64::new(1.0, 0.0));
            }
        });
        out
    }
}

/// `H` (or its adjoint) stored as two dense block matrices, one for the sum
/// channel (`𝓗|`) and one for the difference channel (`𝓗`). Only available
/// for `n = 1`.
#[derive(Clone, Debug)]
pub struct DenseHilbert {
    mesh: Arc<SurfaceMesh>,
    sum: BlockMatrix,
    diff: BlockMatrix,
    name: String,
}

impl DenseHilbert {
    pub fn new(h: &MatrixHilbert) -> Result<Self> {
        let mesh = h.mesh().clone();
        if mesh.n() != 1 {
            return Err(Error::Capability(format!(
                "dense realisation needs n = 1 (got n = {}); use the formula adjoint path",
                mesh.n()
            )));
        }
        Ok(DenseHilbert {
            sum: BlockMatrix::from_hilbert(h.rotated()),
            diff: BlockMatrix::from_hilbert(h.plain()),
            mesh,
            name: "H(dense)".into(),
        })
    }

    /// Weighted conjugate transpose.
    pub fn adjoint(&self) -> DenseHilbert {
        let w = self.mesh.weights();
        DenseHilbert {
            mesh: self.mesh.clone(),
            sum: self.sum.adjoint(w),
            diff: self.diff.adjoint(w),
            name: format!("{}*", self.name),
        }
    }

    /// Block `(t, y)` of the difference (`rotated = false`) or sum channel.
    pub fn block(&self, t: usize, y: usize, rotated: bool) -> Multivector {
        let m = if rotated { &self.sum } else { &self.diff };
        Multivector::from_coeffs(m.dim, m.block(t, y).to_vec()).unwrap()
    }
}

impl BoundaryOperator for DenseHilbert {
    fn apply(&self, f: &BoundaryFunction) -> Result<BoundaryFunction> {
        f.check_mesh(&self.mesh)?;
        let sum = self.sum.apply_flat(&f.sum_channel());
        let diff = self.diff.apply_flat(&f.diff_channel());
        BoundaryFunction::from_channels(self.mesh.clone(), &sum, &diff)
    }

    fn name(&self) -> String {
        self.name.clone()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdjointPath {
    /// Weighted conjugate transpose of the dense matrix (`n = 1` only).
    Dense,
    /// `ν̲Hν̲`.
    Formula,
}

/// `H*` along the requested path.
pub fn hilbert_adjoint(h: &Arc<MatrixHilbert>, path: AdjointPath) -> Result<Arc<dyn BoundaryOperator>> {
    match path {
        AdjointPath::Dense => Ok(Arc::new(DenseHilbert::new(h)?.adjoint())),
        AdjointPath::Formula => {
            let op: Arc<dyn BoundaryOperator> = h.clone();
            Ok(Arc::new(formula_adjoint(op, h.mesh().clone())))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{hilbert_h, PvRule};
    use crate::surface::{mesh_ellipse, mesh_sphere_s3};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn dense_matches_matrix_free() {
        let mesh = Arc::new(mesh_ellipse(40, 2.0, 1.0).unwrap());
        let h = MatrixHilbert::new(mesh.clone(), PvRule::ConstantCorrected);
        let d = DenseHilbert::new(&h).unwrap();
        let l = BoundaryFunction::random_smooth(mesh, 3, &mut ChaCha8Rng::seed_from_u64(2));
        let a = h.apply(&l).unwrap();
        assert!(d.apply(&l).unwrap().sub(&a).unwrap().norm() < 1e-12 * a.norm());
    }

    #[test]
    fn dense_adjoint_satisfies_definition() {
        let mesh = Arc::new(mesh_ellipse(40, 2.0, 1.0).unwrap());
        let h = Arc::new(hilbert_h(mesh.clone()));
        let hs = hilbert_adjoint(&h, AdjointPath::Dense).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let l = BoundaryFunction::random_smooth(mesh.clone(), 3, &mut rng);
        let k = BoundaryFunction::random_smooth(mesh, 3, &mut rng);
        let lhs = hs.apply(&l).unwrap().inner(&k).unwrap();
        let rhs = l.inner(&h.apply(&k).unwrap()).unwrap();
        assert!((lhs - rhs).norm() < 1e-10 * rhs.norm());
    }

    #[test]
    fn dense_path_refused_for_n2() {
        let mesh = Arc::new(mesh_sphere_s3([4, 4, 4]).unwrap());
        let h = Arc::new(hilbert_h(mesh));
        assert!(matches!(hilbert_adjoint(&h, AdjointPath::Dense), Err(Error::Capability(_))));
        assert!(hilbert_adjoint(&h, AdjointPath::Formula).is_ok());
    }
}
