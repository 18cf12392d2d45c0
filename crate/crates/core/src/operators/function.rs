use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::circulant::CirculantPair;
use crate::clifford::{Multivector, VectorR2n};
use crate::error::{Error, Result};
use crate::surface::SurfaceMesh;

/// A circulant pair per mesh node: the discretisation of an element of
/// `𝓛₂(∂Ω)`.
#[derive(Clone, Debug)]
pub struct BoundaryFunction {
    mesh: Arc<SurfaceMesh>,
    values: Vec<CirculantPair>,
}

pub(crate) fn same_mesh(a: &Arc<SurfaceMesh>, b: &Arc<SurfaceMesh>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl BoundaryFunction {
    pub fn new(mesh: Arc<SurfaceMesh>, values: Vec<CirculantPair>) -> Result<Self> {
        if values.len() != mesh.len() {
            return Err(Error::Parameter(format!("{} values for {} mesh nodes", values.len(), mesh.len())));
        }
        if let Some(v) = values.iter().find(|v| v.dim() != mesh.dim()) {
            return Err(Error::DimensionMismatch { expected: mesh.dim(), found: v.dim() });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parameter("boundary function has non-finite entries".into()));
        }
        Ok(BoundaryFunction { mesh, values })
    }

    pub fn zeros(mesh: Arc<SurfaceMesh>) -> Self {
        let values = vec![CirculantPair::zero(mesh.dim()); mesh.len()];
        BoundaryFunction { mesh, values }
    }

    /// Samples `f(node index, node)` at every node.
    pub fn from_fn<F>(mesh: Arc<SurfaceMesh>, f: F) -> Result<Self>
    where
        F: Fn(usize, &VectorR2n) -> CirculantPair,
    {
        let values = mesh.nodes().iter().enumerate().map(|(k, x)| f(k, x)).collect();
        Self::new(mesh, values)
    }

    /// Random smooth function: each entry is a random multivector polynomial
    /// of degree `<= degree` in the node coordinates.
    pub fn random_smooth<R: Rng>(mesh: Arc<SurfaceMesh>, degree: u32, rng: &mut R) -> Self {
        let dim = mesh.dim();
        let mut monomials: Vec<(Vec<u32>, [Multivector; 2])> = Vec::new();
        let random_mv = |rng: &mut R| {
            let coeffs = (0..1usize << dim)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            Multivector::from_coeffs(dim, coeffs).unwrap()
        };
        for _ in 0..(2 * degree as usize + 2) {
            let total = rng.gen_range(0..=degree);
            let mut exps = vec![0u32; dim];
            for _ in 0..total {
                exps[rng.gen_range(0..dim)] += 1;
            }
            monomials.push((exps, [random_mv(rng), random_mv(rng)]));
        }
        let values = mesh
            .nodes()
            .iter()
            .map(|x| {
                let mut pair = CirculantPair::zero(dim);
                for (exps, [c1, c2]) in &monomials {
                    let mono: f64 = exps.iter().zip(x.components()).map(|(&p, &v)| v.powi(p as i32)).product();
                    pair.first += &c1.scale_real(mono);
                    pair.second += &c2.scale_real(mono);
                }
                pair
            })
            .collect();
        BoundaryFunction { mesh, values }
    }

    pub fn mesh(&self) -> &Arc<SurfaceMesh> {
        &self.mesh
    }

    pub fn values(&self) -> &[CirculantPair] {
        &self.values
    }

    pub fn value(&self, k: usize) -> &CirculantPair {
        &self.values[k]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.mesh.dim()
    }

    pub(crate) fn check_same_mesh(&self, other: &BoundaryFunction) -> Result<()> {
        if same_mesh(&self.mesh, &other.mesh) {
            Ok(())
        } else {
            Err(Error::MeshMismatch)
        }
    }

    pub(crate) fn check_mesh(&self, mesh: &Arc<SurfaceMesh>) -> Result<()> {
        if same_mesh(&self.mesh, mesh) {
            Ok(())
        } else {
            Err(Error::MeshMismatch)
        }
    }

    pub fn map<F>(&self, f: F) -> BoundaryFunction
    where
        F: Fn(usize, &CirculantPair) -> CirculantPair,
    {
        let values = self.values.iter().enumerate().map(|(k, v)| f(k, v)).collect();
        BoundaryFunction { mesh: self.mesh.clone(), values }
    }

    pub fn add(&self, other: &BoundaryFunction) -> Result<BoundaryFunction> {
        self.check_same_mesh(other)?;
        Ok(self.map(|k, v| v + &other.values[k]))
    }

    pub fn sub(&self, other: &BoundaryFunction) -> Result<BoundaryFunction> {
        self.check_same_mesh(other)?;
        Ok(self.map(|k, v| v - &other.values[k]))
    }

    pub fn scale(&self, factor: Complex64) -> BoundaryFunction {
        self.map(|_, v| v.scale(factor))
    }

    /// `self + a * x`.
    pub fn axpy(&self, a: Complex64, x: &BoundaryFunction) -> Result<BoundaryFunction> {
        self.check_same_mesh(x)?;
        Ok(self.map(|k, v| v + &x.values[k].scale(a)))
    }

    /// `⟨L, K⟩ = Σ_nodes w [L1†K1 + L2†K2]_0`; conjugate-linear in `L`.
    pub fn inner(&self, other: &BoundaryFunction) -> Result<Complex64> {
        self.check_same_mesh(other)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for ((a, b), w) in self.values.iter().zip(&other.values).zip(self.mesh.weights()) {
            let mut node = Complex64::new(0.0, 0.0);
            for (x, y) in a.first.coeffs().iter().zip(b.first.coeffs()) {
                node += x.conj() * y;
            }
            for (x, y) in a.second.coeffs().iter().zip(b.second.coeffs()) {
                node += x.conj() * y;
            }
            acc += node * *w;
        }
        Ok(acc)
    }

    pub fn norm(&self) -> f64 {
        self.values
            .iter()
            .zip(self.mesh.weights())
            .map(|(v, w)| v.norm_sqr() * w)
            .sum::<f64>()
            .sqrt()
    }

    /// `‖self - other‖ / ‖reference‖`.
    pub fn relative_distance(&self, other: &BoundaryFunction, reference: &BoundaryFunction) -> Result<f64> {
        Ok(self.sub(other)?.norm() / reference.norm())
    }

    /// The sum channel `L1 + L2` as flat coefficients (node-major).
    pub(crate) fn sum_channel(&self) -> Vec<Complex64> {
        self.values.iter().flat_map(|v| v.sum_part().coeffs().to_vec()).collect()
    }

    /// The difference channel `L1 - L2` as flat coefficients (node-major).
    pub(crate) fn diff_channel(&self) -> Vec<Complex64> {
        self.values.iter().flat_map(|v| v.diff_part().coeffs().to_vec()).collect()
    }

    pub(crate) fn from_channels(mesh: Arc<SurfaceMesh>, sum: &[Complex64], diff: &[Complex64]) -> Result<Self> {
        let dim = mesh.dim();
        let size = 1usize << dim;
        if sum.len() != size * mesh.len() || diff.len() != size * mesh.len() {
            return Err(Error::Parameter("channel length does not match mesh".into()));
        }
        let values = sum
            .chunks(size)
            .zip(diff.chunks(size))
            .map(|(u, v)| {
                let u = Multivector::from_coeffs(dim, u.to_vec()).unwrap();
                let v = Multivector::from_coeffs(dim, v.to_vec()).unwrap();
                CirculantPair::from_sum_diff(&u, &v)
            })
            .collect();
        Self::new(mesh, values)
    }
}

/// `⟨L, K⟩_{𝓛₂}`.
pub fn inner_product(l: &BoundaryFunction, k: &BoundaryFunction) -> Result<Complex64> {
    l.inner(k)
}
