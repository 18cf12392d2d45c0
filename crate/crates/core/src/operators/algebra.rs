//! Sums and products of boundary operators, and the named combinations
//! `C`, `C*`, `ν̲Hν̲` and `A`.

use std::sync::Arc;

use num_complex::Complex64;

use super::function::BoundaryFunction;
use super::multipliers::NodeMultiplier;
use super::BoundaryOperator;
use crate::error::Result;
use crate::surface::SurfaceMesh;

#[derive(Clone, Debug)]
pub struct Identity {
    mesh: Arc<SurfaceMesh>,
}

impl Identity {
    pub fn new(mesh: Arc<SurfaceMesh>) -> Self {
        Identity { mesh }
    }
}

impl BoundaryOperator for Identity {
    fn apply(&self, f: &BoundaryFunction) -> Result<BoundaryFunction> {
        f.check_mesh(&self.mesh)?;
        Ok(f.clone())
    }

    fn name(&self) -> String {
        "I".into()
    }
}

/// `Σ c_k T_k`.
#[derive(Clone)]
pub struct LinearCombination {
    terms: Vec<(Complex64, Arc<dyn BoundaryOperator>)>,
    name: String,
}

impl LinearCombination {
    pub fn new(terms: Vec<(Complex64, Arc<dyn BoundaryOperator>)>, name: impl Into<String>) -> Self {
        LinearCombination { terms, name: name.into() }
    }
}

impl BoundaryOperator for LinearCombination {
    fn apply(&self, f: &BoundaryFunction) -> Result<BoundaryFunction> {
        let mut out: Option<BoundaryFunction> = None;
        for (c, op) in &self.terms {
            let g = op.apply(f)?;
            out = Some(match out {
                None => g.scale(*c),
                Some(acc) => acc.axpy(*c, &g)?,
            });
        }
        Ok(out.unwrap_or_else(|| BoundaryFunction::zeros(f.mesh().clone())))
    }

    fn name(&self) -> String {
        self.name.clone()
    }
}

/// `T_1 T_2 ... T_k`: the rightmost factor is applied first.
#[derive(Clone)]
pub struct Product {
    factors: Vec<Arc<dyn BoundaryOperator>>,
    name: String,
}

impl Product {
    pub fn new(factors: Vec<Arc<dyn BoundaryOperator>>, name: impl Into<String>) -> Self {
        Product { factors, name: name.into() }
    }
}

impl BoundaryOperator for Product {
    fn apply(&self, f: &BoundaryFunction) -> Result<BoundaryFunction> {
        let mut g = f.clone();
        for op in self.factors.iter().rev() {
            g = op.apply(&g)?;
        }
        Ok(g)
    }

    fn name(&self) -> String {
        self.name.clone()
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `C = ½(I + H)`.
pub fn hardy_projection(h: Arc<dyn BoundaryOperator>, mesh: Arc<SurfaceMesh>) -> LinearCombination {
    let id: Arc<dyn BoundaryOperator> = Arc::new(Identity::new(mesh));
    LinearCombination::new(vec![(real(0.5), id), (real(0.5), h)], "C")
}

/// `ν̲ T ν̲`; for `T = H` this is the adjoint `H*`.
pub fn formula_adjoint(op: Arc<dyn BoundaryOperator>, mesh: Arc<SurfaceMesh>) -> Product {
    let nu: Arc<dyn BoundaryOperator> = Arc::new(NodeMultiplier::nu(mesh));
    let name = format!("nu {} nu", op.name());
    Product::new(vec![nu.clone(), op, nu], name)
}

/// `C* = ½(I + ν̲Hν̲)`.
pub fn hardy_projection_adjoint(h: Arc<dyn BoundaryOperator>, mesh: Arc<SurfaceMesh>) -> LinearCombination {
    let id: Arc<dyn BoundaryOperator> = Arc::new(Identity::new(mesh.clone()));
    let h_star: Arc<dyn BoundaryOperator> = Arc::new(formula_adjoint(h, mesh));
    LinearCombination::new(vec![(real(0.5), id), (real(0.5), h_star)], "C*")
}

/// `A = H - ν̲Hν̲`.
pub fn kerzman_stein(h: Arc<dyn BoundaryOperator>, mesh: Arc<SurfaceMesh>) -> LinearCombination {
    let h_star: Arc<dyn BoundaryOperator> = Arc::new(formula_adjoint(h.clone(), mesh));
    LinearCombination::new(vec![(real(1.0), h), (real(-1.0), h_star)], "A")
}
