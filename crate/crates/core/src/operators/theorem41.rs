//! Residuals of the ball characterisations: each item vanishes (under
//! refinement) exactly when the surface is a sphere.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::algebra::{formula_adjoint, hardy_projection, kerzman_stein};
use super::function::BoundaryFunction;
use super::hilbert::MatrixHilbert;
use super::krylov::SolverConfig;
use super::multipliers::NodeMultiplier;
use super::szego::SzegoProjection;
use super::witness::HardyWitness;
use super::BoundaryOperator;
use crate::error::Result;
use crate::surface::SurfaceMesh;

/// Violations above this are flagged as expected on non-spherical surfaces.
pub const NONBALL_THRESHOLD: f64 = 0.1;

#[derive(Clone, Debug, Serialize)]
pub struct ItemResidual {
    pub item: String,
    pub statement: String,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flag: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem41Report {
    pub surface: String,
    pub nodes: usize,
    pub ball: bool,
    pub items: Vec<ItemResidual>,
}

impl Theorem41Report {
    pub fn item(&self, id: &str) -> Option<&ItemResidual> {
        self.items.iter().find(|i| i.item == id)
    }
}

/// `max_{T,Y} |⟨Y - T, ν_T + ν_Y⟩|`.
pub fn geometric_violation(mesh: &SurfaceMesh) -> f64 {
    let mut worst: f64 = 0.0;
    for (t, xt) in mesh.nodes().iter().enumerate() {
        for (y, xy) in mesh.nodes().iter().enumerate() {
            let v = xy.sub(xt).dot(&mesh.normals()[t].add(&mesh.normals()[y])).abs();
            worst = worst.max(v);
        }
    }
    worst
}

fn max_ratio<F>(inputs: &[BoundaryFunction], f: F) -> Result<f64>
where
    F: Fn(&BoundaryFunction) -> Result<f64>,
{
    let mut worst: f64 = 0.0;
    for l in inputs {
        worst = worst.max(f(l)? / l.norm());
    }
    Ok(worst)
}

/// Evaluates every item on a family of Hardy witnesses and on random smooth
/// functions. The Szegő comparison (`S = C` on balls) needs iterative solves
/// and runs only when a solver configuration is given.
pub fn theorem41_suite(mesh: Arc<SurfaceMesh>, seed: u64, szego: Option<SolverConfig>) -> Result<Theorem41Report> {
    let ball = mesh.is_unit_ball();
    let h = Arc::new(MatrixHilbert::new(mesh.clone(), Default::default()));
    let h_dyn: Arc<dyn BoundaryOperator> = h.clone();
    let nu = NodeMultiplier::nu(mesh.clone());
    let alpha = NodeMultiplier::alpha(mesh.clone());
    let beta = NodeMultiplier::beta(mesh.clone());
    let h_star = formula_adjoint(h_dyn.clone(), mesh.clone());
    let a = kerzman_stein(h_dyn.clone(), mesh.clone());

    let witnesses: Vec<BoundaryFunction> =
        HardyWitness::family(mesh.clone(), 3)?.into_iter().map(|w| w.trace().clone()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random: Vec<BoundaryFunction> =
        (0..2).map(|_| BoundaryFunction::random_smooth(mesh.clone(), 2, &mut rng)).collect();

    let mut items = Vec::new();
    let mut push = |item: &str, statement: &str, residual: f64| {
        let flag = (!ball && residual > NONBALL_THRESHOLD).then(|| "expected-nonball".to_string());
        items.push(ItemResidual { item: item.into(), statement: statement.into(), residual, flag });
    };

    push(
        "i",
        "alpha H alpha L = 0 and beta H beta L = 0",
        max_ratio(&random, |l| {
            let x = alpha.apply(&h.apply(&alpha.apply(l)?)?)?.norm();
            let y = beta.apply(&h.apply(&beta.apply(l)?)?)?.norm();
            Ok(x + y)
        })?,
    );
    push(
        "ii",
        "H alpha L = beta L",
        max_ratio(&witnesses, |l| Ok(h.apply(&alpha.apply(l)?)?.sub(&beta.apply(l)?)?.norm()))?,
    );
    push(
        "iii",
        "H beta L = alpha L",
        max_ratio(&witnesses, |l| Ok(h.apply(&beta.apply(l)?)?.sub(&alpha.apply(l)?)?.norm()))?,
    );
    push(
        "iv",
        "H nu L = -nu L",
        max_ratio(&witnesses, |l| {
            let nl = nu.apply(l)?;
            Ok(h.apply(&nl)?.add(&nl)?.norm())
        })?,
    );
    push(
        "v",
        "H H* = I",
        max_ratio(&random, |l| Ok(h.apply(&h_star.apply(l)?)?.sub(l)?.norm()))?,
    );
    push("vi", "A = 0", max_ratio(&witnesses, |l| Ok(a.apply(l)?.norm()))?);
    if let Some(config) = szego {
        let s = SzegoProjection::new(h.clone(), config);
        let c = hardy_projection(h_dyn.clone(), mesh.clone());
        push(
            "viii",
            "S = C",
            max_ratio(&random, |l| Ok(s.apply(l)?.sub(&c.apply(l)?)?.norm()))?,
        );
    }
    push("geometric", "<Y - T, nu_T + nu_Y> = 0", geometric_violation(&mesh));

    Ok(Theorem41Report { surface: mesh.label().to_string(), nodes: mesh.len(), ball, items })
}
