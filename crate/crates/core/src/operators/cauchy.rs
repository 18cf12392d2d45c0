//! Hermitean Cauchy integral `[Cℒ](Y) = ∫ ℰ(X - Y) dΣ(X) ℒ(X)` off the
//! surface, its orthogonal counterparts, and the one-off orientation
//! calibration.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::function::BoundaryFunction;
use super::witness::HardyWitness;
use crate::circulant::CirculantPair;
use crate::clifford::{embed_vector, Multivector, VectorR2n};
use crate::error::{Error, Result};
use crate::hermitean::apply_j_vector;
use crate::kernels::{kernel_e, kernel_ej, matrix_kernel};
use crate::surface::{hermitean_measure_constant, surface_measures, SurfaceMesh};

/// `(-1)^{n(n+1)/2} (2i)^n`, the constant in front of the boundary limits
/// `½(±ℒ + Hℒ)` of the Hermitean Cauchy integral.
pub fn jump_constant(n: usize) -> Complex64 {
    hermitean_measure_constant(n) * -4.0
}

/// Evaluation points closer than `NEAR_GUARD * spacing` to a node are
/// rejected.
pub const NEAR_GUARD: f64 = 1.0;

fn check_distance(mesh: &SurfaceMesh, y: &VectorR2n) -> Result<()> {
    let d = mesh.nodes().iter().map(|x| x.sub(y).norm()).fold(f64::INFINITY, f64::min);
    let guard = NEAR_GUARD * mesh.spacing();
    if d < guard {
        return Err(Error::NearSingular { distance: d, guard });
    }
    Ok(())
}

/// Quadrature sum of `ℰ(X - Y) dΣ(X) ℒ(X)`; includes the constant
/// `(-1)^{n(n+1)/2}(2i)^n` inherited from `dσ_Z`.
pub fn cauchy_interior(mesh: &Arc<SurfaceMesh>, l: &BoundaryFunction, y: &VectorR2n) -> Result<CirculantPair> {
    l.check_mesh(mesh)?;
    if y.dim() != mesh.dim() {
        return Err(Error::DimensionMismatch { expected: mesh.dim(), found: y.dim() });
    }
    check_distance(mesh, y)?;
    let measures = surface_measures(mesh);
    let mut acc = CirculantPair::zero(mesh.dim());
    for (k, x) in mesh.nodes().iter().enumerate() {
        let kernel = matrix_kernel(&x.sub(y))?;
        let term = &(&kernel * &measures.nodes[k].sigma_matrix) * l.value(k);
        acc = &acc + &term;
    }
    Ok(acc)
}

/// `𝒞[f](Y) = ∫ E(X - Y) dσ_X f(X)` (or `𝒞|` with `E|`, `dσ_{X|}`).
pub fn orthogonal_cauchy(mesh: &SurfaceMesh, f: &[Multivector], y: &VectorR2n, rotated: bool) -> Result<Multivector> {
    check_distance(mesh, y)?;
    let mut acc = Multivector::zero(mesh.dim());
    for (k, x) in mesh.nodes().iter().enumerate() {
        let d = x.sub(y);
        let (kernel, normal) = if rotated {
            (kernel_ej(&d)?, embed_vector(&mesh.normals_j()[k]))
        } else {
            (kernel_e(&d)?, embed_vector(&mesh.normals()[k]))
        };
        acc += &(&(&kernel * &normal) * &f[k]).scale_real(mesh.weights()[k]);
    }
    Ok(acc)
}

/// Same integral as [`cauchy_interior`] computed channelwise:
/// `c_n (𝒞|[L1 + L2], 𝒞[L1 - L2])` recombined into a circulant.
pub fn cauchy_interior_by_channels(mesh: &Arc<SurfaceMesh>, l: &BoundaryFunction, y: &VectorR2n) -> Result<CirculantPair> {
    l.check_mesh(mesh)?;
    let sums: Vec<Multivector> = l.values().iter().map(CirculantPair::sum_part).collect();
    let diffs: Vec<Multivector> = l.values().iter().map(CirculantPair::diff_part).collect();
    let c = jump_constant(mesh.n());
    let u = orthogonal_cauchy(mesh, &sums, y, true)?.scale(c);
    let v = orthogonal_cauchy(mesh, &diffs, y, false)?.scale(c);
    Ok(CirculantPair::from_sum_diff(&u, &v))
}

/// Outcome of comparing the Cauchy integral of a Hardy witness with the
/// witness itself at an interior point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    /// `(-1)^{n(n+1)/2}(2i)^n` as `[re, im]`.
    pub jump_constant: [f64; 2],
    /// Observed `C[ℒ](Y) / (c_n ℒ(Y))`, ideally `1`.
    pub observed_ratio: [f64; 2],
    /// Global orientation sign applied to normalised extensions.
    pub orientation_sign: f64,
}

impl Calibration {
    /// Normaliser turning `cauchy_interior` into the H-monogenic extension.
    pub fn normaliser(&self) -> Complex64 {
        Complex64::new(self.jump_constant[0], self.jump_constant[1]) * self.orientation_sign
    }
}

/// Fixes the orientation sign once: a witness trace must be reproduced by
/// its own normalised Cauchy integral at an interior point.
pub fn calibrate(mesh: &Arc<SurfaceMesh>) -> Result<Calibration> {
    let witness = HardyWitness::standard(mesh.clone(), 0.3)?;
    // a point well inside: shrink a node towards the centroid
    let centroid = centroid(mesh);
    let y = centroid.add(&mesh.node(0).sub(&centroid).scaled(0.2));
    let c = jump_constant(mesh.n());
    let integral = cauchy_interior(mesh, witness.trace(), &y)?;
    let exact = witness.evaluate(&y)?;
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    for (a, b) in exact.first.coeffs().iter().chain(exact.second.coeffs()).zip(integral.first.coeffs().iter().chain(integral.second.coeffs())) {
        num += a.conj() * b;
        den += a.norm_sqr();
    }
    let ratio = num / den / c;
    let sign = if ratio.re >= 0.0 { 1.0 } else { -1.0 };
    Ok(Calibration { jump_constant: [c.re, c.im], observed_ratio: [ratio.re, ratio.im], orientation_sign: sign })
}

pub(crate) fn centroid(mesh: &SurfaceMesh) -> VectorR2n {
    let area = mesh.total_area();
    let mut c = VectorR2n::zeros(mesh.n());
    for (x, w) in mesh.nodes().iter().zip(mesh.weights()) {
        c = c.add(&x.scaled(w / area));
    }
    c
}

/// Normalised interior extension `C[ℒ](Y) / (sign · c_n)`.
pub fn interior_extension(mesh: &Arc<SurfaceMesh>, l: &BoundaryFunction, y: &VectorR2n, cal: &Calibration) -> Result<CirculantPair> {
    let raw = cauchy_interior(mesh, l, y)?;
    Ok(raw.scale(cal.normaliser().inv()))
}

/// The interior point `T - t ν(T)`.
pub fn inward_point(mesh: &SurfaceMesh, node: usize, t: f64) -> VectorR2n {
    mesh.node(node).sub(&mesh.normals()[node].scaled(t))
}

/// `X|` as a multivector, for building `𝒳`.
pub(crate) fn rotated_embedding(x: &VectorR2n) -> Multivector {
    embed_vector(&apply_j_vector(x))
}
