//! Discrete Hilbert transforms `𝓗`, `𝓗|` and the matrix transform
//! `H = ½[[𝓗 + 𝓗|, -𝓗 + 𝓗|], [-𝓗 + 𝓗|, 𝓗 + 𝓗|]]`.
//!
//! At a target node `T`,
//! `[𝓗f](T) ≈ Σ_{Y ≠ T} 2 E(Y - T) ν(Y) w(Y) f(Y) + D(T) f(T)`,
//! and `𝓗|` uses `E|` and `ν|`. The principal value is taken by skipping the
//! diagonal. Under [`PvRule::ConstantCorrected`] the diagonal term is
//! `D(T) = 1 - Σ_{Y ≠ T} K(T, Y)`, which makes constants exact fixed points
//! (`𝓗1 = 1` holds for every smooth closed surface); under
//! [`PvRule::Punctured`] it is zero.
//!
//! `H` is circulant and acts as `𝓗|` on the sum channel `L1 + L2` and as
//! `𝓗` on the difference channel `L1 - L2`.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::function::BoundaryFunction;
use super::BoundaryOperator;
use crate::clifford::{blade_product_sign, BladeIndex, Multivector};
use crate::error::Result;
use crate::hermitean::apply_j_vector;
use crate::kernels::cauchy_factor;
use crate::surface::SurfaceMesh;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PvRule {
    /// Diagonal skipped, nothing added back.
    Punctured,
    /// Diagonal skipped, then `D(T) = 1 - Σ_{Y≠T} K(T,Y)` added so that
    /// constants are reproduced exactly.
    ConstantCorrected,
    /// Constant correction plus refined near-field quadrature on
    /// parametrised meshes.
    #[default]
    PatchCorrected,
}

/// Patch half-width (in cells) and sub-grid points per cell and direction.
const PATCH_RADIUS: usize = 2;
const PATCH_SUBDIVISION: usize = 4;

/// Bivector bookkeeping for products of two vectors: `ab = -a·b + Σ_{i<j}
/// (a_i b_j - a_j b_i) e_{ij}`.
#[derive(Clone, Debug)]
struct BivectorTable {
    dim: usize,
    pairs: Vec<(usize, usize, usize)>,
    /// `signs[p][B]` is the sign of `e_{ij} e_B`.
    signs: Vec<Vec<f64>>,
}

impl BivectorTable {
    fn new(dim: usize) -> Self {
        let mut pairs = Vec::new();
        let mut signs = Vec::new();
        for i in 0..dim {
            for j in i + 1..dim {
                let blade = (1usize << i) | (1usize << j);
                pairs.push((i, j, blade));
                let row = (0..1usize << dim)
                    .map(|b| {
                        let (s, _) = blade_product_sign(BladeIndex(blade as u16), BladeIndex(b as u16), dim).unwrap();
                        s as f64
                    })
                    .collect();
                signs.push(row);
            }
        }
        BivectorTable { dim, pairs, signs }
    }

    /// Coefficients `(scalar, wedge_ij...)` of `scale * a b`.
    #[inline]
    fn product(&self, a: &[f64], b: &[f64], scale: f64, wedge: &mut [f64]) -> f64 {
        let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
        for (p, &(i, j, _)) in self.pairs.iter().enumerate() {
            wedge[p] = scale * (a[i] * b[j] - a[j] * b[i]);
        }
        -scale * dot
    }

    /// `out += (s + Σ w_p e_p) f`.
    #[inline]
    fn left_apply(&self, out: &mut [Complex64], scalar: f64, wedge: &[f64], f: &[Complex64]) {
        for (o, x) in out.iter_mut().zip(f) {
            *o += x * scalar;
        }
        for (p, &(_, _, blade)) in self.pairs.iter().enumerate() {
            let c = wedge[p];
            if c == 0.0 {
                continue;
            }
            let signs = &self.signs[p];
            for (b, x) in f.iter().enumerate() {
                out[blade ^ b] += x * (c * signs[b]);
            }
        }
    }

    fn to_multivector(&self, scalar: f64, wedge: &[f64]) -> Multivector {
        let mut m = Multivector::scalar(self.dim, Complex64::new(scalar, 0.0));
        for (p, &(_, _, blade)) in self.pairs.iter().enumerate() {
            m.coeffs_mut()[blade] = Complex64::new(wedge[p], 0.0);
        }
        m
    }
}

/// Target-row correction: source node and `[scalar, wedge...]` deltas.
type PatchEntry = (usize, Vec<f64>);

/// `𝓗` (plain) or `𝓗|` (rotated) acting on Clifford-valued functions.
#[derive(Clone, Debug)]
pub struct OrthogonalHilbert {
    mesh: Arc<SurfaceMesh>,
    rotated: bool,
    rule: PvRule,
    /// Node positions, rotated by `J` for `𝓗|` (the kernel argument is
    /// `J[Y - T] = J[Y] - J[T]`).
    points: Vec<Vec<f64>>,
    /// `ν` or `ν|` per node.
    normals: Vec<Vec<f64>>,
    table: BivectorTable,
    diagonal: Vec<Multivector>,
    /// Near-field corrections `K_patch(T, Y) - K(T, Y)`, sorted by `Y`, as
    /// `(Y, [scalar, wedge...])`.
    patches: Vec<Vec<PatchEntry>>,
}

impl OrthogonalHilbert {
    pub fn new(mesh: Arc<SurfaceMesh>, rotated: bool, rule: PvRule) -> Self {
        let dim = mesh.dim();
        let points = mesh
            .nodes()
            .iter()
            .map(|x| if rotated { apply_j_vector(x).components().to_vec() } else { x.components().to_vec() })
            .collect();
        let normals = if rotated { mesh.normals_j() } else { mesh.normals() }
            .iter()
            .map(|v| v.components().to_vec())
            .collect();
        let mut op = OrthogonalHilbert {
            mesh,
            rotated,
            rule,
            points,
            normals,
            table: BivectorTable::new(dim),
            diagonal: Vec::new(),
            patches: Vec::new(),
        };
        if rule == PvRule::PatchCorrected {
            op.patches = op.patch_corrections().unwrap_or_default();
        }
        op.diagonal = match rule {
            PvRule::Punctured => vec![Multivector::zero(dim); op.mesh.len()],
            _ => op.row_sums().into_iter().map(|s| &Multivector::one(dim) - &s).collect(),
        };
        op
    }

    /// True when near-field patches are in use.
    pub fn is_patch_corrected(&self) -> bool {
        !self.patches.is_empty()
    }

    fn patch_corrections(&self) -> Option<Vec<Vec<PatchEntry>>> {
        let grid = self.mesh.hopf_grid()?;
        let p = PATCH_RADIUS as isize;
        let q = PATCH_SUBDIVISION;
        if grid.resolution.iter().any(|&r| r < 2 * PATCH_RADIUS + 1) {
            return None;
        }
        let [ns, n1, n2] = grid.resolution;
        let steps = grid.steps();
        let sub_volume = steps.iter().product::<f64>() / (q * q * q) as f64;
        let pairs = self.table.pairs.len();
        let rotate = |v: [f64; 4]| if self.rotated { [v[2], v[3], -v[0], -v[1]] } else { v };
        let wrap = |i: isize, n: usize| i.rem_euclid(n as isize) as usize;
        // trilinear hat weights along one direction, clamped at the ends of `s`
        let hats = |c: f64, n: usize, periodic: bool| -> [(usize, f64); 2] {
            let lo = c.floor();
            let frac = c - lo;
            let lo = lo as isize;
            if periodic {
                [(wrap(lo, n), 1.0 - frac), (wrap(lo + 1, n), frac)]
            } else if lo < 0 {
                [(0, 1.0), (0, 0.0)]
            } else if lo as usize >= n - 1 {
                [(n - 1, 1.0), (n - 1, 0.0)]
            } else {
                [(lo as usize, 1.0 - frac), (lo as usize + 1, frac)]
            }
        };
        let out = (0..self.mesh.len())
            .into_par_iter()
            .map(|t| {
                let [ti, tj, tk] = grid.cell(t);
                let pt = &self.points[t];
                let mut acc: std::collections::BTreeMap<usize, Vec<f64>> = Default::default();
                let mut wedge = vec![0.0; pairs];
                for di in -p..=p {
                    let ci = ti as isize + di;
                    if ci < 0 || ci >= ns as isize {
                        continue;
                    }
                    for dj in -p..=p {
                        let cj = wrap(tj as isize + dj, n1);
                        for dk in -p..=p {
                            let ck = wrap(tk as isize + dk, n2);
                            let c = grid.index(ci as usize, cj, ck);
                            if c != t {
                                let s = self.kernel_coeffs(t, c, &mut wedge);
                                let e = acc.entry(c).or_insert_with(|| vec![0.0; 1 + pairs]);
                                e[0] -= s;
                                for (a, w) in e[1..].iter_mut().zip(&wedge) {
                                    *a -= w;
                                }
                            }
                            for a in 0..q {
                                let us = ci as f64 + (a as f64 + 0.5) / q as f64;
                                for b in 0..q {
                                    let u1 = cj as f64 + (b as f64 + 0.5) / q as f64;
                                    for d in 0..q {
                                        let u2 = ck as f64 + (d as f64 + 0.5) / q as f64;
                                        let (x, nu, density) = grid.evaluate(us * steps[0], u1 * steps[1], u2 * steps[2]);
                                        let (x, nu) = (rotate(x), rotate(nu));
                                        let mut diff = [0.0; 4];
                                        let mut r2 = 0.0;
                                        for k in 0..4 {
                                            diff[k] = x[k] - pt[k];
                                            r2 += diff[k] * diff[k];
                                        }
                                        let scale = 2.0 * density * sub_volume * cauchy_factor(2, r2.sqrt());
                                        let s = self.table.product(&diff, &nu, scale, &mut wedge);
                                        for (yi, wi) in hats(us - 0.5, ns, false) {
                                            for (yj, wj) in hats(u1 - 0.5, n1, true) {
                                                for (yk, wk) in hats(u2 - 0.5, n2, true) {
                                                    let h = wi * wj * wk;
                                                    let y = grid.index(yi, yj, yk);
                                                    if h == 0.0 || y == t {
                                                        continue;
                                                    }
                                                    let e = acc.entry(y).or_insert_with(|| vec![0.0; 1 + pairs]);
                                                    e[0] += h * s;
                                                    for (a, w) in e[1..].iter_mut().zip(&wedge) {
                                                        *a += h * w;
                                                    }
                                                }
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
                acc.into_iter().collect()
            })
            .collect();
        Some(out)
    }

    fn patch_delta(&self, t: usize, y: usize) -> Option<&[f64]> {
        let row = self.patches.get(t)?;
        row.binary_search_by_key(&y, |e| e.0).ok().map(|i| row[i].1.as_slice())
    }

    pub fn mesh(&self) -> &Arc<SurfaceMesh> {
        &self.mesh
    }

    pub fn is_rotated(&self) -> bool {
        self.rotated
    }

    pub fn rule(&self) -> PvRule {
        self.rule
    }

    /// The diagonal term `D(T)` at node `t`.
    pub fn diagonal(&self, t: usize) -> &Multivector {
        &self.diagonal[t]
    }

    /// Scalar and wedge coefficients of `K(t, y) = 2 w_y E(Y - T) ν(Y)`.
    #[inline]
    fn kernel_coeffs(&self, t: usize, y: usize, wedge: &mut [f64]) -> f64 {
        let pt = &self.points[t];
        let py = &self.points[y];
        let mut a = [0.0f64; crate::clifford::MAX_DIM];
        let mut r2 = 0.0;
        for k in 0..pt.len() {
            a[k] = py[k] - pt[k];
            r2 += a[k] * a[k];
        }
        let n = pt.len() / 2;
        let scale = 2.0 * self.mesh.weights()[y] * cauchy_factor(n, r2.sqrt());
        self.table.product(&a[..pt.len()], &self.normals[y], scale, wedge)
    }

    /// The off-diagonal kernel entry `K(t, y)` as a multivector.
    pub fn kernel_entry(&self, t: usize, y: usize) -> Multivector {
        if t == y {
            return self.diagonal[t].clone();
        }
        let mut wedge = vec![0.0; self.table.pairs.len()];
        let mut s = self.kernel_coeffs(t, y, &mut wedge);
        if let Some(d) = self.patch_delta(t, y) {
            s += d[0];
            for (w, dw) in wedge.iter_mut().zip(&d[1..]) {
                *w += dw;
            }
        }
        self.table.to_multivector(s, &wedge)
    }

    fn row_sums(&self) -> Vec<Multivector> {
        let m = self.mesh.len();
        (0..m)
            .into_par_iter()
            .map(|t| {
                let mut wedge = vec![0.0; self.table.pairs.len()];
                let mut scalar = 0.0;
                let mut wedge_sum = vec![0.0; self.table.pairs.len()];
                for y in 0..m {
                    if y == t {
                        continue;
                    }
                    scalar += self.kernel_coeffs(t, y, &mut wedge);
                    for (acc, w) in wedge_sum.iter_mut().zip(&wedge) {
                        *acc += w;
                    }
                }
                for (_, d) in self.patches.get(t).map(Vec::as_slice).unwrap_or_default() {
                    scalar += d[0];
                    for (acc, w) in wedge_sum.iter_mut().zip(&d[1..]) {
                        *acc += w;
                    }
                }
                self.table.to_multivector(scalar, &wedge_sum)
            })
            .collect()
    }

    /// Applies the operator to node-major flat coefficients.
    pub fn apply_flat(&self, f: &[Complex64]) -> Vec<Complex64> {
        let size = 1usize << self.mesh.dim();
        let m = self.mesh.len();
        assert_eq!(f.len(), size * m);
        let mut out = vec![Complex64::new(0.0, 0.0); size * m];
        out.par_chunks_mut(size).enumerate().for_each(|(t, chunk)| {
            let mut wedge = vec![0.0; self.table.pairs.len()];
            for y in 0..m {
                if y == t {
                    continue;
                }
                let s = self.kernel_coeffs(t, y, &mut wedge);
                self.table.left_apply(chunk, s, &wedge, &f[y * size..(y + 1) * size]);
            }
            for (y, d) in self.patches.get(t).map(Vec::as_slice).unwrap_or_default() {
                self.table.left_apply(chunk, d[0], &d[1..], &f[y * size..(y + 1) * size]);
            }
            if self.rule != PvRule::Punctured {
                crate::clifford::mul_acc(
                    chunk,
                    self.diagonal[t].coeffs(),
                    &f[t * size..(t + 1) * size],
                    self.mesh.dim(),
                    Complex64::new(1.0, 0.0),
                );
            }
        });
        out
    }

    pub fn apply(&self, f: &[Multivector]) -> Vec<Multivector> {
        let dim = self.mesh.dim();
        let flat: Vec<Complex64> = f.iter().flat_map(|m| m.coeffs().to_vec()).collect();
        self.apply_flat(&flat)
            .chunks(1 << dim)
            .map(|c| Multivector::from_coeffs(dim, c.to_vec()).unwrap())
            .collect()
    }
}

/// The matrix Hilbert transform `H`.
#[derive(Clone, Debug)]
pub struct MatrixHilbert {
    plain: OrthogonalHilbert,
    rotated: OrthogonalHilbert,
}

impl MatrixHilbert {
    pub fn new(mesh: Arc<SurfaceMesh>, rule: PvRule) -> Self {
        MatrixHilbert {
            plain: OrthogonalHilbert::new(mesh.clone(), false, rule),
            rotated: OrthogonalHilbert::new(mesh, true, rule),
        }
    }

    pub fn mesh(&self) -> &Arc<SurfaceMesh> {
        self.plain.mesh()
    }

    pub fn rule(&self) -> PvRule {
        self.plain.rule()
    }

    /// `𝓗`.
    pub fn plain(&self) -> &OrthogonalHilbert {
        &self.plain
    }

    /// `𝓗|`.
    pub fn rotated(&self) -> &OrthogonalHilbert {
        &self.rotated
    }
}

impl BoundaryOperator for MatrixHilbert {
    fn apply(&self, f: &BoundaryFunction) -> Result<BoundaryFunction> {
        f.check_mesh(self.mesh())?;
        let sum = self.rotated.apply_flat(&f.sum_channel());
        let diff = self.plain.apply_flat(&f.diff_channel());
        BoundaryFunction::from_channels(self.mesh().clone(), &sum, &diff)
    }

    fn name(&self) -> String {
        "H".into()
    }
}

/// `H` on the given mesh with the default principal-value rule.
pub fn hilbert_h(mesh: Arc<SurfaceMesh>) -> MatrixHilbert {
    MatrixHilbert::new(mesh, PvRule::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circulant::CirculantPair;
    use crate::surface::{mesh_circle, mesh_ellipse};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_maps_to_zero() {
        let mesh = Arc::new(mesh_circle(32).unwrap());
        let h = hilbert_h(mesh.clone());
        let out = h.apply(&BoundaryFunction::zeros(mesh)).unwrap();
        assert_eq!(out.norm(), 0.0);
    }

    #[test]
    fn corrected_rule_fixes_constants() {
        let mesh = Arc::new(mesh_ellipse(64, 2.0, 1.0).unwrap());
        let h = MatrixHilbert::new(mesh.clone(), PvRule::ConstantCorrected);
        let c = CirculantPair::new(Multivector::one(2), Multivector::generator(2, 2));
        let l = BoundaryFunction::from_fn(mesh, |_, _| c.clone()).unwrap();
        assert!(h.apply(&l).unwrap().sub(&l).unwrap().norm() < 1e-12 * l.norm());
    }

    #[test]
    fn punctured_rule_misses_diagonal_on_circle() {
        // On the uniform circle the punctured rule maps 1 to (M-1)/M.
        let m = 64;
        let mesh = Arc::new(mesh_circle(m).unwrap());
        let h = MatrixHilbert::new(mesh.clone(), PvRule::Punctured);
        let l = BoundaryFunction::from_fn(mesh, |_, _| CirculantPair::identity(2)).unwrap();
        let out = h.apply(&l).unwrap();
        let expected = (m as f64 - 1.0) / m as f64;
        for v in out.values() {
            assert!((v.first.scalar_part().re - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn channel_action_matches_literal_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mesh = Arc::new(mesh_ellipse(48, 1.5, 1.0).unwrap());
        let h = hilbert_h(mesh.clone());
        let l = BoundaryFunction::random_smooth(mesh.clone(), 3, &mut rng);
        let l1: Vec<Multivector> = l.values().iter().map(|v| v.first.clone()).collect();
        let l2: Vec<Multivector> = l.values().iter().map(|v| v.second.clone()).collect();
        let (h1, hj1) = (h.plain().apply(&l1), h.rotated().apply(&l1));
        let (h2, hj2) = (h.plain().apply(&l2), h.rotated().apply(&l2));
        // first = ½(𝓗+𝓗|)L1 + ½(-𝓗+𝓗|)L2, second = ½(-𝓗+𝓗|)L1 + ½(𝓗+𝓗|)L2
        let literal: Vec<CirculantPair> = (0..mesh.len())
            .map(|k| {
                let first = (&(&h1[k] + &hj1[k]) + &(&hj2[k] - &h2[k])).scale_real(0.5);
                let second = (&(&hj1[k] - &h1[k]) + &(&h2[k] + &hj2[k])).scale_real(0.5);
                CirculantPair::new(first, second)
            })
            .collect();
        let literal = BoundaryFunction::new(mesh, literal).unwrap();
        assert!(h.apply(&l).unwrap().sub(&literal).unwrap().norm() < 1e-12 * literal.norm());
    }
}
