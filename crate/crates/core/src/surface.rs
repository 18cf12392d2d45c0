//! Quadrature meshes for smooth closed surfaces in `R^{2n}` and their
//! Clifford-valued surface measures.
//!
//! Each node carries a positive weight approximating `dS`, the outward unit
//! normal `ν` and the rotated normal `ν| = J[ν]`. Node order is fixed by the
//! parametrisation (lexicographic in the angles), so assembled operators are
//! reproducible.

use std::f64::consts::PI;
use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circulant::CirculantPair;
use crate::clifford::{embed_vector, Multivector, VectorR2n, MAX_DIM};
use crate::error::{Error, Result};
use crate::hermitean::apply_j_vector;
use crate::kernels::sphere_area;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SurfaceLabel {
    /// Unit sphere `S^{2n-1}`.
    UnitSphere { n: usize },
    Ellipse { a: f64, b: f64 },
    Ellipsoid4 { axes: [f64; 4] },
    Imported,
}

impl fmt::Display for SurfaceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceLabel::UnitSphere { n: 1 } => write!(f, "circle"),
            SurfaceLabel::UnitSphere { n } => write!(f, "S^{}", 2 * n - 1),
            SurfaceLabel::Ellipse { a, b } => write!(f, "ellipse({a},{b})"),
            SurfaceLabel::Ellipsoid4 { axes } => {
                write!(f, "ellipsoid4({},{},{},{})", axes[0], axes[1], axes[2], axes[3])
            }
            SurfaceLabel::Imported => write!(f, "imported"),
        }
    }
}

/// Parametrisation behind a Hopf-grid mesh of `S³` or of a 4D ellipsoid,
/// kept so that operators can refine quadrature near singular points.
#[derive(Clone, Debug, PartialEq)]
pub struct HopfGrid {
    pub resolution: [usize; 3],
    pub axes: [f64; 4],
}

impl HopfGrid {
    /// Parameter cell sizes `(Δs, Δξ1, Δξ2)`.
    pub fn steps(&self) -> [f64; 3] {
        let [a, b, c] = self.resolution;
        [1.0 / a as f64, 2.0 * PI / b as f64, 2.0 * PI / c as f64]
    }

    /// Node index of cell `(i, j, k)`.
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.resolution[1] + j) * self.resolution[2] + k
    }

    pub fn cell(&self, index: usize) -> [usize; 3] {
        let [_, b, c] = self.resolution;
        [index / (b * c), (index / c) % b, index % c]
    }

    /// Point, outward unit normal and area density (per unit parameter
    /// volume) at parameters `(s, ξ1, ξ2)`.
    pub fn evaluate(&self, s: f64, xi1: f64, xi2: f64) -> ([f64; 4], [f64; 4], f64) {
        let eta = s.sqrt().asin();
        let (c, sn) = (eta.cos(), eta.sin());
        let u = [c * xi1.cos(), sn * xi2.cos(), c * xi1.sin(), sn * xi2.sin()];
        let mut x = [0.0; 4];
        let mut g = [0.0; 4];
        for k in 0..4 {
            x[k] = u[k] * self.axes[k];
            g[k] = u[k] / self.axes[k];
        }
        let gn = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        let det: f64 = self.axes.iter().product();
        for v in g.iter_mut() {
            *v /= gn;
        }
        (x, g, 0.5 * det * gn)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceMesh {
    n: usize,
    nodes: Vec<VectorR2n>,
    weights: Vec<f64>,
    normals: Vec<VectorR2n>,
    normals_j: Vec<VectorR2n>,
    label: SurfaceLabel,
    grid: Option<HopfGrid>,
}

impl SurfaceMesh {
    /// Validates and assembles a mesh; `ν|` is derived from `ν`.
    pub fn new(nodes: Vec<VectorR2n>, weights: Vec<f64>, normals: Vec<VectorR2n>, label: SurfaceLabel) -> Result<Self> {
        let count = nodes.len();
        if count == 0 {
            return Err(Error::Parameter("mesh without nodes".into()));
        }
        if weights.len() != count || normals.len() != count {
            return Err(Error::Parameter(format!(
                "{count} nodes but {} weights and {} normals",
                weights.len(),
                normals.len()
            )));
        }
        let dim = nodes[0].dim();
        for (k, (x, nu)) in nodes.iter().zip(&normals).enumerate() {
            if x.dim() != dim || nu.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: x.dim().max(nu.dim()) });
            }
            if (nu.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::Parameter(format!("normal at node {k} has length {}", nu.norm())));
            }
        }
        if let Some(k) = weights.iter().position(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(Error::Parameter(format!("weight at node {k} is not positive")));
        }
        let normals_j = normals.iter().map(apply_j_vector).collect();
        Ok(SurfaceMesh { n: dim / 2, nodes, weights, normals, normals_j, label, grid: None })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[VectorR2n] {
        &self.nodes
    }

    pub fn node(&self, k: usize) -> &VectorR2n {
        &self.nodes[k]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn normals(&self) -> &[VectorR2n] {
        &self.normals
    }

    pub fn normals_j(&self) -> &[VectorR2n] {
        &self.normals_j
    }

    pub fn label(&self) -> &SurfaceLabel {
        &self.label
    }

    /// The parametrisation, for meshes built on a Hopf grid.
    pub fn hopf_grid(&self) -> Option<&HopfGrid> {
        self.grid.as_ref()
    }

    pub fn total_area(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Characteristic node spacing `(area / M)^{1/(2n-1)}`.
    pub fn spacing(&self) -> f64 {
        (self.total_area() / self.len() as f64).powf(1.0 / (2 * self.n - 1) as f64)
    }

    pub fn circumradius(&self) -> f64 {
        self.nodes.iter().map(VectorR2n::norm).fold(0.0, f64::max)
    }

    /// True when every node lies on the unit sphere with `ν = node`.
    pub fn is_unit_ball(&self) -> bool {
        self.nodes.iter().zip(&self.normals).all(|(x, nu)| {
            (x.norm() - 1.0).abs() < 1e-12 && x.sub(nu).norm() < 1e-12
        })
    }

    /// Writes the CSV mesh format: header, then per node the `2n`
    /// coordinates, the weight and the `2n` normal components.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let dim = self.dim();
        let mut header: Vec<String> = Vec::with_capacity(2 * dim + 1);
        for prefix in ["x", "y"] {
            for j in 1..=self.n {
                header.push(format!("{prefix}{j}"));
            }
        }
        header.push("weight".into());
        for prefix in ["nx", "ny"] {
            for j in 1..=self.n {
                header.push(format!("{prefix}{j}"));
            }
        }
        writeln!(out, "{}", header.join(","))?;
        for k in 0..self.len() {
            let mut row: Vec<String> = self.nodes[k].components().iter().map(|v| v.to_string()).collect();
            row.push(self.weights[k].to_string());
            row.extend(self.normals[k].components().iter().map(|v| v.to_string()));
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines.next().ok_or_else(|| Error::MeshFormat("empty file".into()))??;
        let columns = header.split(',').count();
        if columns < 5 || (columns - 1) % 4 != 0 {
            return Err(Error::MeshFormat(format!("header has {columns} columns, expected 4n + 1")));
        }
        let dim = (columns - 1) / 2;
        if dim > MAX_DIM {
            return Err(Error::MeshFormat(format!("dimension {dim} exceeds {MAX_DIM}")));
        }
        let (mut nodes, mut weights, mut normals) = (Vec::new(), Vec::new(), Vec::new());
        for (row, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let values: Vec<f64> = line
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::MeshFormat(format!("row {}: {e}", row + 2)))?;
            if values.len() != columns {
                return Err(Error::MeshFormat(format!("row {} has {} fields", row + 2, values.len())));
            }
            nodes.push(VectorR2n::new(values[..dim].to_vec())?);
            weights.push(values[dim]);
            normals.push(VectorR2n::new(values[dim + 1..].to_vec())?);
        }
        SurfaceMesh::new(nodes, weights, normals, SurfaceLabel::Imported)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(file))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::read_csv(std::io::BufReader::new(file))
    }
}

/// Uniform nodes on the unit circle, `ν` = node, weights `2π/M`.
pub fn mesh_circle(nodes: usize) -> Result<SurfaceMesh> {
    if nodes < 4 {
        return Err(Error::Parameter(format!("circle mesh needs at least 4 nodes, got {nodes}")));
    }
    let h = 2.0 * PI / nodes as f64;
    let pts: Vec<VectorR2n> = (0..nodes)
        .map(|k| {
            let t = k as f64 * h;
            VectorR2n::new(vec![t.cos(), t.sin()]).unwrap()
        })
        .collect();
    SurfaceMesh::new(pts.clone(), vec![h; nodes], pts, SurfaceLabel::UnitSphere { n: 1 })
}

/// Ellipse `x²/a² + y²/b² = 1` sampled uniformly in the parameter angle,
/// with arc-length weights and normals from the gradient of the implicit
/// equation.
pub fn mesh_ellipse(nodes: usize, a: f64, b: f64) -> Result<SurfaceMesh> {
    if nodes < 8 {
        return Err(Error::Parameter(format!("ellipse mesh needs at least 8 nodes, got {nodes}")));
    }
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::Parameter(format!("degenerate ellipse axes ({a}, {b})")));
    }
    let h = 2.0 * PI / nodes as f64;
    let mut pts = Vec::with_capacity(nodes);
    let mut weights = Vec::with_capacity(nodes);
    let mut normals = Vec::with_capacity(nodes);
    for k in 0..nodes {
        let t = k as f64 * h;
        let (s, c) = t.sin_cos();
        pts.push(VectorR2n::new(vec![a * c, b * s])?);
        weights.push(h * (a * a * s * s + b * b * c * c).sqrt());
        let (gx, gy) = (c / a, s / b);
        let g = gx.hypot(gy);
        normals.push(VectorR2n::new(vec![gx / g, gy / g])?);
    }
    let label = if a == 1.0 && b == 1.0 { SurfaceLabel::UnitSphere { n: 1 } } else { SurfaceLabel::Ellipse { a, b } };
    SurfaceMesh::new(pts, weights, normals, label)
}

/// Hopf-coordinate product grid on `S³ ⊂ C²` (real coordinates ordered
/// `x1, x2, y1, y2`): `z1 = cos η e^{iξ1}`, `z2 = sin η e^{iξ2}`.
///
/// The grid is uniform in `s = sin²η ∈ (0, 1)` and in both phases, so every
/// cell has the same area `½ Δs Δξ1 Δξ2` and the weights sum to `2π²`. Nodes
/// sit at cell midpoints. When the phase counts are multiples of 4 the grid
/// is invariant under `J`, which shifts both phases by `-π/2`.
pub fn mesh_sphere_s3(resolution: [usize; 3]) -> Result<SurfaceMesh> {
    mesh_ellipsoid_r4(resolution, [1.0; 4])
}

/// Image of the Hopf grid under `diag(axes)`. Weights pick up the factor
/// `det(A) |A^{-T} u|` and normals are `A^{-T} u` normalised.
pub fn mesh_ellipsoid_r4(resolution: [usize; 3], axes: [f64; 4]) -> Result<SurfaceMesh> {
    if resolution.iter().any(|&r| r < 4) {
        return Err(Error::Parameter(format!("S³ grid needs at least 4 points per angle, got {resolution:?}")));
    }
    if axes.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
        return Err(Error::Parameter(format!("degenerate ellipsoid axes {axes:?}")));
    }
    let [n_s, n_xi1, n_xi2] = resolution;
    let d_s = 1.0 / n_s as f64;
    let d_xi1 = 2.0 * PI / n_xi1 as f64;
    let d_xi2 = 2.0 * PI / n_xi2 as f64;
    let unit = axes.iter().all(|a| *a == 1.0);
    let grid = HopfGrid { resolution, axes };

    let total = n_s * n_xi1 * n_xi2;
    let mut pts = Vec::with_capacity(total);
    let mut weights = Vec::with_capacity(total);
    let mut normals = Vec::with_capacity(total);
    let cell = d_s * d_xi1 * d_xi2;
    for i in 0..n_s {
        let s = (i as f64 + 0.5) * d_s;
        for j in 0..n_xi1 {
            let xi1 = (j as f64 + 0.5) * d_xi1;
            for k in 0..n_xi2 {
                let xi2 = (k as f64 + 0.5) * d_xi2;
                let (x, g, density) = grid.evaluate(s, xi1, xi2);
                pts.push(VectorR2n::new(x.to_vec())?);
                normals.push(VectorR2n::new(g.to_vec())?);
                weights.push(density * cell);
            }
        }
    }
    let label = if unit { SurfaceLabel::UnitSphere { n: 2 } } else { SurfaceLabel::Ellipsoid4 { axes } };
    let mut mesh = SurfaceMesh::new(pts, weights, normals, label)?;
    mesh.grid = Some(grid);
    Ok(mesh)
}

/// Analytic area of the unit sphere matching a mesh's dimension.
pub fn unit_sphere_area(n: usize) -> f64 {
    sphere_area(n)
}

/// `-¼ (-1)^{n(n+1)/2} (2i)^n`, the constant relating `dσ_Z` to
/// `dσ_X - i dσ_{X|}`.
pub fn hermitean_measure_constant(n: usize) -> Complex64 {
    let sign = if (n * (n + 1) / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    Complex64::new(0.0, 2.0).powi(n as i32) * (-0.25 * sign)
}

/// Clifford-valued measures at one node.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeMeasure {
    pub sigma_x: Multivector,
    pub sigma_xj: Multivector,
    pub sigma_z: Multivector,
    pub sigma_zdag: Multivector,
    /// `dΣ = [[dσ_Z, -dσ_{Z†}], [-dσ_{Z†}, dσ_Z]]`.
    pub sigma_matrix: CirculantPair,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceMeasure {
    pub nodes: Vec<NodeMeasure>,
}

pub fn surface_measures(mesh: &SurfaceMesh) -> SurfaceMeasure {
    let c = hermitean_measure_constant(mesh.n());
    let nodes = (0..mesh.len())
        .map(|k| {
            let w = mesh.weights()[k];
            let sigma_x = embed_vector(&mesh.normals()[k]).scale_real(w);
            let sigma_xj = embed_vector(&mesh.normals_j()[k]).scale_real(w);
            let sigma_z = (&sigma_x - &sigma_xj.scale(I)).scale(c);
            let sigma_zdag = (&sigma_x + &sigma_xj.scale(I)).scale(c);
            let sigma_matrix = CirculantPair::new(sigma_z.clone(), -&sigma_zdag);
            NodeMeasure { sigma_x, sigma_xj, sigma_z, sigma_zdag, sigma_matrix }
        })
        .collect();
    SurfaceMeasure { nodes }
}
