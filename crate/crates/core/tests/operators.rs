use std::f64::consts::PI;
use std::sync::Arc;

use hcliff::circulant::CirculantPair;
use hcliff::clifford::{Multivector, VectorR2n};
use hcliff::numdiff::hermitean_dirac_residual;
use hcliff::operators::{
    calibrate, cauchy_interior, cauchy_interior_by_channels, hardy_decompose, hilbert_adjoint, hilbert_h, kerzman_stein,
    szego_kernel_row, AdjointPath, BoundaryFunction, BoundaryOperator, HardyWitness, NodeMultiplier, SolverConfig,
    SzegoProjection,
};
use hcliff::surface::{mesh_circle, mesh_ellipse, mesh_ellipsoid_r4, mesh_sphere_s3, SurfaceMesh};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn circle(m: usize) -> Arc<SurfaceMesh> {
    Arc::new(mesh_circle(m).unwrap())
}

fn ellipse(m: usize) -> Arc<SurfaceMesh> {
    Arc::new(mesh_ellipse(m, 2.0, 1.0).unwrap())
}

fn rel(a: &BoundaryFunction, b: &BoundaryFunction) -> f64 {
    a.sub(b).unwrap().norm() / b.norm()
}

#[test]
fn ellipse_perimeter_matches_series() {
    // Ramanujan's second approximation, accurate to ~1e-10 for a/b = 2
    let (a, b) = (2.0f64, 1.0f64);
    let h = ((a - b) / (a + b)).powi(2);
    let perimeter = PI * (a + b) * (1.0 + 3.0 * h / (10.0 + (4.0 - 3.0 * h).sqrt()));
    assert!((ellipse(512).total_area() - perimeter).abs() < 1e-6 * perimeter);
}

#[test]
fn four_dimensional_grids_have_exact_area() {
    assert!((mesh_sphere_s3([8, 8, 8]).unwrap().total_area() - 2.0 * PI * PI).abs() < 1e-12);
    // a stretched sphere is still a closed surface with unit normals
    let e = mesh_ellipsoid_r4([8, 8, 8], [2.0, 1.0, 1.0, 1.0]).unwrap();
    assert!(e.total_area() > 2.0 * PI * PI);
    assert!(e.normals().iter().all(|n| (n.norm() - 1.0).abs() < 1e-12));
}

#[test]
fn mesh_csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ellipse.csv");
    let mesh = mesh_ellipse(32, 2.0, 1.0).unwrap();
    mesh.save(&path).unwrap();
    let back = SurfaceMesh::load(&path).unwrap();
    assert_eq!(back.len(), mesh.len());
    for k in 0..mesh.len() {
        assert_eq!(back.node(k), mesh.node(k));
        assert_eq!(back.weights()[k], mesh.weights()[k]);
    }
}

#[test]
fn cauchy_integral_vanishes_outside() {
    let mesh = circle(256);
    let w = HardyWitness::standard(mesh.clone(), 0.3).unwrap();
    let scale = cauchy_interior(&mesh, w.trace(), &VectorR2n::new(vec![0.2, -0.1]).unwrap()).unwrap().norm();
    for y in [[0.0, 1.4], [-1.6, 0.2], [0.9, -1.1]] {
        let outside = cauchy_interior(&mesh, w.trace(), &VectorR2n::new(y.to_vec()).unwrap()).unwrap();
        assert!(outside.norm() < 1e-6 * scale, "{y:?}: {}", outside.norm());
    }
}

#[test]
fn cauchy_integral_is_monogenic_inside() {
    let mesh = ellipse(128);
    let l = BoundaryFunction::random_smooth(mesh.clone(), 3, &mut ChaCha8Rng::seed_from_u64(3));
    for y in [[0.4, 0.2], [-0.8, -0.1]] {
        let y = VectorR2n::new(y.to_vec()).unwrap();
        let (r, s) = hermitean_dirac_residual(&|p: &VectorR2n| cauchy_interior(&mesh, &l, p), &y, 1e-4).unwrap();
        assert!(r.norm() < 1e-6 * s, "{} vs {s}", r.norm());
    }
}

#[test]
fn channel_form_matches_matrix_form() {
    let mesh = ellipse(64);
    let l = BoundaryFunction::random_smooth(mesh.clone(), 2, &mut ChaCha8Rng::seed_from_u64(4));
    let y = VectorR2n::new(vec![0.5, 0.3]).unwrap();
    let a = cauchy_interior(&mesh, &l, &y).unwrap();
    let b = cauchy_interior_by_channels(&mesh, &l, &y).unwrap();
    assert!(a.distance(&b) < 1e-12 * a.norm());
}

#[test]
fn calibration_reproduces_witness_on_ellipse_and_s3() {
    let cal = calibrate(&ellipse(256)).unwrap();
    assert_eq!(cal.orientation_sign, 1.0);
    assert!((cal.observed_ratio[0] - 1.0).abs() < 1e-6);
    let cal = calibrate(&Arc::new(mesh_sphere_s3([12, 12, 12]).unwrap())).unwrap();
    assert_eq!(cal.orientation_sign, 1.0);
    assert!((cal.observed_ratio[0] - 1.0).abs() < 1e-2, "{:?}", cal.observed_ratio);
}

#[test]
fn dense_adjoint_is_an_involution() {
    let mesh = circle(64);
    let h = Arc::new(hilbert_h(mesh.clone()));
    let dense = hcliff::operators::DenseHilbert::new(&h).unwrap();
    let l = BoundaryFunction::random_smooth(mesh, 2, &mut ChaCha8Rng::seed_from_u64(5));
    let twice = dense.adjoint().adjoint();
    assert!(rel(&twice.apply(&l).unwrap(), &dense.apply(&l).unwrap()) < 1e-12);
}

#[test]
fn adjoint_paths_agree_under_refinement() {
    let mut previous = f64::INFINITY;
    for m in [64, 128, 256] {
        let mesh = circle(m);
        let h = Arc::new(hilbert_h(mesh.clone()));
        let l = BoundaryFunction::random_smooth(mesh, 3, &mut ChaCha8Rng::seed_from_u64(6));
        let a = hilbert_adjoint(&h, AdjointPath::Dense).unwrap().apply(&l).unwrap();
        let b = hilbert_adjoint(&h, AdjointPath::Formula).unwrap().apply(&l).unwrap();
        let gap = rel(&a, &b);
        assert!(gap < previous);
        previous = gap;
    }
    assert!(previous < 1e-2);
}

#[test]
fn kerzman_stein_is_small_on_circle_only() {
    for (mesh, ball) in [(circle(256), true), (ellipse(256), false)] {
        let h: Arc<dyn BoundaryOperator> = Arc::new(hilbert_h(mesh.clone()));
        let a = kerzman_stein(h, mesh.clone());
        let w = HardyWitness::standard(mesh.clone(), 1.1).unwrap();
        let r = a.apply(w.trace()).unwrap().norm() / w.trace().norm();
        assert_eq!(r < 2e-2, ball, "{r}");
        assert_eq!(a.apply(&BoundaryFunction::zeros(mesh)).unwrap().norm(), 0.0);
    }
}

fn szego(mesh: &Arc<SurfaceMesh>) -> SzegoProjection {
    SzegoProjection::new(Arc::new(hilbert_h(mesh.clone())), SolverConfig::default())
}

#[test]
fn decomposition_of_hardy_and_complement_traces() {
    let mesh = ellipse(256);
    let s = szego(&mesh);
    let w = HardyWitness::standard(mesh.clone(), 0.3).unwrap();
    let (g, hc) = hardy_decompose(&s, w.trace()).unwrap();
    assert!(rel(&g, w.trace()) < 2e-2);
    assert!(hc.norm() < 2e-2 * w.trace().norm());
    let nw = NodeMultiplier::nu(mesh.clone()).apply(w.trace()).unwrap();
    let (g, hc) = hardy_decompose(&s, &nw).unwrap();
    assert!(g.norm() < 2e-2 * nw.norm());
    assert!(rel(&hc, w.trace()) < 2e-2);
}

#[test]
fn szego_and_cauchy_rows_agree_on_circle() {
    let mesh = circle(128);
    let s = szego(&mesh);
    let row = szego_kernel_row(&s, 5).unwrap();
    let impulse = BoundaryFunction::from_fn(mesh.clone(), |k, _| {
        let v = if k == 5 { 1.0 / mesh.weights()[5] } else { 0.0 };
        CirculantPair::new(Multivector::scalar(2, Complex64::new(v, 0.0)), Multivector::zero(2))
    })
    .unwrap();
    let c_row = s.apply_c(&impulse).unwrap();
    assert!(rel(&row, &c_row) < 5e-2, "{}", rel(&row, &c_row));
}

#[test]
fn kernel_rows_need_planar_meshes() {
    let mesh = Arc::new(mesh_sphere_s3([4, 4, 4]).unwrap());
    assert!(matches!(szego_kernel_row(&szego(&mesh), 0), Err(hcliff::Error::Capability(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn operators_are_linear(seed in any::<u64>(), re in -2.0..2.0f64, im in -2.0..2.0f64) {
        let mesh = ellipse(64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = BoundaryFunction::random_smooth(mesh.clone(), 3, &mut rng);
        let k = BoundaryFunction::random_smooth(mesh.clone(), 3, &mut rng);
        let a = Complex64::new(re, im);
        let h: Arc<dyn BoundaryOperator> = Arc::new(hilbert_h(mesh.clone()));
        let ops: Vec<Arc<dyn BoundaryOperator>> = vec![
            h.clone(),
            Arc::new(kerzman_stein(h, mesh.clone())),
            Arc::new(NodeMultiplier::alpha(mesh.clone())),
            Arc::new(szego(&mesh)),
        ];
        for op in ops {
            let lhs = op.apply(&l.scale(a).add(&k).unwrap()).unwrap();
            let rhs = op.apply(&l).unwrap().scale(a).add(&op.apply(&k).unwrap()).unwrap();
            // the Szegő solve is linear only up to its tolerance
            prop_assert!(lhs.sub(&rhs).unwrap().norm() <= 1e-8 * (1.0 + rhs.norm()), "{}", op.name());
        }
    }

    #[test]
    fn alpha_and_beta_ranges_are_orthogonal(seed in any::<u64>()) {
        let mesh = ellipse(48);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = BoundaryFunction::random_smooth(mesh.clone(), 2, &mut rng);
        let k = BoundaryFunction::random_smooth(mesh.clone(), 2, &mut rng);
        let al = NodeMultiplier::alpha(mesh.clone()).apply(&l).unwrap();
        let bk = NodeMultiplier::beta(mesh).apply(&k).unwrap();
        prop_assert!(al.inner(&bk).unwrap().norm() <= 1e-10 * l.norm() * k.norm());
    }
}
