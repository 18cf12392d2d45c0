use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{RunConfig, Suite, SurfaceKind};
use super::report::{Check, CheckKind, Report, Series};
use crate::circulant::CirculantPair;
use crate::clifford::{blade_product_sign, BladeIndex, Multivector, VectorR2n};
use crate::error::{Error, Result};
use crate::hermitean::{hermitean_vars, witt_basis};
use crate::kernels::{eps_discrepancy_factor, kernel_e, kernel_ej, kernel_eps, kernel_eps_dagger, matrix_kernel, HermiteanNorm};
use crate::numdiff::{dirac_j_residual, dirac_residual, hermitean_dirac_residual, laplacian_circulant};
use crate::operators::cauchy::inward_point;
use crate::operators::{
    calibrate, hardy_decompose, hardy_projection, hilbert_adjoint, hilbert_h, interior_extension,
    geometric_violation, kerzman_stein, theorem41_suite, AdjointPath, BoundaryFunction, BoundaryOperator, DirichletSolver, HardyWitness,
    NodeMultiplier, SolverConfig, SzegoProjection, NONBALL_THRESHOLD,
};
use crate::poly::{dirac, dirac_z, dirac_zdag, laplacian, max_difference, MultivectorPolynomial};
use crate::surface::SurfaceMesh;

const NONBALL: &str = "expected-nonball";

/// Runs one suite. The report depends only on the configuration.
pub fn run_suite(config: &RunConfig) -> Result<Report> {
    config.validate()?;
    let mut report = Report::new(config);
    let mut ctx = Ctx { config, report: &mut report };
    match config.suite {
        Suite::Algebra => algebra(&mut ctx),
        Suite::Differential => differential(&mut ctx),
        Suite::Kernels => kernels(&mut ctx),
        Suite::Jump => jump(&mut ctx),
        Suite::OperatorIdentities => operator_identities(&mut ctx),
        Suite::KerzmanStein => kerzman_stein_suite(&mut ctx),
        Suite::Szego => szego(&mut ctx),
        Suite::Theorem41 => theorem41(&mut ctx),
        Suite::Dirichlet => dirichlet(&mut ctx),
        Suite::S3Smoke => s3_smoke(&mut ctx),
    }?;
    Ok(report)
}

struct Ctx<'a> {
    config: &'a RunConfig,
    report: &'a mut Report,
}

impl Ctx<'_> {
    /// Adds a check named `series.name + suffix`; the threshold can be
    /// overridden under that name.
    fn gate(&mut self, series: &Series, suffix: &str, kind: CheckKind, default: f64, hard: bool) {
        // monotonicity needs a ladder to speak of
        if kind == CheckKind::Decreasing && series.residuals.len() < 2 {
            return;
        }
        let name = format!("{}{suffix}", series.name);
        let threshold = self.config.threshold(&name, default);
        self.report.push(Check::new(series, kind, Some(threshold), hard).named(&name));
    }

    fn gate_flagged(&mut self, series: &Series, kind: CheckKind, default: f64, hard: bool, flag: Option<&str>) {
        let threshold = self.config.threshold(&series.name, default);
        self.report.push(Check::new(series, kind, Some(threshold), hard).with_flag(flag));
    }

    fn info(&mut self, series: &Series, flag: Option<&str>) {
        self.report.push(Check::new(series, CheckKind::Info, None, false).with_flag(flag));
    }

    fn ladder(&self) -> Result<&[usize]> {
        if self.config.nodes.is_empty() {
            return Err(Error::Config(format!("suite {} needs a node ladder", self.config.suite)));
        }
        Ok(&self.config.nodes)
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        rng.set_stream(stream);
        rng
    }

    fn solver(&self) -> SolverConfig {
        SolverConfig { tol: self.config.tol, ..SolverConfig::default() }
    }

    fn mesh(&mut self, nodes: usize) -> Result<Arc<SurfaceMesh>> {
        let mesh = self.config.surface.build(nodes)?;
        self.report.surface = Some(mesh.label().to_string());
        Ok(mesh)
    }
}

fn rel(a: &BoundaryFunction, b: &BoundaryFunction, reference: &BoundaryFunction) -> Result<f64> {
    Ok(a.sub(b)?.norm() / reference.norm())
}

fn random_multivector(dim: usize, rng: &mut ChaCha8Rng) -> Multivector {
    let coeffs = (0..1usize << dim).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    Multivector::from_coeffs(dim, coeffs).expect("sized to dim")
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_point(n: usize, rng: &mut ChaCha8Rng) -> VectorR2n {
    loop {
        let v: Vec<f64> = (0..2 * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.1 {
            let r = rng.gen_range(0.5..2.0);
            return VectorR2n::new(v.iter().map(|x| x * r / norm).collect()).expect("even length");
        }
    }
}

/// `e_A e_B` by writing out the generator word, sorting it with
/// anticommuting swaps and contracting `e_i e_i = -1`.
fn blade_sign_by_reduction(a: u16, b: u16) -> (i8, u16) {
    let mut word: Vec<u32> = (0..16).filter(|i| a & (1 << i) != 0).collect();
    word.extend((0..16).filter(|i| b & (1 << i) != 0));
    let mut sign = 1i8;
    for i in 0..word.len() {
        for j in 0..word.len() - 1 - i {
            if word[j] > word[j + 1] {
                word.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    let mut blade = 0u16;
    let mut k = 0;
    while k < word.len() {
        if k + 1 < word.len() && word[k] == word[k + 1] {
            sign = -sign;
            k += 2;
        } else {
            blade |= 1 << word[k];
            k += 1;
        }
    }
    (sign, blade)
}

fn algebra(ctx: &mut Ctx) -> Result<()> {
    let mut mismatches = 0usize;
    for dim in 1..=6 {
        for a in 0..1u16 << dim {
            for b in 0..1u16 << dim {
                let (s, c) = blade_product_sign(BladeIndex(a), BladeIndex(b), dim)?;
                if (s, c.0) != blade_sign_by_reduction(a, b) {
                    mismatches += 1;
                }
            }
        }
    }
    ctx.gate(
        &Series::single("blade_sign_oracle", "e_A e_B sign agrees with generator-word reduction (m <= 6)", mismatches as f64),
        "",
        CheckKind::AtMost,
        0.0,
        true,
    );

    let mut rng = ctx.rng(1);
    let (mut assoc, mut distrib, mut conj) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..ctx.config.samples {
        let dim = rng.gen_range(1..=6);
        let a = random_multivector(dim, &mut rng);
        let b = random_multivector(dim, &mut rng);
        let c = random_multivector(dim, &mut rng);
        let scale3 = a.norm() * b.norm() * c.norm();
        assoc = assoc.max((&(&a * &b) * &c).distance(&(&a * &(&b * &c))) / scale3);
        let lhs = &a * &(&b + &c);
        distrib = distrib.max(lhs.distance(&(&(&a * &b) + &(&a * &c))) / (a.norm() * (b.norm() + c.norm())));
        let ab = &a * &b;
        let scale2 = a.norm() * b.norm();
        let bar = ab.clifford_conjugate().distance(&(&b.clifford_conjugate() * &a.clifford_conjugate()));
        let dag = ab.hermitean_dagger().distance(&(&b.hermitean_dagger() * &a.hermitean_dagger()));
        conj = conj.max(bar.max(dag) / scale2);
    }
    ctx.gate(&Series::single("associativity", "(ab)c = a(bc)", assoc), "", CheckKind::AtMost, 1e-12, true);
    ctx.gate(&Series::single("distributivity", "a(b + c) = ab + ac", distrib), "", CheckKind::AtMost, 1e-12, true);
    ctx.gate(
        &Series::single("conjugation", "conj(ab) = conj(b) conj(a) and (ab)^dag = b^dag a^dag", conj),
        "",
        CheckKind::AtMost,
        1e-12,
        true,
    );

    let mut witt = 0.0f64;
    for n in 1..=3 {
        let w = witt_basis(n)?;
        let dim = 2 * n;
        let anti = |a: &Multivector, b: &Multivector| &(a * b) + &(b * a);
        for j in 1..=n {
            witt = witt.max(w.f(j).hermitean_dagger().distance(w.f_dag(j)));
            let i = w.idempotent(j);
            witt = witt.max((&i * &i).distance(&i));
            for k in 1..=n {
                witt = witt.max(anti(w.f(j), w.f(k)).norm());
                witt = witt.max(anti(w.f_dag(j), w.f_dag(k)).norm());
                let delta = if j == k { Multivector::one(dim) } else { Multivector::zero(dim) };
                witt = witt.max(anti(w.f(j), w.f_dag(k)).distance(&delta));
            }
        }
        for _ in 0..10 {
            let x = random_point(n, &mut rng);
            let (z, zd) = hermitean_vars(&x);
            let r2 = Multivector::scalar(dim, Complex64::new(x.dot(&x), 0.0));
            witt = witt.max(anti(&z, &zd).distance(&r2) / x.dot(&x));
        }
    }
    ctx.gate(
        &Series::single(
            "witt_identities",
            "f_j f_k + f_k f_j = 0, f_j f_k^dag + f_k^dag f_j = delta_jk, I_j^2 = I_j, Z Z^dag + Z^dag Z = |X|^2 (n <= 3)",
            witt,
        ),
        "",
        CheckKind::AtMost,
        1e-14,
        true,
    );
    Ok(())
}

fn differential(ctx: &mut Ctx) -> Result<()> {
    let mut rng = ctx.rng(2);
    let (mut dz2, mut dzd2, mut lap_x, mut lap_z) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for k in 0..ctx.config.samples {
        let n = 1 + k % 2;
        let p = MultivectorPolynomial::random(n, 4, 6, &mut rng);
        let lap = laplacian(&p);
        let scale = p.max_coeff().max(lap.max_coeff()).max(1.0);
        let zero = MultivectorPolynomial::zero(n);
        dz2 = dz2.max(max_difference(&dirac_z(&dirac_z(&p)), &zero) / scale);
        dzd2 = dzd2.max(max_difference(&dirac_zdag(&dirac_zdag(&p)), &zero) / scale);
        let minus_dx2 = dirac(&dirac(&p)).scale(Complex64::new(-1.0, 0.0));
        lap_x = lap_x.max(max_difference(&lap, &minus_dx2) / scale);
        let mixed = dirac_z(&dirac_zdag(&p)).add(&dirac_zdag(&dirac_z(&p))).scale(Complex64::new(4.0, 0.0));
        lap_z = lap_z.max(max_difference(&lap, &mixed) / scale);
    }
    ctx.gate(&Series::single("dz_squared", "(d_Z)^2 = 0", dz2), "", CheckKind::AtMost, 1e-10, true);
    ctx.gate(&Series::single("dzdag_squared", "(d_Zdag)^2 = 0", dzd2), "", CheckKind::AtMost, 1e-10, true);
    ctx.gate(&Series::single("laplacian_dirac", "Delta = -(d_X)^2", lap_x), "", CheckKind::AtMost, 1e-10, true);
    ctx.gate(
        &Series::single("laplacian_hermitean", "Delta = 4 (d_Z d_Zdag + d_Zdag d_Z)", lap_z),
        "",
        CheckKind::AtMost,
        1e-10,
        true,
    );
    Ok(())
}

fn kernels(ctx: &mut Ctx) -> Result<()> {
    let mut rng = ctx.rng(3);
    let (mut homog, mut mono_e, mut mono_ej, mut mono_eps) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for k in 0..ctx.config.samples {
        let n = 1 + k % 2;
        let x = random_point(n, &mut rng);
        let lambda: f64 = rng.gen_range(0.5..2.0);
        let power = lambda.powi(1 - 2 * n as i32);
        let scaled = x.scaled(lambda);
        for kernel in [kernel_e, kernel_ej, kernel_eps, kernel_eps_dagger] {
            let at_x = kernel(&x)?;
            homog = homog.max(kernel(&scaled)?.distance(&at_x.scale_real(power)) / (power * at_x.norm()));
        }
        let h = 1e-4 * x.norm();
        let (r, s) = dirac_residual(&kernel_e, &x, h)?;
        mono_e = mono_e.max(r.norm() / s);
        let (r, s) = dirac_j_residual(&kernel_ej, &x, h)?;
        mono_ej = mono_ej.max(r.norm() / s);
        let (r, s) = hermitean_dirac_residual(&matrix_kernel, &x, h)?;
        mono_eps = mono_eps.max(r.norm() / s);
    }
    ctx.gate(
        &Series::single("homogeneity", "K(lambda X) = lambda^(1-2n) K(X) for E, E|, eps, eps^dag", homog),
        "",
        CheckKind::AtMost,
        1e-13,
        true,
    );
    ctx.gate(&Series::single("monogenic_e", "d_X E = 0 off the origin", mono_e), "", CheckKind::AtMost, 1e-6, true);
    ctx.gate(&Series::single("monogenic_ej", "d_X| E| = 0 off the origin", mono_ej), "", CheckKind::AtMost, 1e-6, true);
    ctx.gate(
        &Series::single("monogenic_hermitean", "D_(Z,Zdag) of the circulant kernel vanishes off the origin", mono_eps),
        "",
        CheckKind::AtMost,
        1e-6,
        true,
    );
    for n in [1, 2] {
        let x = random_point(n, &mut rng);
        for (norm, tag) in [(HermiteanNorm::Anticommutator, "anticommutator"), (HermiteanNorm::Coefficient, "coefficient")] {
            let f = eps_discrepancy_factor(&x, norm)?;
            ctx.info(
                &Series::single(
                    &format!("eps_z_form_{tag}_n{n}"),
                    "|ratio - 1| between (2/w) Z/|Z|^(2n) and -(E + iE|)",
                    (f - 1.0).norm(),
                ),
                None,
            );
        }
    }
    Ok(())
}

fn jump(ctx: &mut Ctx) -> Result<()> {
    let ladder = ctx.ladder()?.to_vec();
    let mut series = Series::new("jump", "normalised C[L](T - t nu) -> (L + HL)/2 with t = 1.5 h");
    for &m in &ladder {
        let mesh = ctx.mesh(m)?;
        let cal = calibrate(&mesh)?;
        let h = hilbert_h(mesh.clone());
        let witness = HardyWitness::standard(mesh.clone(), 0.3)?;
        let l = witness.trace();
        let hl = h.apply(l)?;
        let t = 1.5 * mesh.spacing();
        let step = (mesh.len() / 16).max(1);
        let mut worst = 0.0f64;
        for node in (0..mesh.len()).step_by(step) {
            let y = inward_point(&mesh, node, t);
            let v = interior_extension(&mesh, l, &y, &cal)?;
            let target = (l.value(node) + hl.value(node)).scale_real(0.5);
            worst = worst.max(v.distance(&target) / l.value(node).norm());
        }
        series.push(m, worst);
        ctx.report.calibration = Some(cal);
    }
    ctx.gate(&series, "", CheckKind::AtMost, 5e-2, true);
    ctx.gate(&series, "_decreasing", CheckKind::Decreasing, 0.1, true);
    if ladder.len() >= 3 {
        ctx.gate(&series, "_order", CheckKind::MinOrder, 0.8, true);
    }
    Ok(())
}

fn operator_identities(ctx: &mut Ctx) -> Result<()> {
    let ladder = ctx.ladder()?.to_vec();
    let mut h2 = Series::new("h2", "||H^2 L - L|| / ||L|| (Hardy witness and random L)");
    let mut hl = Series::new("hardy_trace_fixed", "||H L - L|| / ||L|| on a Hardy witness");
    let mut adj = Series::new("adjoint_formula", "||(H* - nu H nu) L|| / ||L||, H* the dense adjoint");
    let mut skew = Series::new("skew", "|<AL, K> + <L, AK>| / (||L|| ||K||)");
    let mut adj_def = Series::new("adjoint_definition", "|<H* L, K> - <L, H K>| relative");
    let (mut exact, mut ortho, mut linear) = (0.0f64, 0.0f64, 0.0f64);
    let mut dense_available = true;
    for &m in &ladder {
        let mesh = ctx.mesh(m)?;
        let h = Arc::new(hilbert_h(mesh.clone()));
        let h_dyn: Arc<dyn BoundaryOperator> = h.clone();
        let a = kerzman_stein(h_dyn.clone(), mesh.clone());
        let nu = NodeMultiplier::nu(mesh.clone());
        let alpha = NodeMultiplier::alpha(mesh.clone());
        let beta = NodeMultiplier::beta(mesh.clone());
        let mut rng = ctx.rng(4);
        let l = BoundaryFunction::random_smooth(mesh.clone(), 3, &mut rng);
        let k = BoundaryFunction::random_smooth(mesh.clone(), 3, &mut rng);
        let w = HardyWitness::standard(mesh.clone(), 0.3)?;
        let wt = w.trace();

        let hw = h.apply(wt)?;
        let h2w = rel(&h.apply(&hw)?, wt, wt)?;
        let h2l = rel(&h.apply(&h.apply(&l)?)?, &l, &l)?;
        h2.push(m, h2w.max(h2l));
        hl.push(m, rel(&hw, wt, wt)?);
        let s = (a.apply(&l)?.inner(&k)? + l.inner(&a.apply(&k)?)?).norm() / (l.norm() * k.norm());
        skew.push(m, s);

        let formula = hilbert_adjoint(&h, AdjointPath::Formula)?;
        match hilbert_adjoint(&h, AdjointPath::Dense) {
            Ok(dense) => {
                let dl = dense.apply(&l)?;
                adj.push(m, rel(&dl, &formula.apply(&l)?, &l)?);
                let hk = h.apply(&k)?;
                let gap = (dl.inner(&k)? - l.inner(&hk)?).norm() / (dl.norm() * k.norm() + l.norm() * hk.norm());
                adj_def.push(m, gap);
            }
            Err(Error::Capability(_)) => dense_available = false,
            Err(e) => return Err(e),
        }

        // pointwise multiplier identities
        exact = exact.max(rel(&nu.apply(&nu.apply(&l)?)?, &l.scale(Complex64::new(-1.0, 0.0)), &l)?);
        exact = exact.max(rel(&alpha.apply(&l)?.add(&beta.apply(&l)?)?, &l, &l)?);
        exact = exact.max(alpha.apply(&beta.apply(&l)?)?.norm() / l.norm());
        ortho = ortho.max(alpha.apply(&l)?.inner(&beta.apply(&k)?)?.norm() / (l.norm() * k.norm()));

        if m == ladder[0] {
            let c = hardy_projection(h_dyn.clone(), mesh.clone());
            let ops: Vec<&dyn BoundaryOperator> = vec![h.as_ref(), &a, &nu, &c, formula.as_ref()];
            let (ca, cb) = (random_complex(&mut rng), random_complex(&mut rng));
            for op in ops {
                let combo = op.apply(&l.scale(ca).axpy(cb, &k)?)?;
                let (ol, ok) = (op.apply(&l)?, op.apply(&k)?);
                let expected = ol.scale(ca).axpy(cb, &ok)?;
                let scale = ca.norm() * ol.norm() + cb.norm() * ok.norm();
                linear = linear.max(combo.sub(&expected)?.norm() / scale);
            }
        }
    }
    ctx.gate(&h2, "", CheckKind::AtMost, 5e-2, true);
    ctx.gate(&h2, "_decreasing", CheckKind::Decreasing, 0.1, true);
    ctx.info(&hl, None);
    if dense_available {
        ctx.gate(&adj, "", CheckKind::AtMost, 5e-2, true);
        ctx.gate(&adj, "_decreasing", CheckKind::Decreasing, 0.1, true);
        ctx.gate(&adj_def, "", CheckKind::AtMost, 1e-10, true);
    } else {
        ctx.info(&Series::new("adjoint_formula", "dense adjoint unavailable for n = 2"), Some("capability"));
    }
    ctx.gate(&skew, "", CheckKind::AtMost, 5e-2, true);
    ctx.gate(&skew, "_decreasing", CheckKind::Decreasing, 0.1, true);
    ctx.gate(
        &Series::single("multiplier_identities", "nu^2 = -I, alpha + beta = I, alpha beta = 0", exact),
        "",
        CheckKind::AtMost,
        1e-12,
        true,
    );
    ctx.gate(&Series::single("orthogonality", "<alpha L, beta K> = 0", ortho), "", CheckKind::AtMost, 1e-10, true);
    ctx.gate(
        &Series::single("linearity", "H, A, nu, C, H* are linear on random complex combinations", linear),
        "",
        CheckKind::AtMost,
        1e-10,
        true,
    );
    Ok(())
}

/// `max ||A L|| / ||L||` over the standard witness family.
fn ks_witness_norm(mesh: &Arc<SurfaceMesh>) -> Result<f64> {
    let h: Arc<dyn BoundaryOperator> = Arc::new(hilbert_h(mesh.clone()));
    let a = kerzman_stein(h, mesh.clone());
    let mut worst = 0.0f64;
    for w in HardyWitness::family(mesh.clone(), 3)? {
        worst = worst.max(a.apply(w.trace())?.norm() / w.trace().norm());
    }
    Ok(worst)
}

fn kerzman_stein_suite(ctx: &mut Ctx) -> Result<()> {
    let ladder = ctx.ladder()?.to_vec();
    let surface = ctx.config.surface.clone();
    let mut a_norm = Series::new("a_norm", "max ||A L|| / ||L|| over Hardy witnesses, A = H - nu H nu");
    let mut skew = Series::new("skew", "|<AL, K> + <L, AK>| / (||L|| ||K||)");
    let mut ball_flag = true;
    let mut last_mesh = None;
    for &m in &ladder {
        let mesh = ctx.mesh(m)?;
        ball_flag = mesh.is_unit_ball();
        a_norm.push(m, ks_witness_norm(&mesh)?);
        let h: Arc<dyn BoundaryOperator> = Arc::new(hilbert_h(mesh.clone()));
        let a = kerzman_stein(h, mesh.clone());
        let mut rng = ctx.rng(5);
        let l = BoundaryFunction::random_smooth(mesh.clone(), 3, &mut rng);
        let k = BoundaryFunction::random_smooth(mesh.clone(), 3, &mut rng);
        skew.push(m, (a.apply(&l)?.inner(&k)? + l.inner(&a.apply(&k)?)?).norm() / (l.norm() * k.norm()));
        last_mesh = Some(mesh);
    }
    let mesh = last_mesh.expect("nonempty ladder");
    if ball_flag {
        ctx.gate(&a_norm, "", CheckKind::AtMost, 5e-2, true);
        ctx.gate(&a_norm, "_decreasing", CheckKind::Decreasing, 0.0, true);
    } else {
        ctx.gate_flagged(&a_norm, CheckKind::AtLeast, NONBALL_THRESHOLD, false, Some(NONBALL));
    }
    ctx.info(&skew, None);

    // comparison surface of the other kind at the finest level
    if surface.n() == 1 {
        let m = *ladder.last().expect("nonempty");
        let (ball, other) = if ball_flag {
            (mesh.clone(), SurfaceKind::Ellipse { a: 2.0, b: 1.0 }.build(m)?)
        } else {
            (SurfaceKind::Circle.build(m)?, mesh.clone())
        };
        let ratio = ks_witness_norm(&other)? / ks_witness_norm(&ball)?;
        let mut sep = Series::new("separation", "||A L|| on the non-ball surface / same on the circle");
        sep.push(m, ratio);
        ctx.gate(&sep, "", CheckKind::AtLeast, 10.0, true);
        let mut g_ball = Series::new("geometric_ball", "max |<Y - T, nu_T + nu_Y>| on the circle");
        g_ball.push(m, geometric_violation(&ball));
        ctx.gate(&g_ball, "", CheckKind::AtMost, 1e-14, true);
        let mut g_other = Series::new("geometric_nonball", "max |<Y - T, nu_T + nu_Y>| off the ball");
        g_other.push(m, geometric_violation(&other));
        ctx.gate_flagged(&g_other, CheckKind::AtLeast, NONBALL_THRESHOLD, true, Some(NONBALL));
    }
    Ok(())
}

fn szego(ctx: &mut Ctx) -> Result<()> {
    let ladder = ctx.ladder()?.to_vec();
    let mut solver = Series::new("solver_residual", "relative GMRES residual of (I + A_KS) x = L");
    let mut iters = Series::new("solver_iterations", "GMRES iterations for S L");
    let mut s2 = Series::new("idempotent", "||S^2 L - S L|| / ||L||");
    let mut sstar = Series::new("self_adjoint", "||S* L - S L|| / ||L||");
    let mut ks = Series::new("kerzman_stein_identity", "||S (I + A_KS) L - C L|| / ||L||");
    let mut sc = Series::new("s_equals_c", "||S L - C L|| / ||L||");
    let mut fixed = Series::new("hardy_fixed", "||S K - K|| / ||K|| on a Hardy witness K");
    let mut complement = Series::new("complement_annihilated", "||S (nu K)|| / ||nu K|| on a Hardy witness K");
    let mut recon = Series::new("reconstruction", "||G + nu Hc - L|| / ||L|| for (G, Hc) = hardy_decompose(L)");
    let mut ball = true;
    for &m in &ladder {
        let mesh = ctx.mesh(m)?;
        ball = mesh.is_unit_ball();
        let s = SzegoProjection::new(Arc::new(hilbert_h(mesh.clone())), ctx.solver());
        let mut rng = ctx.rng(6);
        let l = BoundaryFunction::random_smooth(mesh.clone(), 3, &mut rng);
        let (sl, st) = s.apply_with_stats(&l)?;
        let (ssl, st2) = s.apply_with_stats(&sl)?;
        let (sadj, st3) = s.apply_adjoint(&l)?;
        solver.push(m, st.residual.max(st2.residual).max(st3.residual));
        iters.push(m, st.iterations as f64);
        s2.push(m, rel(&ssl, &sl, &l)?);
        sstar.push(m, rel(&sadj, &sl, &l)?);
        let cl = s.apply_c(&l)?;
        ks.push(m, rel(&s.apply(&l.add(&s.apply_a(&l)?)?)?, &cl, &l)?);
        sc.push(m, rel(&sl, &cl, &l)?);
        let w = HardyWitness::standard(mesh.clone(), 0.3)?;
        fixed.push(m, rel(&s.apply(w.trace())?, w.trace(), w.trace())?);
        let nw = NodeMultiplier::nu(mesh.clone()).apply(w.trace())?;
        complement.push(m, s.apply(&nw)?.norm() / nw.norm());
        let (g, hc) = hardy_decompose(&s, &l)?;
        recon.push(m, rel(&g.add(&NodeMultiplier::nu(mesh.clone()).apply(&hc)?)?, &l, &l)?);
    }
    ctx.gate(&solver, "", CheckKind::AtMost, ctx.config.tol, true);
    ctx.info(&iters, None);
    for series in [&s2, &sstar] {
        ctx.gate(series, "", CheckKind::AtMost, 1e-1, true);
        ctx.gate(series, "_decreasing", CheckKind::Decreasing, 0.1, true);
    }
    ctx.gate(&ks, "", CheckKind::AtMost, 1e-8, true);
    if ball {
        ctx.gate(&sc, "", CheckKind::AtMost, 5e-2, true);
    } else {
        ctx.info(&sc, None);
    }
    ctx.info(&fixed, None);
    ctx.info(&complement, None);
    ctx.gate(&recon, "", CheckKind::AtMost, 1e-8, true);
    Ok(())
}

fn theorem41(ctx: &mut Ctx) -> Result<()> {
    let ladder = ctx.ladder()?.to_vec();
    let mut series: Vec<Series> = vec![];
    let mut flags: Vec<Option<String>> = vec![];
    let mut ball = true;
    for &m in &ladder {
        let mesh = ctx.mesh(m)?;
        let report = theorem41_suite(mesh, ctx.config.seed, Some(ctx.solver()))?;
        ball = report.ball;
        for item in &report.items {
            let name = if item.item == "geometric" { "geometric".to_string() } else { format!("item_{}", item.item) };
            let idx = match series.iter().position(|s| s.name == name) {
                Some(i) => i,
                None => {
                    series.push(Series::new(&name, &item.statement));
                    flags.push(None);
                    series.len() - 1
                }
            };
            series[idx].push(m, item.residual);
            if item.flag.is_some() {
                flags[idx] = item.flag.clone();
            }
        }
    }
    for (s, flag) in series.iter().zip(&flags) {
        match (ball, s.name.as_str()) {
            (true, "geometric") => ctx.gate(s, "", CheckKind::AtMost, 1e-14, true),
            (true, "item_iv") => ctx.gate(s, "", CheckKind::AtMost, 5e-2, true),
            (true, _) => ctx.gate(s, "", CheckKind::AtMost, 5e-2, false),
            (false, "geometric") => ctx.gate_flagged(s, CheckKind::AtLeast, NONBALL_THRESHOLD, true, flag.as_deref()),
            (false, _) => ctx.info(s, flag.as_deref()),
        }
    }
    Ok(())
}

/// Interior sample points with radii `0.07, 0.14, ..., 0.7`.
fn dirichlet_points(n: usize) -> Vec<VectorR2n> {
    (0..10)
        .map(|k| {
            let theta = 0.6 * k as f64;
            let r = 0.07 * (k + 1) as f64;
            let mut c = vec![0.0; 2 * n];
            c[0] = r * theta.cos();
            if n == 1 {
                c[1] = r * theta.sin();
            } else {
                c[n] = r * theta.sin() * (0.5 * theta).cos();
                c[1] = r * theta.sin() * (0.5 * theta).sin();
            }
            VectorR2n::new(c).expect("even length")
        })
        .collect()
}

fn scalar_pair(dim: usize, value: Complex64) -> CirculantPair {
    CirculantPair::new(Multivector::scalar(dim, value), Multivector::zero(dim))
}

fn dirichlet(ctx: &mut Ctx) -> Result<()> {
    let ladder = ctx.ladder()?.to_vec();
    let mut poly = Series::new("harmonic_data", "max |u - p| / max |p| over 10 points with |X| <= 0.7");
    let mut lap = Series::new("laplacian", "finite-difference Laplacian of the solution at an interior point");
    let mut consts = Series::new("constants", "max |u - c| for constant data c");
    type Harmonic = fn(&VectorR2n) -> f64;
    let data: [Harmonic; 2] =
        [|x| x.x(0) * x.x(0) - x.y(0) * x.y(0), |x| x.x(0) * x.y(0) + 0.5 * x.x(0) - 0.25];
    for &m in &ladder {
        let mesh = ctx.mesh(m)?;
        if !mesh.is_unit_ball() {
            return Err(Error::Config(format!("dirichlet suite needs a unit sphere, got {}", mesh.label())));
        }
        let n = mesh.n();
        let dim = mesh.dim();
        let points = dirichlet_points(n);
        let mut worst = 0.0f64;
        let mut laplace = 0.0f64;
        for (i, p) in data.iter().enumerate() {
            let l = BoundaryFunction::from_fn(mesh.clone(), |_, x| scalar_pair(dim, Complex64::new(p(x), 0.0)))?;
            let solver = DirichletSolver::new(mesh.clone(), &l)?;
            let (mut err, mut size) = (0.0f64, 0.0f64);
            for x in &points {
                err = err.max(solver.evaluate(x)?.distance(&scalar_pair(dim, Complex64::new(p(x), 0.0))));
                size = size.max(p(x).abs());
            }
            worst = worst.max(err / size);
            if i == 0 {
                let mut c = vec![0.0; 2 * n];
                c[0] = 0.3;
                c[n] = 0.4;
                let x0 = VectorR2n::new(c)?;
                laplace = laplacian_circulant(&|y: &VectorR2n| solver.evaluate(y), &x0, 1e-3)?.norm();
                ctx.report.calibration = Some(solver.calibration().clone());
            }
        }
        poly.push(m, worst);
        lap.push(m, laplace);
        let c = scalar_pair(dim, Complex64::new(1.5, -0.5));
        let l = BoundaryFunction::from_fn(mesh.clone(), |_, _| c.clone())?;
        let solver = DirichletSolver::new(mesh.clone(), &l)?;
        let mut worst = 0.0f64;
        for x in &points {
            worst = worst.max(solver.evaluate(x)?.distance(&c));
        }
        consts.push(m, worst);
    }
    ctx.gate(&poly, "", CheckKind::AtMost, 1e-2, true);
    ctx.gate(&lap, "", CheckKind::AtMost, 1e-4, true);
    ctx.gate(&consts, "", CheckKind::AtMost, 1e-10, true);
    Ok(())
}

fn s3_smoke(ctx: &mut Ctx) -> Result<()> {
    if ctx.config.surface.n() != 2 {
        return Err(Error::Config("s3-smoke needs a four-dimensional surface (s3 or ellipsoid4)".into()));
    }
    let ladder = ctx.ladder()?.to_vec();
    let mut area = Series::new("weight_sum", "|sum of weights - 2 pi^2|");
    let mut total = Series::new("total_area", "sum of quadrature weights");
    let mut h2 = Series::new("h2", "||H^2 L - L|| / ||L|| on a Hardy witness with pole at 2R");
    let mut hl = Series::new("hardy_trace_fixed", "||H L - L|| / ||L|| on the same witness");
    let mut ball = true;
    for &r in &ladder {
        let mesh = ctx.mesh(r)?;
        ball = mesh.is_unit_ball();
        area.push(r, (mesh.total_area() - 2.0 * PI * PI).abs());
        total.push(r, mesh.total_area());
        let h = hilbert_h(mesh.clone());
        let w = HardyWitness::at_distance(mesh.clone(), 0.3, 2.0)?;
        let hw = h.apply(w.trace())?;
        hl.push(r, rel(&hw, w.trace(), w.trace())?);
        h2.push(r, rel(&h.apply(&hw)?, w.trace(), w.trace())?);
        ctx.report.calibration = Some(calibrate(&mesh)?);
    }
    if ball {
        ctx.gate(&area, "", CheckKind::AtMost, 1e-3, true);
    } else {
        ctx.info(&total, None);
    }
    ctx.gate(&h2, "", CheckKind::AtMost, 2e-1, true);
    ctx.info(&hl, None);
    Ok(())
}
