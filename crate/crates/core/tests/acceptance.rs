//! Acceptance criteria 1-10, one line each. Runs without the libtest
//! harness so the lines always reach stdout.

use std::time::{Duration, Instant};

use hcliff::harness::{run_suite, Report, RunConfig, Suite, SurfaceKind};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn timed(config: &RunConfig) -> (Report, Duration) {
    let start = Instant::now();
    let report = run_suite(config).unwrap_or_else(|e| panic!("{} failed to run: {e}", config.suite));
    (report, start.elapsed())
}

fn last(report: &Report, check: &str) -> f64 {
    report.check(check).and_then(|c| c.last()).unwrap_or(f64::NAN)
}

/// Every check in `names` must exist and pass.
fn all_pass(report: &Report, names: &[&str]) -> (bool, Vec<String>) {
    let mut ok = true;
    let mut failed = vec![];
    for name in names {
        match report.check(name) {
            Some(c) if c.passed => {}
            _ => {
                ok = false;
                failed.push(name.to_string());
            }
        }
    }
    (ok, failed)
}

fn verdict(report: &Report, names: &[&str], elapsed: Duration, budget: Duration, detail: String) -> Outcome {
    let (ok, failed) = all_pass(report, names);
    let in_time = elapsed < budget;
    let mut detail = format!("{detail}; {:.1}s (budget {}s)", elapsed.as_secs_f64(), budget.as_secs());
    if !failed.is_empty() {
        detail.push_str(&format!("; failed: {}", failed.join(", ")));
    }
    Outcome { passed: ok && in_time && report.passed, detail }
}

fn criterion1() -> Outcome {
    let (r, t) = timed(&RunConfig::new(Suite::Algebra));
    verdict(
        &r,
        &["blade_sign_oracle", "associativity", "distributivity", "conjugation", "witt_identities"],
        t,
        Duration::from_secs(10),
        format!(
            "sign mismatches {}, assoc {:.1e}, conj {:.1e}, witt {:.1e}",
            last(&r, "blade_sign_oracle"),
            last(&r, "associativity"),
            last(&r, "conjugation"),
            last(&r, "witt_identities")
        ),
    )
}

fn criterion2() -> Outcome {
    let (r, t) = timed(&RunConfig::new(Suite::Differential));
    verdict(
        &r,
        &["dz_squared", "dzdag_squared", "laplacian_dirac", "laplacian_hermitean"],
        t,
        Duration::from_secs(10),
        format!(
            "max relative residual {:.1e}",
            ["dz_squared", "dzdag_squared", "laplacian_dirac", "laplacian_hermitean"]
                .iter()
                .map(|c| last(&r, c))
                .fold(0.0, f64::max)
        ),
    )
}

fn criterion3() -> Outcome {
    let (r, t) = timed(&RunConfig::new(Suite::Kernels));
    verdict(
        &r,
        &["homogeneity", "monogenic_e", "monogenic_ej", "monogenic_hermitean"],
        t,
        Duration::from_secs(10),
        format!(
            "homogeneity {:.1e}, monogenicity {:.1e}",
            last(&r, "homogeneity"),
            ["monogenic_e", "monogenic_ej", "monogenic_hermitean"].iter().map(|c| last(&r, c)).fold(0.0, f64::max)
        ),
    )
}

fn criterion4() -> Outcome {
    let (r, t) = timed(&RunConfig::new(Suite::Jump).with_nodes(vec![128, 256, 512]));
    let orders = r.check("jump").map(|c| c.orders.clone()).unwrap_or_default();
    verdict(
        &r,
        &["jump", "jump_decreasing", "jump_order"],
        t,
        Duration::from_secs(30),
        format!("residual {:.2e} at M=512, orders {:?}", last(&r, "jump"), orders.iter().map(|o| (o * 100.0).round() / 100.0).collect::<Vec<_>>()),
    )
}

fn criterion5() -> Outcome {
    let (r, t) = timed(&RunConfig::new(Suite::OperatorIdentities).with_nodes(vec![128, 256, 512, 1024]));
    verdict(
        &r,
        &["h2", "h2_decreasing", "adjoint_formula", "adjoint_formula_decreasing", "skew"],
        t,
        Duration::from_secs(120),
        format!(
            "M=1024: H^2 {:.2e}, adjoint {:.2e}, skew {:.2e}",
            last(&r, "h2"),
            last(&r, "adjoint_formula"),
            last(&r, "skew")
        ),
    )
}

fn criterion6() -> Outcome {
    let (r, t) = timed(&RunConfig::new(Suite::KerzmanStein).with_nodes(vec![512]));
    verdict(
        &r,
        &["a_norm", "separation", "geometric_ball", "geometric_nonball"],
        t,
        Duration::from_secs(60),
        format!(
            "circle |AL| {:.2e}, ellipse/circle {:.1}, geometric {:.1e} / {:.2}",
            last(&r, "a_norm"),
            last(&r, "separation"),
            last(&r, "geometric_ball"),
            last(&r, "geometric_nonball")
        ),
    )
}

fn criterion7() -> Outcome {
    let names = [
        "solver_residual",
        "idempotent",
        "idempotent_decreasing",
        "self_adjoint",
        "self_adjoint_decreasing",
        "kerzman_stein_identity",
    ];
    let circle = RunConfig::new(Suite::Szego).with_nodes(vec![128, 256, 512]);
    let ellipse = circle.clone().with_surface(SurfaceKind::Ellipse { a: 2.0, b: 1.0 });
    let (rc, tc) = timed(&circle);
    let (re, te) = timed(&ellipse);
    let mut with_sc = names.to_vec();
    with_sc.push("s_equals_c");
    let a = verdict(&rc, &with_sc, tc, Duration::from_secs(60), String::new());
    let b = verdict(&re, &names, te, Duration::from_secs(60), String::new());
    Outcome {
        passed: a.passed && b.passed,
        detail: format!(
            "circle: S^2 {:.1e}, S* {:.1e}, S-C {:.1e}{} | ellipse: S^2 {:.1e}, S* {:.1e}, KS {:.1e}, solver {:.1e}{}",
            last(&rc, "idempotent"),
            last(&rc, "self_adjoint"),
            last(&rc, "s_equals_c"),
            a.detail,
            last(&re, "idempotent"),
            last(&re, "self_adjoint"),
            last(&re, "kerzman_stein_identity"),
            last(&re, "solver_residual"),
            b.detail
        ),
    }
}

fn criterion8() -> Outcome {
    let (r, t) = timed(&RunConfig::new(Suite::Dirichlet).with_nodes(vec![512]));
    verdict(
        &r,
        &["harmonic_data", "laplacian", "constants"],
        t,
        Duration::from_secs(60),
        format!(
            "polynomial data {:.2e}, Laplacian {:.1e}, constants {:.1e}",
            last(&r, "harmonic_data"),
            last(&r, "laplacian"),
            last(&r, "constants")
        ),
    )
}

fn criterion9() -> Outcome {
    let (r, t) = timed(&RunConfig::new(Suite::S3Smoke).with_nodes(vec![16]));
    verdict(
        &r,
        &["weight_sum", "h2"],
        t,
        Duration::from_secs(600),
        format!("16^3 grid: |sum w - 2pi^2| {:.1e}, H^2 {:.3}", last(&r, "weight_sum"), last(&r, "h2")),
    )
}

fn criterion10() -> Outcome {
    let configs = [
        RunConfig::new(Suite::Algebra),
        RunConfig::new(Suite::Jump).with_nodes(vec![128, 256]),
        RunConfig::new(Suite::Szego).with_surface(SurfaceKind::Ellipse { a: 2.0, b: 1.0 }).with_nodes(vec![128]),
        RunConfig::new(Suite::Theorem41).with_nodes(vec![128]),
    ];
    let mut identical = 0;
    for c in &configs {
        let a = run_suite(c).and_then(|r| r.to_json());
        let b = run_suite(c).and_then(|r| r.to_json());
        if matches!((&a, &b), (Ok(x), Ok(y)) if x == y) {
            identical += 1;
        }
    }
    Outcome {
        passed: identical == configs.len(),
        detail: format!("{identical}/{} suites byte-identical on rerun", configs.len()),
    }
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("algebra suite", criterion1),
        ("differential suite", criterion2),
        ("kernel suite", criterion3),
        ("jump test", criterion4),
        ("operator identities", criterion5),
        ("ball-vs-ellipse separation", criterion6),
        ("Szegő suite", criterion7),
        ("Dirichlet suite", criterion8),
        ("n=2 smoke suite", criterion9),
        ("determinism", criterion10),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = run();
        if !outcome.passed {
            failures += 1;
        }
        println!("criterion {}: {} {name} — {}", i + 1, if outcome.passed { "PASS" } else { "FAIL" }, outcome.detail);
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
