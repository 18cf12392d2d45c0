use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use hcliff::harness::{run_suite, OutputFormat, RunConfig, Suite, SurfaceKind};

/// Verification suites for Hermitean Clifford analysis on discretised
/// boundaries.
#[derive(Parser)]
#[command(name = "hcliff", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Blade signs, associativity, conjugations, Witt identities.
    VerifyAlgebra(RunArgs),
    /// Hermitean Dirac operators on random polynomials.
    Differential(RunArgs),
    /// Homogeneity and monogenicity of the Cauchy kernels.
    VerifyKernels(RunArgs),
    /// Boundary limit of the Hermitean Cauchy integral.
    JumpTest(RunArgs),
    /// H^2 = I, adjoint formula, skewness of A.
    OperatorIdentities(RunArgs),
    /// Kerzman-Stein operator on balls versus ellipses.
    KerzmanStein(RunArgs),
    /// Szegő projection: idempotence, self-adjointness, S = C on balls.
    Szego(RunArgs),
    /// Ball characterisations item by item.
    Theorem41(RunArgs),
    /// Dirichlet problem on the unit ball.
    Dirichlet(RunArgs),
    /// Quadrature and H^2 = I on S^3.
    S3Smoke(RunArgs),
    /// Runs the suite named in a config file.
    Run(RunArgs),
    /// Writes a mesh as CSV.
    Mesh(MeshArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Flat key/value config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// circle, ellipse, s3 or ellipsoid4.
    #[arg(long)]
    surface: Option<String>,
    /// Semi-axes (ellipse: a,b; ellipsoid4: four values).
    #[arg(long, value_delimiter = ',')]
    axes: Vec<f64>,
    /// Refinement ladder, e.g. 128,256,512 (per-dimension resolution on S^3).
    #[arg(long, value_delimiter = ',')]
    nodes: Vec<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Iterative solver tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Sample count for the randomised suites.
    #[arg(long)]
    samples: Option<usize>,
    /// Threshold override, `check=value`; repeatable.
    #[arg(long = "threshold", value_parser = parse_threshold)]
    thresholds: Vec<(String, f64)>,
    /// Report destination (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// json or csv.
    #[arg(long)]
    format: Option<OutputFormat>,
    /// Suppress the summary on stderr.
    #[arg(long)]
    quiet: bool,
}

#[derive(Args)]
struct MeshArgs {
    #[arg(long, default_value = "circle")]
    surface: String,
    #[arg(long, value_delimiter = ',')]
    axes: Vec<f64>,
    /// Node count (per-dimension resolution on S^3).
    #[arg(long)]
    nodes: usize,
    #[arg(long)]
    out: PathBuf,
}

fn parse_threshold(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or("expected check=value")?;
    let v: f64 = v.parse().map_err(|e| format!("{e}"))?;
    Ok((k.trim().to_string(), v))
}

fn build_config(suite: Option<Suite>, args: &RunArgs) -> anyhow::Result<RunConfig> {
    let mut config = match (&args.config, suite) {
        (Some(path), _) => {
            let c = RunConfig::from_file(path).with_context(|| format!("reading {}", path.display()))?;
            if let Some(s) = suite {
                if c.suite != s {
                    bail!("config file names suite `{}` but the subcommand runs `{s}`", c.suite);
                }
            }
            c
        }
        (None, Some(s)) => RunConfig::new(s),
        (None, None) => bail!("`run` needs --config"),
    };
    if let Some(name) = &args.surface {
        config.surface = SurfaceKind::parse(name, &args.axes)?;
    } else if !args.axes.is_empty() {
        bail!("--axes needs --surface");
    }
    if !args.nodes.is_empty() {
        config.nodes = args.nodes.clone();
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(tol) = args.tol {
        config.tol = tol;
    }
    if let Some(samples) = args.samples {
        config.samples = samples;
    }
    for (k, v) in &args.thresholds {
        config.thresholds.insert(k.clone(), *v);
    }
    if args.out.is_some() {
        config.out = args.out.clone();
    }
    if let Some(f) = args.format {
        config.format = f;
    }
    config.validate()?;
    Ok(config)
}

fn run(suite: Option<Suite>, args: &RunArgs) -> anyhow::Result<bool> {
    let config = build_config(suite, args)?;
    let report = run_suite(&config)?;
    if !args.quiet {
        eprint!("{}", report.summary());
    }
    match &config.out {
        Some(path) => report.emit(config.format, path)?,
        None => println!("{}", report.render(config.format)?),
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::VerifyAlgebra(a) => run(Some(Suite::Algebra), a),
        Command::Differential(a) => run(Some(Suite::Differential), a),
        Command::VerifyKernels(a) => run(Some(Suite::Kernels), a),
        Command::JumpTest(a) => run(Some(Suite::Jump), a),
        Command::OperatorIdentities(a) => run(Some(Suite::OperatorIdentities), a),
        Command::KerzmanStein(a) => run(Some(Suite::KerzmanStein), a),
        Command::Szego(a) => run(Some(Suite::Szego), a),
        Command::Theorem41(a) => run(Some(Suite::Theorem41), a),
        Command::Dirichlet(a) => run(Some(Suite::Dirichlet), a),
        Command::S3Smoke(a) => run(Some(Suite::S3Smoke), a),
        Command::Run(a) => run(None, a),
        Command::Mesh(m) => SurfaceKind::parse(&m.surface, &m.axes)
            .and_then(|s| s.build(m.nodes))
            .and_then(|mesh| mesh.save(&m.out))
            .map(|_| true)
            .map_err(Into::into),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
