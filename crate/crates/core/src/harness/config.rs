use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::surface::{mesh_circle, mesh_ellipse, mesh_ellipsoid_r4, mesh_sphere_s3, SurfaceMesh};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Algebra,
    Differential,
    Kernels,
    Jump,
    OperatorIdentities,
    KerzmanStein,
    Szego,
    Theorem41,
    Dirichlet,
    S3Smoke,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Algebra,
        Suite::Differential,
        Suite::Kernels,
        Suite::Jump,
        Suite::OperatorIdentities,
        Suite::KerzmanStein,
        Suite::Szego,
        Suite::Theorem41,
        Suite::Dirichlet,
        Suite::S3Smoke,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Differential => "differential",
            Suite::Kernels => "kernels",
            Suite::Jump => "jump",
            Suite::OperatorIdentities => "operator-identities",
            Suite::KerzmanStein => "kerzman-stein",
            Suite::Szego => "szego",
            Suite::Theorem41 => "theorem41",
            Suite::Dirichlet => "dirichlet",
            Suite::S3Smoke => "s3-smoke",
        }
    }

    /// The statement the suite verifies, embedded in every report.
    pub fn anchor(self) -> &'static str {
        match self {
            Suite::Algebra => "blade products, associativity, conjugations and Witt identities of C_{2n}",
            Suite::Differential => "(d_Z)^2 = (d_Zdag)^2 = 0 and Delta = -d_X^2 = 4(d_Z d_Zdag + d_Zdag d_Z)",
            Suite::Kernels => "homogeneity and monogenicity of E, E| and the Hermitean kernel",
            Suite::Jump => "boundary limit of the Hermitean Cauchy integral equals c_n/2 (L + HL)",
            Suite::OperatorIdentities => "H^2 = I, H* = nu H nu, A skew-adjoint",
            Suite::KerzmanStein => "A = H - nu H nu vanishes exactly on balls",
            Suite::Szego => "S = C (I + A_KS)^{-1} is the orthogonal Hardy projection",
            Suite::Theorem41 => "ball characterisations via alpha, beta, nu, H H* = I, A = 0, S = C",
            Suite::Dirichlet => "Dirichlet solution G~ + X H~ on the unit ball",
            Suite::S3Smoke => "quadrature and H^2 = I on S^3 (n = 2, matrix-free)",
        }
    }

    fn default_surface(self) -> SurfaceKind {
        match self {
            Suite::S3Smoke => SurfaceKind::S3,
            _ => SurfaceKind::Circle,
        }
    }

    fn default_ladder(self) -> Vec<usize> {
        match self {
            Suite::Algebra | Suite::Differential | Suite::Kernels => vec![],
            Suite::Jump | Suite::KerzmanStein | Suite::Szego => vec![128, 256, 512],
            Suite::OperatorIdentities => vec![128, 256, 512, 1024],
            Suite::Theorem41 | Suite::Dirichlet => vec![512],
            Suite::S3Smoke => vec![16],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.id() == s).ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

/// Surface family; the node count comes from the ladder.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SurfaceKind {
    Circle,
    Ellipse { a: f64, b: f64 },
    /// Unit `S³`; a ladder entry `r` means an `r × r × r` grid.
    S3,
    Ellipsoid4 { axes: [f64; 4] },
}

impl SurfaceKind {
    /// Parses `circle`, `ellipse`, `s3`, `ellipsoid4` with optional axes.
    pub fn parse(name: &str, axes: &[f64]) -> Result<Self> {
        match (name, axes.len()) {
            ("circle", 0) => Ok(SurfaceKind::Circle),
            ("ellipse", 0) => Ok(SurfaceKind::Ellipse { a: 2.0, b: 1.0 }),
            ("ellipse", 2) => Ok(SurfaceKind::Ellipse { a: axes[0], b: axes[1] }),
            ("s3", 0) => Ok(SurfaceKind::S3),
            ("ellipsoid4", 0) => Ok(SurfaceKind::Ellipsoid4 { axes: [2.0, 1.0, 1.0, 1.0] }),
            ("ellipsoid4", 4) => Ok(SurfaceKind::Ellipsoid4 { axes: [axes[0], axes[1], axes[2], axes[3]] }),
            _ => Err(Error::Config(format!("surface `{name}` with {} axes is not recognised", axes.len()))),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            SurfaceKind::Circle | SurfaceKind::Ellipse { .. } => 1,
            SurfaceKind::S3 | SurfaceKind::Ellipsoid4 { .. } => 2,
        }
    }

    pub fn build(&self, nodes: usize) -> Result<Arc<SurfaceMesh>> {
        let mesh = match self {
            SurfaceKind::Circle => mesh_circle(nodes)?,
            SurfaceKind::Ellipse { a, b } => mesh_ellipse(nodes, *a, *b)?,
            SurfaceKind::S3 => mesh_sphere_s3([nodes; 3])?,
            SurfaceKind::Ellipsoid4 { axes } => mesh_ellipsoid_r4([nodes; 3], *axes)?,
        };
        Ok(Arc::new(mesh))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            _ => Err(Error::Config(format!("unknown format `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub suite: Suite,
    pub surface: SurfaceKind,
    /// Refinement ladder, strictly increasing.
    pub nodes: Vec<usize>,
    pub tol: f64,
    pub seed: u64,
    /// Sample count for the randomised algebraic suites.
    pub samples: usize,
    /// Per-check threshold overrides.
    pub thresholds: BTreeMap<String, f64>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub format: OutputFormat,
}

impl RunConfig {
    pub fn new(suite: Suite) -> Self {
        RunConfig {
            suite,
            surface: suite.default_surface(),
            nodes: suite.default_ladder(),
            tol: 1e-10,
            seed: 7,
            samples: match suite {
                Suite::Algebra => 1000,
                Suite::Differential | Suite::Kernels => 100,
                _ => 0,
            },
            thresholds: BTreeMap::new(),
            out: None,
            format: OutputFormat::Json,
        }
    }

    pub fn with_surface(mut self, surface: SurfaceKind) -> Self {
        self.surface = surface;
        self
    }

    pub fn with_nodes(mut self, nodes: Vec<usize>) -> Self {
        self.nodes = nodes;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config(format!("node ladder {:?} is not strictly increasing", self.nodes)));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::Config(format!("solver tolerance {} outside (0, 1)", self.tol)));
        }
        if let Some((k, v)) = self.thresholds.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Config(format!("threshold {k} = {v} is not finite")));
        }
        Ok(())
    }

    /// Threshold for `check`, from the overrides or the given default.
    pub fn threshold(&self, check: &str, default: f64) -> f64 {
        self.thresholds.get(check).copied().unwrap_or(default)
    }

    /// Reads a flat key/value file:
    ///
    /// ```text
    /// suite = "kerzman-stein"
    /// surface = "ellipse"
    /// axes = [2.0, 1.0]
    /// nodes = [128, 256, 512]
    /// seed = 7
    /// tol = 1e-10
    /// samples = 1000
    /// out = "report.json"
    /// format = "json"
    /// threshold.h2 = 0.05
    /// ```
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Config(e.message().to_string()))?;
        let get_str = |k: &str| -> Result<Option<String>> {
            match table.get(k) {
                None => Ok(None),
                Some(toml::Value::String(s)) => Ok(Some(s.clone())),
                Some(v) => Err(Error::Config(format!("`{k}` must be a string, got {v}"))),
            }
        };
        let get_f64 = |v: &toml::Value, k: &str| -> Result<f64> {
            match v {
                toml::Value::Float(x) => Ok(*x),
                toml::Value::Integer(i) => Ok(*i as f64),
                _ => Err(Error::Config(format!("`{k}` must be a number"))),
            }
        };
        let get_uint = |v: &toml::Value, k: &str| -> Result<u64> {
            match v {
                toml::Value::Integer(i) if *i >= 0 => Ok(*i as u64),
                _ => Err(Error::Config(format!("`{k}` must be a non-negative integer"))),
            }
        };
        let suite: Suite = get_str("suite")?.ok_or_else(|| Error::Config("missing `suite`".into()))?.parse()?;
        let mut config = RunConfig::new(suite);
        let axes = match table.get("axes") {
            None => vec![],
            Some(toml::Value::Array(a)) => a.iter().map(|v| get_f64(v, "axes")).collect::<Result<_>>()?,
            Some(_) => return Err(Error::Config("`axes` must be an array".into())),
        };
        if let Some(name) = get_str("surface")? {
            config.surface = SurfaceKind::parse(&name, &axes)?;
        } else if !axes.is_empty() {
            return Err(Error::Config("`axes` given without `surface`".into()));
        }
        for (key, value) in &table {
            match key.as_str() {
                "suite" | "surface" | "axes" => {}
                "nodes" => {
                    let toml::Value::Array(a) = value else {
                        return Err(Error::Config("`nodes` must be an array".into()));
                    };
                    config.nodes = a.iter().map(|v| get_uint(v, "nodes").map(|x| x as usize)).collect::<Result<_>>()?;
                }
                "seed" => config.seed = get_uint(value, "seed")?,
                "samples" => config.samples = get_uint(value, "samples")? as usize,
                "tol" => config.tol = get_f64(value, "tol")?,
                "out" => config.out = get_str("out")?.map(PathBuf::from),
                "format" => config.format = get_str("format")?.unwrap_or_default().parse()?,
                "threshold" => {
                    let toml::Value::Table(t) = value else {
                        return Err(Error::Config("`threshold` must hold `threshold.<check> = value` entries".into()));
                    };
                    for (check, v) in t {
                        config.thresholds.insert(check.clone(), get_f64(v, check)?);
                    }
                }
                other => return Err(Error::Config(format!("unknown key `{other}`"))),
            }
        }
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_file() {
        let c = RunConfig::from_toml_str(
            "suite = \"kerzman-stein\"\nsurface = \"ellipse\"\naxes = [3, 1.5]\nnodes = [64, 128]\nseed = 3\nthreshold.separation = 5.0\n",
        )
        .unwrap();
        assert_eq!(c.suite, Suite::KerzmanStein);
        assert_eq!(c.surface, SurfaceKind::Ellipse { a: 3.0, b: 1.5 });
        assert_eq!(c.nodes, vec![64, 128]);
        assert_eq!(c.seed, 3);
        assert_eq!(c.threshold("separation", 10.0), 5.0);
        assert_eq!(c.threshold("other", 10.0), 10.0);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(RunConfig::from_toml_str("suite = \"nope\""), Err(Error::UnknownSuite(_))));
        assert!(RunConfig::from_toml_str("suite = \"jump\"\nnodes = [256, 128]").is_err());
        assert!(RunConfig::from_toml_str("suite = \"jump\"\ncolour = 1").is_err());
        assert!(RunConfig::from_toml_str("nodes = [1]").is_err());
    }

    #[test]
    fn suite_ids_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.id().parse::<Suite>().unwrap(), s);
        }
    }
}
