use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("kernel evaluated at |X| = {norm:e}, inside the singularity guard")]
    Singularity { norm: f64 },

    #[error("evaluation point lies {distance:e} from the surface (guard {guard:e})")]
    NearSingular { distance: f64, guard: f64 },

    #[error("boundary functions live on different meshes")]
    MeshMismatch,

    #[error("capability unavailable: {0}")]
    Capability(String),

    #[error("solver did not converge after {iterations} iterations (relative residual {residual:e})")]
    Solver { iterations: usize, residual: f64 },

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("malformed mesh file: {0}")]
    MeshFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
