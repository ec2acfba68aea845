use thiserror::Error;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum FrameError {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point outside chart domain: {0}")]
    OutOfChart(String),

    #[error("chart degeneracy: {0}")]
    ChartDegeneracy(String),

    #[error("{what} did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("coadjoint map is not an immersion at the identity (det = {det:.3e})")]
    NotImmersion { det: f64 },

    #[error("no admissible neighborhood: {0}")]
    NoNeighborhood(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("window: {0}")]
    Window(String),

    #[error("unknown catalog id `{0}`")]
    UnknownCatalog(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, FrameError>;
