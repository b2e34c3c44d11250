use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the mesh → refine → assemble → solve pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("non-manifold mesh: face {face:?} has {count} incident tetrahedra")]
    NonManifoldMesh { face: [usize; 3], count: usize },
    #[error("geometry inconsistency: {0}")]
    GeometryInconsistency(String),
    #[error("degenerate element: {0}")]
    DegenerateElement(String),
    #[error("invalid Worsey-Farin split: {0}")]
    InvalidSplit(String),
    #[error("unsupported degree {degree} (supported: {min}..={max})")]
    UnsupportedDegree { degree: usize, min: usize, max: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("problem too large: dimension {dim} exceeds dense cap {cap}{}", .context.as_deref().map(|c| format!(" ({c})")).unwrap_or_default())]
    ProblemTooLarge {
        dim: usize,
        cap: usize,
        context: Option<String>,
    },
    #[error("insufficient spectrum: {available} nonzero eigenvalues computed, {requested} requested")]
    InsufficientSpectrum { available: usize, requested: usize },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("parse error in {source_name} line {line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
