use std::path::PathBuf;

/// Errors raised by the numerical routines and file readers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NonSymmetric { asymmetry: f64 },

    #[error("non-finite value encountered in {context}")]
    NonFinite { context: &'static str },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("shape mismatch: {0}")]
    BadShape(String),

    #[error("vectors do not span the space (lower bound {lower:e}, upper bound {upper:e})")]
    NotAFrame { lower: f64, upper: f64 },

    #[error("frame vector {index} is not unit norm (norm {norm})")]
    NotUnitNorm { index: usize, norm: f64 },

    #[error("frame is not Parseval (max deviation of frame operator from identity {deviation:e})")]
    NotParseval { deviation: f64 },

    #[error("frame is not full spark ({0})")]
    NotFullSpark(String),

    #[error("saturation level must be positive, got {0}")]
    BadLambda(f64),

    #[error("coefficient {index} = {value} exceeds saturation level {lambda}")]
    BadCoeffs { index: usize, value: f64, lambda: f64 },

    #[error("step size {alpha} outside (0, 2/B) with upper frame bound B = {upper}")]
    StepOutOfRange { alpha: f64, upper: f64 },

    #[error("trial {trial}: unsaturated vectors failed to span after {redraws} redraws")]
    DegenerateTrial { trial: usize, redraws: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
