use num_complex::Complex64;
use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max asymmetry {deviation:.3e} exceeds {limit:.3e}")]
    NotHermitian { deviation: f64, limit: f64 },

    #[error("unsupported dimension {dim}: {reason}")]
    UnsupportedDimension { dim: usize, reason: &'static str },

    #[error(
        "eigenvalue clusters at {first} and {second} are closer than twice the \
         cluster tolerance {tol:.3e}; verdict withheld"
    )]
    ClusterAmbiguity {
        first: Complex64,
        second: Complex64,
        tol: f64,
    },

    #[error("singular value index {k} out of range 1..={dim}")]
    IndexOutOfRange { k: usize, dim: usize },

    #[error("dimension mismatch: {a}x{a} vs {b}x{b}")]
    DimensionMismatch { a: usize, b: usize },

    #[error("{z} is not within {tol:.3e} of any eigenvalue")]
    NotAnEigenvalue { z: Complex64, tol: f64 },

    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),

    #[error("unknown gallery example `{0}`")]
    UnknownExample(String),
}

pub type Result<T> = std::result::Result<T, Error>;
