//! Error type shared by every module of the crate.

use thiserror::Error;

/// Unified error enum for matrix construction, spectral computations, model
/// validation, and closed-form domain checks.
#[derive(Debug, Error)]
pub enum Error {
    /// Matrix dimension outside the supported range 1..=8.
    #[error("matrix dimension {dim} outside the supported range 1..=8")]
    BadDimension { dim: usize },

    /// Two operands (or an entry buffer) disagree on dimension.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// A NaN or infinite entry was encountered in input data.
    #[error("non-finite entry in input data")]
    NonFinite,

    /// Input claimed to be Hermitian deviates from its Hermitian part by more
    /// than the admissible correction.
    #[error("matrix is not Hermitian: symmetrization correction {correction:.3e} exceeds 1e-9")]
    NotHermitian { correction: f64 },

    /// The Jacobi eigensolver failed to reach the off-diagonal target.
    #[error("eigensolver did not converge for dimension {dim}: off-diagonal norm {off_diagonal:.3e} after the sweep limit")]
    NoConvergence { dim: usize, off_diagonal: f64 },

    /// A positive-definite operation met an eigenvalue at or below the floor.
    #[error("rank-deficient matrix: eigenvalue {eigenvalue:.3e} at or below the 1e-10 floor")]
    RankDeficient { eigenvalue: f64 },

    /// A density matrix whose trace is not 1 within tolerance.
    #[error("density matrix trace {trace} deviates from 1 beyond 1e-10")]
    NonUnitTrace { trace: f64 },

    /// A density matrix with an eigenvalue below the negativity tolerance.
    #[error("density matrix has negative eigenvalue {eigenvalue:.3e}")]
    PositivityViolation { eigenvalue: f64 },

    /// The SLD Fisher matrix is singular (or indefinite) so the model carries
    /// no two-parameter information.
    #[error("non-regular model: SLD Fisher matrix determinant {det:.3e}")]
    NonRegularModel { det: f64 },

    /// Bound intersections were requested but the preconditions
    /// (delta != 0, Delta > 0, not D-invariant) do not hold.
    #[error("the SLD and RLD bounds do not intersect for this model")]
    NoIntersection,

    /// Generator geometry collapses the two-parameter family (for example a
    /// generator proportional to (1,1,1), which zeroes its cross vector).
    #[error("degenerate generator geometry: {reason}")]
    DegenerateGeometry { reason: &'static str },

    /// A scalar argument left its mathematical domain.
    #[error("domain violation: {name} = {value} outside {domain}")]
    DomainViolation {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// A pure state vector whose norm is not 1 within tolerance.
    #[error("state vector norm {norm} deviates from 1 beyond 1e-10")]
    NotNormalized { norm: f64 },

    /// Underlying JSON (de)serialization failure.
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
