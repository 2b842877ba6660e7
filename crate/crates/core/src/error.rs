use alloc::vec::Vec;

use crate::Complex;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Errors shared by all modules.
///
/// Numerical mismatches carry enough context to reconstruct what was
/// compared; enumeration guards carry the projected work so callers can
/// decide whether to raise the cap.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A vector or matrix had the wrong dimension.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch {
        /// Dimension required by the operation.
        expected: usize,
        /// Dimension actually supplied.
        got: usize,
    },

    /// Exact integer arithmetic overflowed; results are never wrapped.
    #[error("integer overflow in exact arithmetic")]
    Overflow,

    /// A matrix required to be symmetric was not.
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric {
        /// Offending row.
        row: usize,
        /// Offending column.
        col: usize,
    },

    /// A Gram matrix was not positive definite.
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    /// Enumeration would visit more points than the configured cap.
    #[error("enumeration cap {cap} exceeded: projected count {projected}")]
    CapExceeded {
        /// Configured maximum number of points.
        cap: u64,
        /// Estimated (or partially counted) number of points.
        projected: u64,
    },

    /// A Lambda operator fell below the structural spectral floor of 2.
    #[error("lambda operator spectrum below 2: min eigenvalue {min_eigenvalue}")]
    LambdaSpectrum {
        /// Smallest eigenvalue found.
        min_eigenvalue: f64,
    },

    /// Quadrature self-estimate failed to reach the requested accuracy.
    #[error("quadrature did not converge: estimates {coarse} then {fine}")]
    QuadratureNotConverged {
        /// Estimate at the requested resolution.
        coarse: f64,
        /// Estimate at double the resolution.
        fine: f64,
    },

    /// Too few usable data points for a fit or series operation.
    #[error("need at least {needed} usable points, got {got}")]
    TooFewPoints {
        /// Minimum required.
        needed: usize,
        /// Number available.
        got: usize,
    },

    /// A scalar argument was outside its domain.
    #[error("invalid argument: {context}")]
    InvalidArgument {
        /// What was wrong.
        context: &'static str,
    },

    /// The same Yukawa index triple was supplied twice.
    #[error("duplicate Yukawa triple ({i}, {j}, {k})")]
    DuplicateTriple {
        /// First index (1-based as supplied).
        i: usize,
        /// Second index.
        j: usize,
        /// Third index.
        k: usize,
    },

    /// A Yukawa index was outside 1..=h21.
    #[error("Yukawa index {index} out of range 1..={h21}")]
    IndexOutOfRange {
        /// Offending 1-based index.
        index: usize,
        /// Number of moduli.
        h21: usize,
    },

    /// The Hodge-metric identity residual exceeded its tolerance.
    ///
    /// Carries both sides of the comparison, row-major.
    #[error("Hodge identity residual {residual} above tolerance")]
    HodgeMismatch {
        /// Max-norm of the difference.
        residual: f64,
        /// Lambda-side complex matrix.
        lambda_side: Vec<Complex>,
        /// Curvature-side complex matrix.
        curvature_side: Vec<Complex>,
    },

    /// Too many Monte-Carlo samples were rejected as non-finite.
    #[error("{rejected} of {samples} Monte-Carlo samples rejected (limit 0.1%)")]
    TooManyRejections {
        /// Rejected sample count.
        rejected: u64,
        /// Total sample count.
        samples: u64,
    },
}
