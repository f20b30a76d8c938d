use thiserror::Error;

/// Errors across the library.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A Jacobi index outside every supported evaluation branch.
    #[error("invalid Jacobi index (alpha={alpha}, beta={beta}, n={n}): {reason}")]
    InvalidIndex {
        alpha: f64,
        beta: f64,
        n: usize,
        reason: &'static str,
    },

    /// Newton iteration for a quadrature node failed to converge.
    #[error("quadrature node solver did not converge for root {root} of order {order}")]
    NodeNonConvergence { order: usize, root: usize },

    /// Basis index below the first admissible index for the mode.
    #[error("basis index i={i} out of range for mode m={m} (minimum {min})")]
    IndexOutOfRange { m: i32, i: usize, min: usize },

    /// Requested expansion would divide by r where the function does not vanish.
    #[error(
        "singular request: {what} of the low-mode basis function (m={m}, i={i}) is not polynomial"
    )]
    SingularRequest {
        m: i32,
        i: usize,
        what: &'static str,
    },

    /// Mass matrix failed the symmetric positive definite check.
    #[error("SPD violation: {context} (pivot {pivot} at index {index})")]
    SpdViolation {
        context: &'static str,
        index: usize,
        pivot: f64,
    },

    /// Cholesky factorization failed; B is not positive definite.
    #[error("Cholesky failure at index {index}: pivot {pivot}")]
    CholeskyFailure { index: usize, pivot: f64 },

    /// The QL iteration for a tridiagonal eigenvalue did not converge.
    #[error("QL iteration did not converge for eigenvalue index {index}")]
    QlNonConvergence { index: usize },

    /// Rayleigh quotient of the zero vector.
    #[error("Rayleigh quotient requested for a zero vector")]
    ZeroVector,

    /// Bessel argument outside the supported working range.
    #[error("Bessel evaluation out of range (order={order}, x={x})")]
    BesselOutOfRange { order: u32, x: f64 },

    /// Sign scan failed to bracket a Bessel zero.
    #[error("failed to bracket zero {index} of J_{order}")]
    BracketFailure { order: u32, index: usize },

    /// Invalid ellipse geometry or truncation.
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    /// Eigenvalue count exceeds the problem dimension, or dimension is zero.
    #[error("invalid eigenvalue request: {0}")]
    InvalidRequest(String),
}

pub type Result<T> = std::result::Result<T, Error>;
