use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("jacobi eigensolver did not converge for a {dim}x{dim} matrix (off-diagonal residual {residual:e})")]
    NoConvergence { dim: usize, residual: f64 },

    #[error("function is not finite at eigenvalue {eigenvalue}")]
    MatrixFunctionDomain { eigenvalue: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("circulant row is not symmetric: v[{index}] = {value} but v[{mirror}] = {mirror_value}")]
    AsymmetricCirculant {
        index: usize,
        mirror: usize,
        value: f64,
        mirror_value: f64,
    },

    #[error("matrix is not circulant: entry ({row}, {col}) differs from the first row")]
    NotCirculant { row: usize, col: usize },

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("unstable chain: potential matrix has eigenvalue {min_eigenvalue} <= 0")]
    UnstableChain { min_eigenvalue: f64 },

    #[error("matrix is not positive definite (eigenvalue {eigenvalue})")]
    NotPositiveDefinite { eigenvalue: f64 },

    #[error("invalid group selection: {0}")]
    InvalidSelection(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("operation requires an even number of oscillators, got {0}")]
    OddSize(usize),

    #[error("adaptive quadrature did not reach tolerance (error estimate {estimate:e})")]
    Quadrature { estimate: f64 },

    #[error("invalid scenario: {0}")]
    Scenario(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the numerics themselves, as opposed to invalid
    /// input (bad chain, bad groups, unstable couplings).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::MatrixFunctionDomain { .. }
                | Error::NotPositiveDefinite { .. }
                | Error::Quadrature { .. }
        )
    }
}
