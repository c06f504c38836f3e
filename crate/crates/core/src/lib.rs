//! Entanglement of Gaussian states of harmonic oscillator chains.
//!
//! The crate builds the potential matrix of a chain with translationally
//! invariant position couplings, derives ground-state and thermal
//! covariance blocks from it, and evaluates the logarithmic negativity of
//! arbitrary bipartitions. Closed-form expressions for the symmetric
//! bisection and the even/odd split are provided next to the general
//! numerics so that one can be checked against the other.
//!
//! The numerical core is generic over the scalar type (anything
//! implementing [`Scalar`], i.e. `f32` or `f64`). The aliases at the crate
//! root fix the scalar to `f64`, which is what the experiment runner and
//! the CLI use.
//!
//! Units: `hbar = m = omega = 1`. Energies are returned in units of the
//! single-oscillator ground energy `E0 = 1/2`.

pub mod chain;
mod error;
pub mod experiments;
pub mod linalg;
pub mod negativity;
pub mod quadrature;
mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use chain::{
    build_potential, chain_covariance, classical_correlations, ground_covariance, ground_energy,
    thermal_covariance, Topology,
};
pub use linalg::{circulant_eigenvalues, eigh_symmetric, matrix_function};
pub use negativity::{
    bipartite_log_negativity, bisection_bound, classify_vpp_f, coupling_closed_form,
    even_odd_negativity, even_odd_rate, log_negativity, log_negativity_oracle, nn_closed_form,
    q_spectrum, reduce, Definiteness, GroupSelection, SignPattern,
};

/// Dense symmetric matrix in double precision.
pub type SymMatrix = linalg::SymMatrix<f64>;
/// Eigendecomposition in double precision.
pub type EigenDecomposition = linalg::EigenDecomposition<f64>;

/// Chain description in double precision.
pub type ChainSpec = chain::ChainSpec<f64>;
/// Covariance blocks in double precision.
pub type CovariancePair = chain::CovariancePair<f64>;
/// Reduced covariance blocks in double precision.
pub type ReducedState = negativity::ReducedState<f64>;
/// Log-negativity and spectrum in double precision.
pub type NegativityResult = negativity::NegativityResult<f64>;

/// Single-precision variants.
pub type SymMatrix32 = linalg::SymMatrix<f32>;
pub type ChainSpec32 = chain::ChainSpec<f32>;
pub type CovariancePair32 = chain::CovariancePair<f32>;
