//! Odd against even oscillators on a ring.
//!
//! The alternating sign pattern maps Fourier mode `k` onto `k + n/2`, so
//! the spectrum of `Q` is `(Λ_{k+n/2}/Λ_k)^{±1/2}` and the negativity is a
//! sum over log-ratios of circulant eigenvalues. For large `n` it grows
//! linearly, `N ≈ c(α)·n`.

use std::f64::consts::FRAC_PI_2;

use crate::chain::ChainSpec;
use crate::linalg::circulant_eigenvalues;
use crate::quadrature::adaptive_simpson;
use crate::{Error, Result, Scalar};

const RATE_TOLERANCE: f64 = 1e-10;

/// `½ Σ_{k=0}^{n-1} max(0, log₂(Λ_{(k+n/2) mod n} / Λ_k))` for the ring
/// with the given couplings.
///
/// Each reciprocal pair of `Q` eigenvalues contributes exactly once.
pub fn even_odd_negativity<T: Scalar>(n: usize, couplings: &[T]) -> Result<T> {
    if n % 2 != 0 {
        return Err(Error::OddSize(n));
    }
    let spec = ChainSpec::ring(n, couplings.to_vec())?;
    let lambda = circulant_eigenvalues(&spec.ring_row())?;
    if let Some(&bad) = lambda.iter().find(|&&l| l <= T::zero()) {
        return Err(Error::UnstableChain {
            min_eigenvalue: bad.to_f64_lossy(),
        });
    }
    let h = n / 2;
    let sum: T = (0..n)
        .map(|k| (lambda[(k + h) % n] / lambda[k]).log2().max(T::zero()))
        .sum();
    Ok(sum * T::lit(0.5))
}

/// Asymptotic slope `c(α) = (1/2π) ∫₀^{π/2} log₂[(1+2α(1+cos x)) / (1+2α(1−cos x))] dx`
/// of the nearest-neighbour even/odd negativity, `N ≈ c·n`.
pub fn even_odd_rate<T: Scalar>(alpha: T) -> Result<T> {
    if alpha.is_nan() || alpha <= T::zero() {
        return Err(Error::Domain(format!("coupling must be positive, got {alpha}")));
    }
    let one = T::one();
    let two_alpha = T::lit(2.0) * alpha;
    let integrand = |x: T| {
        let c = x.cos();
        ((one + two_alpha * (one + c)) / (one + two_alpha * (one - c))).log2()
    };
    let integral = adaptive_simpson(
        integrand,
        T::zero(),
        T::lit(FRAC_PI_2),
        T::tolerance(RATE_TOLERANCE),
    )?;
    Ok(integral / T::TAU())
}
