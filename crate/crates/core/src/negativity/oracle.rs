//! Cross-check of [`super::log_negativity`] through the full phase-space
//! covariance matrix.
//!
//! The partially transposed covariance `μ^Γ = (μₓ ⊕ P_pμₚP_p)/2` is
//! `2m x 2m`. The eigenvalues of `B = -iΣμ^Γ` come in pairs `±ν_k`, and
//!
//! ```text
//! N = -Σ_{k=1}^{2m} log₂ min(1, 2|λ_k(B)|)
//! ```
//!
//! With `S = (μ^Γ)^{1/2}`, `Σμ^Γ = S⁻¹(SΣS)S`, so `B` is similar to
//! `-i·SΣS`. `SΣS` is real antisymmetric, hence `(SΣS)ᵀ(SΣS)` is symmetric
//! with eigenvalues `|λ_k(B)|²`, each appearing twice. That keeps the
//! whole route inside the symmetric eigensolver while sharing nothing
//! with the `μₓ^{1/2}(P_pμₚP_p)μₓ^{1/2}` reduction.

use super::{check_dims, NegativityResult, SignPattern};
use crate::linalg::{eigh_symmetric, matrix_function, SymMatrix};
use crate::{Error, Result, Scalar};

/// Logarithmic negativity through the `2m x 2m` symplectic construction.
///
/// Returns the same contract as [`super::log_negativity`]: the spectrum
/// field holds `λ_j(μₓP_pμₚP_p) = 4ν_j²`, ascending.
pub fn log_negativity_oracle<T: Scalar>(
    mu_x: &SymMatrix<T>,
    mu_p: &SymMatrix<T>,
    signs: &SignPattern,
) -> Result<NegativityResult<T>> {
    check_dims(mu_x, mu_p, signs)?;
    let m = mu_x.dim();
    let s = signs.as_scalars::<T>();
    let half = T::lit(0.5);

    let gamma = SymMatrix::from_fn(2 * m, |i, j| {
        if i < m && j < m {
            mu_x.get(i, j) * half
        } else if i >= m && j >= m {
            s[i - m] * mu_p.get(i - m, j - m) * s[j - m] * half
        } else {
            T::zero()
        }
    })?;
    let eg = eigh_symmetric(&gamma)?;
    if eg.min_eigenvalue() <= T::zero() {
        return Err(Error::NotPositiveDefinite {
            eigenvalue: eg.min_eigenvalue().to_f64_lossy(),
        });
    }
    let root = matrix_function(&eg, |x| x.sqrt())?;

    // root · Σ with Σ = [[0, 1], [-1, 0]]
    let dim = 2 * m;
    let mut root_sigma = vec![T::zero(); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            root_sigma[i * dim + j] = if j < m {
                -root.get(i, j + m)
            } else {
                root.get(i, j - m)
            };
        }
    }
    // A = root · Σ · root (antisymmetric)
    let mut a = vec![T::zero(); dim * dim];
    for i in 0..dim {
        for k in 0..dim {
            let x = root_sigma[i * dim + k];
            if x == T::zero() {
                continue;
            }
            for j in 0..dim {
                a[i * dim + j] = a[i * dim + j] + x * root.get(k, j);
            }
        }
    }
    // AᵀA
    let mut gram = vec![T::zero(); dim * dim];
    for k in 0..dim {
        for i in 0..dim {
            let x = a[k * dim + i];
            if x == T::zero() {
                continue;
            }
            for j in 0..dim {
                gram[i * dim + j] = gram[i * dim + j] + x * a[k * dim + j];
            }
        }
    }
    let gram = SymMatrix::from_row_major(dim, &gram)?;
    let squared = eigh_symmetric(&gram)?.eigenvalues().to_vec();

    let two = T::lit(2.0);
    let log_negativity = squared
        .iter()
        .map(|&e| two * e.max(T::zero()).sqrt())
        .filter(|&x| x < T::one())
        .map(|x| -x.log2())
        .sum::<T>()
        + T::zero();
    let four = T::lit(4.0);
    let symplectic_spectrum = squared
        .chunks(2)
        .map(|pair| four * (pair[0] + pair[1]) * half)
        .collect();
    Ok(NegativityResult {
        log_negativity,
        symplectic_spectrum,
    })
}
