//! Symmetric bisection of a ring: the `Q` spectrum, the flip-trace lower
//! bound and its closed form in the couplings.
//!
//! For the bisection `P = 1_{n/2} ⊕ (-1_{n/2})` of a ring with circulant
//! potential `V`, the reduced matrix of the general formula is
//! `Q = V^{-1/2} P V^{1/2} P`. With the flip matrix `F` (ones on the
//! anti-diagonal), `N ≥ |Tr[F log₂ V]|/2`, with equality when the
//! off-diagonal block `V″` satisfies `V″F ≥ 0` or `V″F ≤ 0`, and
//! `|Tr[F log₂ V]| = log₂(1 + 4(α₁ + α₃ + …))`.

use crate::linalg::{eigh_symmetric, matrix_function, EigenDecomposition, SymMatrix};
use crate::{Error, Result, Scalar};

/// Semidefiniteness verdict for `V″F`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Definiteness {
    NegSemidef,
    PosSemidef,
    Indefinite,
}

impl Definiteness {
    pub fn is_semidefinite(self) -> bool {
        !matches!(self, Definiteness::Indefinite)
    }
}

fn require_even(n: usize) -> Result<usize> {
    if n % 2 == 0 {
        Ok(n / 2)
    } else {
        Err(Error::OddSize(n))
    }
}

fn positive_decomposition<T: Scalar>(v: &SymMatrix<T>) -> Result<EigenDecomposition<T>> {
    let e = eigh_symmetric(v)?;
    if e.min_eigenvalue() <= T::zero() {
        return Err(Error::NotPositiveDefinite {
            eigenvalue: e.min_eigenvalue().to_f64_lossy(),
        });
    }
    Ok(e)
}

/// Ascending eigenvalues of `Q = V^{-1/2} P V^{1/2} P`.
///
/// `half_split` selects the contiguous bisection `1_{n/2} ⊕ (-1_{n/2})`;
/// otherwise `P` alternates signs (odd against even oscillators).
/// `Q` is similar to the symmetric `V^{-1/4} P V^{1/2} P V^{-1/4}`,
/// which is what gets diagonalized.
pub fn q_spectrum<T: Scalar>(v: &SymMatrix<T>, half_split: bool) -> Result<Vec<T>> {
    let n = v.dim();
    let h = require_even(n)?;
    let e = positive_decomposition(v)?;
    let quarter = matrix_function(&e, |x| x.sqrt().sqrt().recip())?;
    let root = matrix_function(&e, |x| x.sqrt())?;
    let signs: Vec<T> = (0..n)
        .map(|i| {
            let plus = if half_split { i < h } else { i % 2 == 0 };
            if plus {
                T::one()
            } else {
                -T::one()
            }
        })
        .collect();
    let sym = quarter.congruence(&root.sign_conjugate(&signs)?)?;
    Ok(eigh_symmetric(&sym)?.eigenvalues().to_vec())
}

/// `|Tr[F log₂ V]| / 2` for a circulant `V` of even size.
pub fn bisection_bound<T: Scalar>(v: &SymMatrix<T>) -> Result<T> {
    let n = v.dim();
    require_even(n)?;
    v.check_circulant(T::tolerance(1e-12))?;
    let log_v = matrix_function(&positive_decomposition(v)?, |x| x.log2())?;
    let flip_trace: T = (0..n).map(|i| log_v.get(i, n - 1 - i)).sum();
    Ok(flip_trace.abs() * T::lit(0.5))
}

/// `log₂(1 + 4(α₁ + α₃ + …))`; even-index couplings do not enter.
pub fn coupling_closed_form<T: Scalar>(couplings: &[T]) -> Result<T> {
    let odd: T = couplings.iter().step_by(2).copied().sum();
    let arg = T::one() + T::lit(4.0) * odd;
    if arg.is_nan() || arg <= T::zero() {
        return Err(Error::Domain(format!(
            "1 + 4(α₁ + α₃ + …) = {arg} is not positive; the chain is unstable"
        )));
    }
    Ok(arg.log2())
}

/// `½ log₂(1 + 4α)`: symmetric-bisection negativity of a nearest-neighbour
/// ring, for any even length. Expects `α ≥ 0`.
pub fn nn_closed_form<T: Scalar>(alpha: T) -> T {
    T::lit(0.5) * (T::one() + T::lit(4.0) * alpha).log2()
}

/// Classifies `V″F`, where `V″` is the upper-right `n/2 x n/2` block of
/// `V` and `F` the flip. A zero matrix reports [`Definiteness::NegSemidef`].
pub fn classify_vpp_f<T: Scalar>(v: &SymMatrix<T>) -> Result<Definiteness> {
    let n = v.dim();
    let h = require_even(n)?;
    v.check_circulant(T::tolerance(1e-12))?;
    let block = SymMatrix::from_fn(h, |i, j| v.get(i, n - 1 - j))?;
    let e = eigh_symmetric(&block)?;
    let tol = T::tolerance(1e-10) * T::one().max(block.max_abs());
    let values = e.eigenvalues();
    let (lo, hi) = (values[0], values[h - 1]);
    Ok(if hi <= tol {
        Definiteness::NegSemidef
    } else if lo >= -tol {
        Definiteness::PosSemidef
    } else {
        Definiteness::Indefinite
    })
}
