//! Logarithmic negativity of Gaussian states without position-momentum
//! correlations.
//!
//! For two disjoint groups of oscillators the covariance blocks are
//! restricted to the union of the groups (`μₓ`, `μₚ`), the momenta of the
//! second group change sign under partial transposition (`P_p`), and
//!
//! ```text
//! N = -Σ_j log₂ min(1, λ_j(μₓ P_p μₚ P_p))
//! ```
//!
//! [`log_negativity`] evaluates this through the symmetric similar matrix
//! `μₓ^{1/2} (P_p μₚ P_p) μₓ^{1/2}`; [`log_negativity_oracle`] goes
//! through the full `2m x 2m` symplectic construction instead and exists
//! to cross-check the first.

mod bisection;
mod even_odd;
mod oracle;

pub use bisection::{
    bisection_bound, classify_vpp_f, coupling_closed_form, nn_closed_form, q_spectrum,
    Definiteness,
};
pub use even_odd::{even_odd_negativity, even_odd_rate};
pub use oracle::log_negativity_oracle;

use crate::chain::CovariancePair;
use crate::linalg::{eigh_symmetric, matrix_function, SymMatrix};
use crate::{Error, Result, Scalar};

/// Two disjoint, nonempty groups of oscillators (0-based, ascending).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupSelection {
    group_a: Vec<usize>,
    group_b: Vec<usize>,
}

impl GroupSelection {
    /// Builds a selection on a chain of `n` oscillators from 0-based
    /// indices in any order.
    pub fn new(
        group_a: impl IntoIterator<Item = usize>,
        group_b: impl IntoIterator<Item = usize>,
        n: usize,
    ) -> Result<Self> {
        let a = canonical(group_a, n, "A")?;
        let b = canonical(group_b, n, "B")?;
        if let Some(x) = a.iter().find(|x| b.binary_search(x).is_ok()) {
            return Err(Error::InvalidSelection(format!(
                "oscillator {} belongs to both groups",
                x + 1
            )));
        }
        Ok(Self {
            group_a: a,
            group_b: b,
        })
    }

    /// Same as [`GroupSelection::new`] with 1-based indices.
    pub fn from_one_based(
        group_a: impl IntoIterator<Item = usize>,
        group_b: impl IntoIterator<Item = usize>,
        n: usize,
    ) -> Result<Self> {
        let shift = |v: Vec<usize>| -> Result<Vec<usize>> {
            v.into_iter()
                .map(|i| {
                    i.checked_sub(1).ok_or_else(|| {
                        Error::InvalidSelection("oscillator indices start at 1".into())
                    })
                })
                .collect()
        };
        Self::new(
            shift(group_a.into_iter().collect())?,
            shift(group_b.into_iter().collect())?,
            n,
        )
    }

    /// Oscillators `1..=n/2` against `n/2+1..=n`.
    pub fn symmetric_bisection(n: usize) -> Result<Self> {
        if n % 2 != 0 {
            return Err(Error::OddSize(n));
        }
        Self::new(0..n / 2, n / 2..n, n)
    }

    /// Contiguous groups of sizes `n1` and `n2` covering `n1 + n2` oscillators.
    pub fn bisection(n1: usize, n2: usize) -> Result<Self> {
        Self::new(0..n1, n1..n1 + n2, n1 + n2)
    }

    /// Odd positions (1, 3, 5, …) against even positions.
    pub fn even_odd(n: usize) -> Result<Self> {
        if n % 2 != 0 {
            return Err(Error::OddSize(n));
        }
        Self::new((0..n).step_by(2), (1..n).step_by(2), n)
    }

    /// Two contiguous groups of `size` oscillators with `separation`
    /// oscillators between them, starting at the first oscillator.
    pub fn separated(size: usize, separation: usize, n: usize) -> Result<Self> {
        Self::new(0..size, size + separation..2 * size + separation, n)
    }

    pub fn group_a(&self) -> &[usize] {
        &self.group_a
    }

    pub fn group_b(&self) -> &[usize] {
        &self.group_b
    }

    /// Ascending union of both groups.
    pub fn union(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.group_a.iter().chain(&self.group_b).copied().collect();
        all.sort_unstable();
        all
    }

    pub fn len(&self) -> usize {
        self.group_a.len() + self.group_b.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sign_pattern(&self) -> SignPattern {
        SignPattern(
            self.union()
                .into_iter()
                .map(|i| self.group_a.binary_search(&i).is_ok())
                .collect(),
        )
    }

    pub fn swapped(&self) -> Self {
        Self {
            group_a: self.group_b.clone(),
            group_b: self.group_a.clone(),
        }
    }

    /// Shifts every index by `offset` around a ring of `n` oscillators.
    pub fn rotated(&self, offset: usize, n: usize) -> Result<Self> {
        Self::new(
            self.group_a.iter().map(|i| (i + offset) % n),
            self.group_b.iter().map(|i| (i + offset) % n),
            n,
        )
    }
}

fn canonical(group: impl IntoIterator<Item = usize>, n: usize, name: &str) -> Result<Vec<usize>> {
    let mut g: Vec<usize> = group.into_iter().collect();
    if g.is_empty() {
        return Err(Error::InvalidSelection(format!("group {name} is empty")));
    }
    g.sort_unstable();
    if let Some(w) = g.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::InvalidSelection(format!(
            "oscillator {} listed twice in group {name}",
            w[0] + 1
        )));
    }
    if let Some(&last) = g.last() {
        if last >= n {
            return Err(Error::InvalidSelection(format!(
                "oscillator {} in group {name} is outside the chain of {n}",
                last + 1
            )));
        }
    }
    Ok(g)
}

/// Partial-transpose sign pattern over the ascending union of the groups:
/// `true` (+1) for group A, `false` (-1) for group B.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignPattern(Vec<bool>);

impl SignPattern {
    pub fn all_plus(m: usize) -> Self {
        Self(vec![true; m])
    }

    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        signs
            .iter()
            .map(|&s| match s {
                1 => Ok(true),
                -1 => Ok(false),
                other => Err(Error::InvalidSelection(format!("sign {other} is not ±1"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn signs(&self) -> Vec<i8> {
        self.0.iter().map(|&p| if p { 1 } else { -1 }).collect()
    }

    pub fn as_scalars<T: Scalar>(&self) -> Vec<T> {
        self.0
            .iter()
            .map(|&p| if p { T::one() } else { -T::one() })
            .collect()
    }
}

/// Covariance blocks restricted to the two groups.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedState<T> {
    pub mu_x: SymMatrix<T>,
    pub mu_p: SymMatrix<T>,
    pub signs: SignPattern,
}

/// Log-negativity (base 2) and the ascending spectrum of `μₓP_pμₚP_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct NegativityResult<T> {
    pub log_negativity: T,
    pub symplectic_spectrum: Vec<T>,
}

impl<T: Scalar> NegativityResult<T> {
    fn from_spectrum(mut spectrum: Vec<T>) -> Self {
        spectrum.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        Self {
            log_negativity: negativity_of_spectrum(&spectrum),
            symplectic_spectrum: spectrum,
        }
    }
}

/// `-Σ log₂ min(1, λ)`; exact comparison against 1.
pub(crate) fn negativity_of_spectrum<T: Scalar>(spectrum: &[T]) -> T {
    let n: T = spectrum
        .iter()
        .filter(|&&l| l < T::one())
        .map(|&l| -l.log2())
        .sum();
    // -0.0 from an empty sum
    n + T::zero()
}

/// Principal submatrices of `cov` on the union of the groups, plus the
/// partial-transpose signs.
pub fn reduce<T: Scalar>(cov: &CovariancePair<T>, sel: &GroupSelection) -> Result<ReducedState<T>> {
    let n = cov.dim();
    let idx = sel.union();
    if let Some(&bad) = idx.iter().find(|&&i| i >= n) {
        return Err(Error::InvalidSelection(format!(
            "oscillator {} is outside the chain of {n}",
            bad + 1
        )));
    }
    Ok(ReducedState {
        mu_x: cov.x_block.principal_submatrix(&idx)?,
        mu_p: cov.p_block.principal_submatrix(&idx)?,
        signs: sel.sign_pattern(),
    })
}

fn check_dims<T: Scalar>(mu_x: &SymMatrix<T>, mu_p: &SymMatrix<T>, signs: &SignPattern) -> Result<()> {
    if mu_x.dim() != mu_p.dim() || mu_x.dim() != signs.len() {
        return Err(Error::DimensionMismatch(format!(
            "mu_x is {0}x{0}, mu_p is {1}x{1}, {2} signs",
            mu_x.dim(),
            mu_p.dim(),
            signs.len()
        )));
    }
    Ok(())
}

/// Logarithmic negativity from reduced covariance blocks.
pub fn log_negativity<T: Scalar>(
    mu_x: &SymMatrix<T>,
    mu_p: &SymMatrix<T>,
    signs: &SignPattern,
) -> Result<NegativityResult<T>> {
    check_dims(mu_x, mu_p, signs)?;
    let ex = eigh_symmetric(mu_x)?;
    if ex.min_eigenvalue() <= T::zero() {
        return Err(Error::NotPositiveDefinite {
            eigenvalue: ex.min_eigenvalue().to_f64_lossy(),
        });
    }
    let root = matrix_function(&ex, |x| x.sqrt())?;
    let flipped = mu_p.sign_conjugate(&signs.as_scalars())?;
    let sym = root.congruence(&flipped)?;
    let spectrum = eigh_symmetric(&sym)?.eigenvalues().to_vec();
    if let Some(&bad) = spectrum.iter().find(|&&l| l <= T::zero()) {
        return Err(Error::NotPositiveDefinite {
            eigenvalue: bad.to_f64_lossy(),
        });
    }
    Ok(NegativityResult::from_spectrum(spectrum))
}

/// Reduces `cov` to `sel` and evaluates [`log_negativity`].
pub fn bipartite_log_negativity<T: Scalar>(
    cov: &CovariancePair<T>,
    sel: &GroupSelection,
) -> Result<NegativityResult<T>> {
    let r = reduce(cov, sel)?;
    log_negativity(&r.mu_x, &r.mu_p, &r.signs)
}
