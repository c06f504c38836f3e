//! Chain model: potential matrix, covariance blocks, ground energy.
//!
//! A chain of `n` unit-mass, unit-frequency oscillators with a `k`-th
//! neighbour spring of strength `α_k` has the potential matrix
//!
//! ```text
//! V[i][i]     = 1 + 2 (α₁ + α₂ + …)
//! V[i][i ± k] = -α_k
//! ```
//!
//! with indices taken mod `n` on a ring. A terminated chain drops the
//! wrap-around entries but keeps the ring diagonal, so that the end
//! oscillators still feel the springs they had before the ring was cut.
//! For couplings beyond nearest neighbour this is an extension of that
//! construction (all wrap-around band entries are dropped).

use crate::linalg::{eigh_symmetric, matrix_function, EigenDecomposition, SymMatrix};
use crate::{Error, Result, Scalar};

/// Thermal factor `coth(x)` is replaced by 1 beyond this argument.
const COTH_SATURATION: f64 = 37.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Topology {
    Ring,
    Terminated,
}

impl Topology {
    pub fn as_str(self) -> &'static str {
        match self {
            Topology::Ring => "ring",
            Topology::Terminated => "terminated",
        }
    }
}

impl std::str::FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ring" => Ok(Topology::Ring),
            "terminated" => Ok(Topology::Terminated),
            other => Err(Error::InvalidChain(format!(
                "unknown topology {other:?} (expected \"ring\" or \"terminated\")"
            ))),
        }
    }
}

/// Physical description of a chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpec<T> {
    n: usize,
    couplings: Vec<T>,
    topology: Topology,
    inverse_temperature: T,
}

impl<T: Scalar> ChainSpec<T> {
    /// Ground-state chain (`β = ∞`). `couplings[k-1]` is `α_k`.
    pub fn new(n: usize, couplings: Vec<T>, topology: Topology) -> Result<Self> {
        let spec = Self {
            n,
            couplings,
            topology,
            inverse_temperature: T::infinity(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn ring(n: usize, couplings: Vec<T>) -> Result<Self> {
        Self::new(n, couplings, Topology::Ring)
    }

    pub fn terminated(n: usize, couplings: Vec<T>) -> Result<Self> {
        Self::new(n, couplings, Topology::Terminated)
    }

    /// Sets `β`; `∞` is the ground state.
    pub fn with_inverse_temperature(mut self, beta: T) -> Result<Self> {
        if beta.is_nan() || beta < T::zero() {
            return Err(Error::InvalidChain(format!(
                "inverse temperature must be nonnegative, got {beta}"
            )));
        }
        self.inverse_temperature = beta;
        Ok(self)
    }

    /// Sets the temperature `T = 1/β`; `T = 0` is the ground state.
    pub fn with_temperature(self, temperature: T) -> Result<Self> {
        if temperature.is_nan() || temperature < T::zero() {
            return Err(Error::InvalidChain(format!(
                "temperature must be nonnegative, got {temperature}"
            )));
        }
        let beta = if temperature == T::zero() {
            T::infinity()
        } else {
            temperature.recip()
        };
        self.with_inverse_temperature(beta)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn couplings(&self) -> &[T] {
        &self.couplings
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn inverse_temperature(&self) -> T {
        self.inverse_temperature
    }

    pub fn is_ground_state(&self) -> bool {
        self.inverse_temperature.is_infinite()
    }

    /// Index of the farthest nonzero coupling (0 when uncoupled).
    pub fn coupling_range(&self) -> usize {
        self.couplings
            .iter()
            .rposition(|&a| a != T::zero())
            .map_or(0, |k| k + 1)
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidChain("chain needs at least one oscillator".into()));
        }
        if let Some(k) = self.couplings.iter().position(|a| !a.is_finite()) {
            return Err(Error::InvalidChain(format!(
                "coupling alpha_{} is not finite",
                k + 1
            )));
        }
        let range = self.coupling_range();
        let max_range = match self.topology {
            Topology::Ring => (self.n - 1) / 2,
            Topology::Terminated => self.n - 1,
        };
        if range > max_range {
            return Err(Error::InvalidChain(format!(
                "coupling range {range} too long for a {} chain of {} oscillators (at most {max_range})",
                self.topology.as_str(),
                self.n
            )));
        }
        Ok(())
    }

    /// Diagonal entry `1 + 2 Σ α_k`.
    pub fn on_site(&self) -> T {
        T::one() + T::lit(2.0) * self.couplings.iter().copied().sum::<T>()
    }

    /// First row `(v₀, v₁, …, v_{n-1})` of the ring potential.
    pub fn ring_row(&self) -> Vec<T> {
        let n = self.n;
        let mut row = vec![T::zero(); n];
        row[0] = self.on_site();
        for (k, &a) in self.couplings.iter().enumerate().take(self.coupling_range()) {
            let j = k + 1;
            row[j] = row[j] - a;
            if n - j != j {
                row[n - j] = row[n - j] - a;
            }
        }
        row
    }
}

/// Position block `γₓ` and momentum block `γₚ` of a Gaussian state whose
/// full covariance matrix is `(γₓ ⊕ γₚ)/2` in `(q, p)` ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct CovariancePair<T> {
    pub x_block: SymMatrix<T>,
    pub p_block: SymMatrix<T>,
}

impl<T: Scalar> CovariancePair<T> {
    pub fn dim(&self) -> usize {
        self.x_block.dim()
    }

    /// Eigenvalues of `γₓγₚ`, computed from the similar symmetric matrix
    /// `γₓ^{1/2} γₚ γₓ^{1/2}`. All equal to 1 for a pure state and at least
    /// 1 for any physical state.
    pub fn uncertainty_spectrum(&self) -> Result<Vec<T>> {
        let ex = eigh_symmetric(&self.x_block)?;
        require_positive(&ex)?;
        let root = matrix_function(&ex, |x| x.sqrt())?;
        let product = root.congruence(&self.p_block)?;
        Ok(eigh_symmetric(&product)?.eigenvalues().to_vec())
    }
}

fn require_positive<T: Scalar>(e: &EigenDecomposition<T>) -> Result<()> {
    let min = e.min_eigenvalue();
    if min > T::zero() {
        Ok(())
    } else {
        Err(Error::NotPositiveDefinite {
            eigenvalue: min.to_f64_lossy(),
        })
    }
}

fn positive_decomposition<T: Scalar>(v: &SymMatrix<T>) -> Result<EigenDecomposition<T>> {
    let e = eigh_symmetric(v)?;
    require_positive(&e)?;
    Ok(e)
}

/// Potential matrix `V` of the chain.
///
/// Fails with [`Error::UnstableChain`] when `V` is not positive definite.
pub fn build_potential<T: Scalar>(spec: &ChainSpec<T>) -> Result<SymMatrix<T>> {
    let n = spec.n();
    let v = match spec.topology() {
        Topology::Ring => {
            let row = spec.ring_row();
            let lambda = crate::linalg::circulant_eigenvalues(&row)?;
            let min = lambda.iter().copied().fold(T::infinity(), T::min);
            if min <= T::zero() {
                return Err(Error::UnstableChain {
                    min_eigenvalue: min.to_f64_lossy(),
                });
            }
            SymMatrix::circulant(&row)?
        }
        Topology::Terminated => {
            let diag = spec.on_site();
            let couplings = spec.couplings();
            let v = SymMatrix::from_fn(n, |i, j| {
                let d = j - i;
                if d == 0 {
                    diag
                } else if d <= couplings.len() {
                    -couplings[d - 1]
                } else {
                    T::zero()
                }
            })?;
            let min = eigh_symmetric(&v)?.min_eigenvalue();
            if min <= T::zero() {
                return Err(Error::UnstableChain {
                    min_eigenvalue: min.to_f64_lossy(),
                });
            }
            v
        }
    };
    Ok(v)
}

/// Ground state blocks `γₓ = V^{-1/2}`, `γₚ = V^{1/2}`.
pub fn ground_covariance<T: Scalar>(v: &SymMatrix<T>) -> Result<CovariancePair<T>> {
    ground_covariance_from(&positive_decomposition(v)?)
}

/// As [`ground_covariance`], reusing a decomposition of `V`.
pub fn ground_covariance_from<T: Scalar>(e: &EigenDecomposition<T>) -> Result<CovariancePair<T>> {
    require_positive(e)?;
    Ok(CovariancePair {
        x_block: matrix_function(e, |x| x.sqrt().recip())?,
        p_block: matrix_function(e, |x| x.sqrt())?,
    })
}

/// `coth(β√λ/2)`, saturated to exactly 1 for large arguments and `β = ∞`.
fn thermal_factor<T: Scalar>(beta: T, lambda: T) -> T {
    let x = beta * lambda.sqrt() * T::lit(0.5);
    if x > T::lit(COTH_SATURATION) {
        T::one()
    } else {
        x.tanh().recip()
    }
}

/// Gibbs state blocks `γₓ(β) = V^{-1/2} coth(βV^{1/2}/2)` and
/// `γₚ(β) = V^{1/2} coth(βV^{1/2}/2)`.
///
/// `β = ∞` gives exactly the ground-state blocks.
pub fn thermal_covariance<T: Scalar>(v: &SymMatrix<T>, beta: T) -> Result<CovariancePair<T>> {
    if beta.is_nan() || beta <= T::zero() {
        return Err(Error::Domain(format!(
            "inverse temperature must be positive, got {beta}"
        )));
    }
    thermal_covariance_from(&positive_decomposition(v)?, beta)
}

pub fn thermal_covariance_from<T: Scalar>(
    e: &EigenDecomposition<T>,
    beta: T,
) -> Result<CovariancePair<T>> {
    if beta.is_nan() || beta <= T::zero() {
        return Err(Error::Domain(format!(
            "inverse temperature must be positive, got {beta}"
        )));
    }
    require_positive(e)?;
    Ok(CovariancePair {
        x_block: matrix_function(e, |x| x.sqrt().recip() * thermal_factor(beta, x))?,
        p_block: matrix_function(e, |x| x.sqrt() * thermal_factor(beta, x))?,
    })
}

/// Covariance blocks of the state described by `spec` (ground or thermal).
pub fn chain_covariance<T: Scalar>(spec: &ChainSpec<T>) -> Result<CovariancePair<T>> {
    let v = build_potential(spec)?;
    let e = positive_decomposition(&v)?;
    if spec.is_ground_state() {
        ground_covariance_from(&e)
    } else {
        thermal_covariance_from(&e, spec.inverse_temperature())
    }
}

/// Ground energy `Tr V^{1/2}` in units of `E₀ = 1/2`.
pub fn ground_energy<T: Scalar>(v: &SymMatrix<T>) -> Result<T> {
    let e = positive_decomposition(v)?;
    Ok(e.eigenvalues().iter().map(|x| x.sqrt()).sum())
}

/// Position correlations `⟨X₁X_j⟩`, `j = 1..n`: the first row of `V^{-1/2}/2`.
///
/// Only defined for circulant `V`, where every row is a shift of the first.
pub fn classical_correlations<T: Scalar>(v: &SymMatrix<T>) -> Result<Vec<T>> {
    v.check_circulant(T::tolerance(1e-12))?;
    let e = positive_decomposition(v)?;
    let gx = matrix_function(&e, |x| x.sqrt().recip())?;
    let half = T::lit(0.5);
    Ok(gx.row(0).iter().map(|&g| g * half).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    type Spec = ChainSpec<f64>;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn ring(n: usize, alpha: &[f64]) -> SymMatrix<f64> {
        build_potential(&Spec::ring(n, alpha.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn nn_ring_first_row() {
        let v = ring(6, &[1.0]);
        assert_eq!(v.row(0), &[3.0, -1.0, 0.0, 0.0, 0.0, -1.0]);
    }

    #[test]
    fn uncoupled_is_identity() {
        assert_eq!(ring(4, &[]), SymMatrix::identity(4).unwrap());
        let t = build_potential(&Spec::terminated(4, vec![0.0]).unwrap()).unwrap();
        assert_eq!(t, SymMatrix::identity(4).unwrap());
    }

    #[test]
    fn terminated_keeps_diagonal_and_drops_corners() {
        let v = build_potential(&Spec::terminated(4, vec![20.0]).unwrap()).unwrap();
        for i in 0..4 {
            assert_eq!(v.get(i, i), 41.0);
        }
        for i in 0..3 {
            assert_eq!(v.get(i, i + 1), -20.0);
        }
        assert_eq!(v.get(0, 3), 0.0);
        assert_eq!(v.get(3, 0), 0.0);
        assert_eq!(v.get(0, 2), 0.0);
    }

    #[test]
    fn ring_row_sums_are_one() {
        let v = ring(11, &[0.7, 2.0, 0.3]);
        for i in 0..11 {
            assert_close(v.row(i).iter().sum(), 1.0, 1e-12);
        }
        assert!(v.check_circulant(0.0).is_ok());
    }

    #[test]
    fn flip_symmetry_exact() {
        let v = ring(10, &[1.5, 0.25]);
        let n = 10;
        for i in 0..n {
            for j in 0..n {
                assert_eq!(v.get(i, j), v.get(n - 1 - i, n - 1 - j));
            }
        }
    }

    #[test]
    fn coupling_range_limits() {
        assert!(Spec::ring(4, vec![1.0, 1.0]).is_err());
        assert!(Spec::ring(5, vec![1.0, 1.0]).is_ok());
        assert!(Spec::ring(2, vec![1.0]).is_err());
        assert!(Spec::ring(2, vec![0.0]).is_ok());
        assert!(Spec::ring(5, vec![1.0, 0.0, 0.0, 0.0]).is_ok());
        assert!(Spec::terminated(1, vec![]).is_ok());
        assert!(Spec::terminated(2, vec![1.0, 1.0]).is_err());
        assert!(Spec::ring(0, Vec::<f64>::new()).is_err());
        assert!(Spec::ring(5, vec![f64::NAN]).is_err());
    }

    #[test]
    fn unstable_chain_rejected() {
        // Λ_{n/2} = 1 - 4·0.3 < 0
        let spec = Spec::ring(8, vec![-0.3]).unwrap();
        assert!(matches!(build_potential(&spec), Err(Error::UnstableChain { .. })));
        let spec = Spec::terminated(8, vec![-0.3]).unwrap();
        assert!(matches!(build_potential(&spec), Err(Error::UnstableChain { .. })));
    }

    #[test]
    fn ground_blocks_of_identity() {
        let cov = ground_covariance(&SymMatrix::<f64>::identity(3).unwrap()).unwrap();
        assert_eq!(cov.x_block, SymMatrix::identity(3).unwrap());
        assert_eq!(cov.p_block, SymMatrix::identity(3).unwrap());
    }

    #[test]
    fn ground_blocks_are_inverse() {
        let v = ring(9, &[3.0, 0.5]);
        let cov = ground_covariance(&v).unwrap();
        let prod = cov.x_block.product(&cov.p_block);
        for i in 0..9 {
            for j in 0..9 {
                let target = if i == j { 1.0 } else { 0.0 };
                assert_close(prod[i * 9 + j], target, 1e-8);
            }
        }
        for x in cov.uncertainty_spectrum().unwrap() {
            assert_close(x, 1.0, 1e-8);
        }
    }

    #[test]
    fn momentum_trace_matches_sqrt_sum() {
        let cov = ground_covariance(&ring(4, &[20.0])).unwrap();
        assert_close(cov.p_block.trace(), 1.0 + 2.0 * 41f64.sqrt() + 9.0, 1e-10);
    }

    #[test]
    fn infinite_beta_is_ground_bitwise() {
        let v = ring(12, &[20.0]);
        let g = ground_covariance(&v).unwrap();
        let t = thermal_covariance(&v, f64::INFINITY).unwrap();
        assert_eq!(g, t);
    }

    #[test]
    fn thermal_single_mode() {
        let t = thermal_covariance(&SymMatrix::<f64>::identity(3).unwrap(), 2.0).unwrap();
        let coth1 = 1.0 / 1f64.tanh();
        for i in 0..3 {
            assert_close(t.x_block.get(i, i), coth1, 1e-14);
            assert_close(t.p_block.get(i, i), coth1, 1e-14);
        }
        assert_close(coth1, 1.3130, 1e-4);
    }

    #[test]
    fn thermal_uncertainty_spectrum() {
        let v = ring(8, &[2.0]);
        let beta = 0.7;
        let t = thermal_covariance(&v, beta).unwrap();
        let mut want: Vec<f64> = crate::linalg::circulant_eigenvalues(&Spec::ring(8, vec![2.0]).unwrap().ring_row())
            .unwrap()
            .iter()
            .map(|l| (1.0 / (beta * l.sqrt() / 2.0).tanh()).powi(2))
            .collect();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let got = t.uncertainty_spectrum().unwrap();
        for (a, b) in got.iter().zip(&want) {
            assert_close(*a, *b, 1e-9 * b);
            assert!(*a >= 1.0 - 1e-10);
        }
        // blocks commute
        let xp = t.x_block.product(&t.p_block);
        let px = t.p_block.product(&t.x_block);
        for (a, b) in xp.iter().zip(&px) {
            assert_close(*a, *b, 1e-9);
        }
    }

    #[test]
    fn thermal_rejects_nonpositive_beta() {
        let v = ring(4, &[1.0]);
        assert!(thermal_covariance(&v, 0.0).is_err());
        assert!(thermal_covariance(&v, -1.0).is_err());
    }

    #[test]
    fn temperature_zero_is_ground() {
        let spec = Spec::ring(4, vec![1.0]).unwrap().with_temperature(0.0).unwrap();
        assert!(spec.is_ground_state());
        let spec = spec.with_temperature(4.0).unwrap();
        assert_eq!(spec.inverse_temperature(), 0.25);
        assert!(spec.with_temperature(-1.0).is_err());
    }

    #[test]
    fn energy_values() {
        assert_close(ground_energy(&SymMatrix::<f64>::identity(7).unwrap()).unwrap(), 7.0, 1e-14);
        assert_close(ground_energy(&ring(4, &[20.0])).unwrap(), 22.806, 1e-3);
        let spec = Spec::ring(13, vec![0.4, 1.1]).unwrap();
        let lam = crate::linalg::circulant_eigenvalues(&spec.ring_row()).unwrap();
        let oracle: f64 = lam.iter().map(|l| l.sqrt()).sum();
        assert_close(ground_energy(&build_potential(&spec).unwrap()).unwrap(), oracle, 1e-9);
    }

    #[test]
    fn energy_large_coupling_limit() {
        // E / (n √α) → 4/π
        let alpha = 1e6;
        let n = 200;
        let e = ground_energy(&ring(n, &[alpha])).unwrap();
        assert_close(e / (n as f64 * alpha.sqrt()), 4.0 / std::f64::consts::PI, 1e-3);
    }

    #[test]
    fn correlations_uncoupled() {
        let c = classical_correlations(&SymMatrix::<f64>::identity(5).unwrap()).unwrap();
        assert_eq!(c, vec![0.5, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn correlations_shape() {
        let n = 40;
        let c = classical_correlations(&ring(n, &[20.0])).unwrap();
        for j in 1..n {
            assert_close(c[j], c[n - j], 1e-10);
        }
        for j in 0..n / 2 {
            assert!(c[j] > 0.0);
            assert!(c[j + 1] < c[j]);
        }
    }

    #[test]
    fn correlations_require_circulant() {
        let v = build_potential(&Spec::terminated(6, vec![1.0]).unwrap()).unwrap();
        assert!(matches!(classical_correlations(&v), Err(Error::NotCirculant { .. })));
    }

    #[test]
    fn single_precision_chain() {
        let spec = crate::ChainSpec32::ring(8, vec![2.0]).unwrap();
        let v = build_potential(&spec).unwrap();
        let e = ground_energy(&v).unwrap();
        let lam = crate::linalg::circulant_eigenvalues(&spec.ring_row()).unwrap();
        let oracle: f32 = lam.iter().map(|l| l.sqrt()).sum();
        assert!((e - oracle).abs() < 1e-4 * oracle);
    }
}
