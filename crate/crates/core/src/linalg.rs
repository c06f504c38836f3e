//! Dense real symmetric matrices, their eigendecomposition and spectral
//! matrix functions.

use crate::{Error, Result, Scalar};

const MAX_SWEEPS: usize = 100;

/// Dense real symmetric matrix stored row-major.
///
/// Every constructor produces an exactly symmetric matrix: entries are
/// either mirrored from the upper triangle or averaged with their
/// transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Scalar> SymMatrix<T> {
    /// Builds a matrix from the upper triangle of `f` (called with `i <= j`).
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch("matrix dimension must be at least 1".into()));
        }
        let mut data = vec![T::zero(); dim * dim];
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                data[i * dim + j] = v;
                data[j * dim + i] = v;
            }
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from a square row-major slice, replacing it with
    /// `(A + Aᵀ)/2`.
    pub fn from_row_major(dim: usize, entries: &[T]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        let half = T::lit(0.5);
        Self::from_fn(dim, |i, j| {
            if i == j {
                entries[i * dim + i]
            } else {
                (entries[i * dim + j] + entries[j * dim + i]) * half
            }
        })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch("rows must form a square matrix".into()));
        }
        let flat: Vec<T> = rows.iter().flatten().copied().collect();
        Self::from_row_major(dim, &flat)
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_fn(dim, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_diagonal(diag: &[T]) -> Result<Self> {
        Self::from_fn(diag.len(), |i, j| if i == j { diag[i] } else { T::zero() })
    }

    /// Symmetric circulant matrix with entry `(i, j) = row[(j - i) mod n]`.
    pub fn circulant(row: &[T]) -> Result<Self> {
        check_circulant_row(row)?;
        let n = row.len();
        Self::from_fn(n, |i, j| row[(j + n - i) % n])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn trace(&self) -> T {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
    }

    pub fn frobenius(&self) -> T {
        self.data.iter().map(|&x| x * x).sum::<T>().sqrt()
    }

    /// Principal submatrix on `indices` (in the given order).
    pub fn principal_submatrix(&self, indices: &[usize]) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&k| k >= self.dim) {
            return Err(Error::DimensionMismatch(format!(
                "index {bad} out of range for a {0}x{0} matrix",
                self.dim
            )));
        }
        Self::from_fn(indices.len(), |i, j| self.get(indices[i], indices[j]))
    }

    /// `P M P` for the diagonal sign matrix `P = diag(signs)`.
    pub fn sign_conjugate(&self, signs: &[T]) -> Result<Self> {
        if signs.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "{} signs for a {}x{} matrix",
                signs.len(),
                self.dim,
                self.dim
            )));
        }
        Self::from_fn(self.dim, |i, j| signs[i] * self.get(i, j) * signs[j])
    }

    /// `S M S` with `S = self`, symmetrized.
    pub fn congruence(&self, inner: &SymMatrix<T>) -> Result<Self> {
        if inner.dim != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "congruence of {0}x{0} by {1}x{1}",
                inner.dim, self.dim
            )));
        }
        let tmp = self.product(inner);
        let n = self.dim;
        let mut out = vec![T::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = tmp[i * n + k];
                if a == T::zero() {
                    continue;
                }
                let srow = self.row(k);
                let orow = &mut out[i * n..(i + 1) * n];
                for (o, &s) in orow.iter_mut().zip(srow) {
                    *o = *o + a * s;
                }
            }
        }
        Self::from_row_major(n, &out)
    }

    /// General (not necessarily symmetric) product `self · other`, row-major.
    pub fn product(&self, other: &SymMatrix<T>) -> Vec<T> {
        assert_eq!(self.dim, other.dim, "product of mismatched matrices");
        let n = self.dim;
        let mut out = vec![T::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == T::zero() {
                    continue;
                }
                let orow = &mut out[i * n..(i + 1) * n];
                for (o, &b) in orow.iter_mut().zip(other.row(k)) {
                    *o = *o + a * b;
                }
            }
        }
        out
    }

    /// Checks that entry `(i, j)` depends only on `(j - i) mod n`.
    pub fn check_circulant(&self, tol: T) -> Result<()> {
        let n = self.dim;
        let scale = T::one().max(self.max_abs());
        for i in 1..n {
            for j in 0..n {
                if (self.get(i, j) - self.get(0, (j + n - i) % n)).abs() > tol * scale {
                    return Err(Error::NotCirculant { row: i, col: j });
                }
            }
        }
        Ok(())
    }
}

/// Spectral factorization `M = Q Λ Qᵀ` of a symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition<T> {
    eigenvalues: Vec<T>,
    /// Row-major `n x n`; column `k` is the eigenvector of `eigenvalues[k]`.
    eigenvectors: Vec<T>,
}

impl<T: Scalar> EigenDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    /// Row-major eigenvector matrix; columns are eigenvectors.
    pub fn eigenvectors(&self) -> &[T] {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, k: usize) -> Vec<T> {
        let n = self.dim();
        (0..n).map(|i| self.eigenvectors[i * n + k]).collect()
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues[0]
    }

    /// `max |QᵀQ - I|`.
    pub fn orthogonality_defect(&self) -> T {
        let n = self.dim();
        let q = &self.eigenvectors;
        let mut worst = T::zero();
        for a in 0..n {
            for b in a..n {
                let dot: T = (0..n).map(|i| q[i * n + a] * q[i * n + b]).sum();
                let target = if a == b { T::one() } else { T::zero() };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// `Q Λ Qᵀ`.
    pub fn reconstruct(&self) -> SymMatrix<T> {
        matrix_function(self, |x| x).expect("identity is finite on a finite spectrum")
    }
}

/// Cyclic Jacobi eigensolver.
///
/// Sweeps until the off-diagonal Frobenius norm drops to `1e-13·‖M‖_F`
/// (floored at a few ulps for `f32`), at most 100 sweeps. Eigenpairs are
/// returned sorted ascending with a stable tie rule.
pub fn eigh_symmetric<T: Scalar>(m: &SymMatrix<T>) -> Result<EigenDecomposition<T>> {
    let n = m.dim();
    let mut a = m.data.clone();
    // rows of `vt` are eigenvectors while iterating
    let mut vt = vec![T::zero(); n * n];
    for i in 0..n {
        vt[i * n + i] = T::one();
    }

    let target = T::tolerance(1e-13) * m.frobenius();
    let off_norm = |a: &[T]| -> T {
        let mut s = T::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                s = s + a[i * n + j] * a[i * n + j];
            }
        }
        (s + s).sqrt()
    };

    let mut residual = off_norm(&a);
    let mut sweeps = 0;
    while residual > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                dim: n,
                residual: residual.to_f64_lossy(),
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (apq + apq);
                let t = {
                    let t = T::one() / (theta.abs() + (theta * theta + T::one()).sqrt());
                    if theta < T::zero() {
                        -t
                    } else {
                        t
                    }
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                rotate(&mut a, n, p, q, c, s);
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = T::zero();
                a[q * n + p] = T::zero();
                for k in 0..n {
                    let vp = vt[p * n + k];
                    let vq = vt[q * n + k];
                    vt[p * n + k] = c * vp - s * vq;
                    vt[q * n + k] = s * vp + c * vq;
                }
            }
        }
        sweeps += 1;
        residual = off_norm(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[i * n + i]
            .partial_cmp(&a[j * n + j])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let eigenvalues = order.iter().map(|&k| a[k * n + k]).collect();
    let mut eigenvectors = vec![T::zero(); n * n];
    for (col, &k) in order.iter().enumerate() {
        for i in 0..n {
            eigenvectors[i * n + col] = vt[k * n + i];
        }
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Applies the plane rotation in `(p, q)` to all off-block entries of the
/// symmetric working matrix.
fn rotate<T: Scalar>(a: &mut [T], n: usize, p: usize, q: usize, c: T, s: T) {
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[p * n + k];
        let akq = a[q * n + k];
        let np = c * akp - s * akq;
        let nq = s * akp + c * akq;
        a[p * n + k] = np;
        a[k * n + p] = np;
        a[q * n + k] = nq;
        a[k * n + q] = nq;
    }
}

/// `Q diag(f(λ)) Qᵀ`, symmetrized.
///
/// Fails with [`Error::MatrixFunctionDomain`] naming the first eigenvalue
/// at which `f` is not finite.
pub fn matrix_function<T: Scalar>(
    e: &EigenDecomposition<T>,
    f: impl Fn(T) -> T,
) -> Result<SymMatrix<T>> {
    let values = e
        .eigenvalues
        .iter()
        .map(|&x| {
            let y = f(x);
            if y.is_finite() {
                Ok(y)
            } else {
                Err(Error::MatrixFunctionDomain {
                    eigenvalue: x.to_f64_lossy(),
                })
            }
        })
        .collect::<Result<Vec<T>>>()?;
    let n = e.dim();
    let q = &e.eigenvectors;
    SymMatrix::from_fn(n, |i, j| {
        let qi = &q[i * n..(i + 1) * n];
        let qj = &q[j * n..(j + 1) * n];
        qi.iter()
            .zip(qj)
            .zip(&values)
            .map(|((&a, &b), &v)| a * v * b)
            .sum()
    })
}

fn check_circulant_row<T: Scalar>(row: &[T]) -> Result<()> {
    let n = row.len();
    if n == 0 {
        return Err(Error::DimensionMismatch("circulant row must be nonempty".into()));
    }
    let scale = row.iter().fold(T::one(), |m, &x| m.max(x.abs()));
    let tol = T::tolerance(1e-12) * scale;
    for j in 1..n {
        let mirror = n - j;
        if (row[j] - row[mirror]).abs() > tol {
            return Err(Error::AsymmetricCirculant {
                index: j,
                mirror,
                value: row[j].to_f64_lossy(),
                mirror_value: row[mirror].to_f64_lossy(),
            });
        }
    }
    Ok(())
}

/// Eigenvalues `Λ_k = v₀ + Σ_l 2 v_l cos(2πkl/n)` of the symmetric
/// circulant matrix with first row `first_row`, for `k = 0..n`.
///
/// The middle entry of an even-length row is counted once.
pub fn circulant_eigenvalues<T: Scalar>(first_row: &[T]) -> Result<Vec<T>> {
    check_circulant_row(first_row)?;
    let n = first_row.len();
    let two = T::lit(2.0);
    let step = T::TAU() / T::lit(n as f64);
    let half = n / 2;
    Ok((0..n)
        .map(|k| {
            let mut sum = first_row[0];
            for l in 1..=half {
                let angle = step * T::lit(((k * l) % n) as f64);
                let weight = if 2 * l == n { T::one() } else { two };
                sum = sum + weight * first_row[l] * angle.cos();
            }
            sum
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn nn_ring_row(n: usize, alpha: f64) -> Vec<f64> {
        let mut row = vec![0.0; n];
        row[0] = 1.0 + 2.0 * alpha;
        row[1] -= alpha;
        row[n - 1] -= alpha;
        row
    }

    #[test]
    fn identity_spectrum() {
        let e = eigh_symmetric(&SymMatrix::<f64>::identity(3).unwrap()).unwrap();
        assert_eq!(e.eigenvalues(), &[1.0, 1.0, 1.0]);
        assert_eq!(e.reconstruct(), SymMatrix::identity(3).unwrap());
    }

    #[test]
    fn diagonal_spectrum_sorted() {
        let m = SymMatrix::from_diagonal(&[3.0, 1.0, 2.0]).unwrap();
        let e = eigh_symmetric(&m).unwrap();
        assert_eq!(e.eigenvalues(), &[1.0, 2.0, 3.0]);
        assert_eq!(e.eigenvector(0), vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn swap_matrix() {
        let m = SymMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let e = eigh_symmetric(&m).unwrap();
        assert_close(e.eigenvalues()[0], -1.0, 1e-15);
        assert_close(e.eigenvalues()[1], 1.0, 1e-15);
        assert!(e.orthogonality_defect() < 1e-15);
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(SymMatrix::<f64>::identity(0).is_err());
    }

    #[test]
    fn from_rows_symmetrizes() {
        let m = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![4.0, 1.0]]).unwrap();
        assert_eq!(m.get(0, 1), 3.0);
        assert_eq!(m.get(1, 0), 3.0);
    }

    #[test]
    fn deterministic_output() {
        let v = SymMatrix::circulant(&nn_ring_row(12, 3.0)).unwrap();
        assert_eq!(eigh_symmetric(&v).unwrap(), eigh_symmetric(&v).unwrap());
    }

    #[test]
    fn sqrt_trace_of_nn_ring() {
        // Λ = (1, 41, 81, 41) for n = 4, α = 20
        let v = SymMatrix::circulant(&nn_ring_row(4, 20.0)).unwrap();
        let e = eigh_symmetric(&v).unwrap();
        let root = matrix_function(&e, |x| x.sqrt()).unwrap();
        let oracle = 1.0 + 2.0 * 41f64.sqrt() + 9.0;
        assert_close(root.trace(), oracle, 1e-10);
        assert_close(root.trace(), 22.806, 1e-3);
    }

    #[test]
    fn matrix_function_identity_and_inverse_pair() {
        let v = SymMatrix::circulant(&nn_ring_row(7, 2.5)).unwrap();
        let e = eigh_symmetric(&v).unwrap();
        let same = matrix_function(&e, |x| x).unwrap();
        for (a, b) in same.as_slice().iter().zip(v.as_slice()) {
            assert_close(*a, *b, 1e-9);
        }
        let root = matrix_function(&e, |x| x.sqrt()).unwrap();
        let squared = matrix_function(&eigh_symmetric(&root).unwrap(), |x| x * x).unwrap();
        for (a, b) in squared.as_slice().iter().zip(v.as_slice()) {
            assert_close(*a, *b, 1e-8);
        }
    }

    #[test]
    fn matrix_function_domain_error() {
        let m = SymMatrix::from_diagonal(&[1.0, -2.0]).unwrap();
        let e = eigh_symmetric(&m).unwrap();
        match matrix_function(&e, |x: f64| x.sqrt()) {
            Err(Error::MatrixFunctionDomain { eigenvalue }) => assert_eq!(eigenvalue, -2.0),
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn circulant_nn_closed_values() {
        let alpha = 20.0;
        let lam = circulant_eigenvalues(&nn_ring_row(4, alpha)).unwrap();
        let expected = [1.0, 1.0 + 2.0 * alpha, 1.0 + 4.0 * alpha, 1.0 + 2.0 * alpha];
        for (a, b) in lam.iter().zip(expected) {
            assert_close(*a, b, 1e-12);
        }
    }

    #[test]
    fn circulant_uncoupled() {
        let mut row = vec![0.0; 9];
        row[0] = 1.0;
        assert!(circulant_eigenvalues(&row).unwrap().iter().all(|&x| x == 1.0));
    }

    #[test]
    fn circulant_degenerate_lengths() {
        assert_eq!(circulant_eigenvalues(&[2.0]).unwrap(), vec![2.0]);
        let l = circulant_eigenvalues(&[2.0, 0.5]).unwrap();
        assert_close(l[0], 2.5, 1e-15);
        assert_close(l[1], 1.5, 1e-15);
    }

    #[test]
    fn asymmetric_row_rejected() {
        let err = circulant_eigenvalues(&[1.0, 0.5, 0.0, 0.25]).unwrap_err();
        assert!(matches!(err, Error::AsymmetricCirculant { index: 1, mirror: 3, .. }));
    }

    #[test]
    fn circulant_check_detects_perturbation() {
        let v = SymMatrix::circulant(&nn_ring_row(6, 1.0)).unwrap();
        assert!(v.check_circulant(1e-12).is_ok());
        let mut raw = v.as_slice().to_vec();
        raw[6 + 2] += 0.1;
        raw[2 * 6 + 1] += 0.1;
        let w = SymMatrix::from_row_major(6, &raw).unwrap();
        assert!(w.check_circulant(1e-12).is_err());
    }

    #[test]
    fn single_precision_solver() {
        let v = SymMatrix::<f32>::circulant(&[41.0, -20.0, 0.0, -20.0]).unwrap();
        let e = eigh_symmetric(&v).unwrap();
        let want = [1.0f32, 41.0, 41.0, 81.0];
        for (a, b) in e.eigenvalues().iter().zip(want) {
            assert!((a - b).abs() < 1e-4 * b, "{a} vs {b}");
        }
    }

    fn symmetric_row(n: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-3.0f64..3.0, n / 2 + 1).prop_map(move |half| {
            let mut row = vec![0.0; n];
            for j in 0..n {
                row[j] = half[j.min(n - j)];
            }
            row
        })
    }

    fn random_sym() -> impl Strategy<Value = SymMatrix<f64>> {
        (1usize..24).prop_flat_map(|n| {
            prop::collection::vec(-5.0f64..5.0, n * n)
                .prop_map(move |raw| SymMatrix::from_row_major(n, &raw).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn eigh_trace_and_reconstruction(m in random_sym()) {
            let e = eigh_symmetric(&m).unwrap();
            let sum: f64 = e.eigenvalues().iter().sum();
            prop_assert!((sum - m.trace()).abs() <= 1e-9 * m.trace().abs().max(1.0));
            prop_assert!(e.orthogonality_defect() <= 1e-10);
            let scale = m.max_abs().max(1.0);
            let r = e.reconstruct();
            for (a, b) in r.as_slice().iter().zip(m.as_slice()) {
                prop_assert!((a - b).abs() <= 1e-9 * scale);
            }
            prop_assert!(e.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
        }

        #[test]
        fn sqrt_squared_reproduces(m in random_sym()) {
            // shift to a positive spectrum
            let n = m.dim();
            let shift = m.frobenius() + 1.0;
            let pd = SymMatrix::from_fn(n, |i, j| m.get(i, j) + if i == j { shift } else { 0.0 }).unwrap();
            let root = matrix_function(&eigh_symmetric(&pd).unwrap(), |x| x.sqrt()).unwrap();
            let sq = root.product(&root);
            let scale = pd.max_abs();
            for (a, b) in sq.iter().zip(pd.as_slice()) {
                prop_assert!((a - b).abs() <= 1e-8 * scale);
            }
        }

        #[test]
        fn circulant_matches_dense_solver(row in (2usize..=64).prop_flat_map(symmetric_row)) {
            let mut fast = circulant_eigenvalues(&row).unwrap();
            fast.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let dense = eigh_symmetric(&SymMatrix::circulant(&row).unwrap()).unwrap();
            for (a, b) in fast.iter().zip(dense.eigenvalues()) {
                prop_assert!((a - b).abs() <= 1e-9, "{} vs {}", a, b);
            }
        }
    }
}
