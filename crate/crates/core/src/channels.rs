//! Channel representations: Kraus sets, Choi states and Stinespring
//! isometries, plus the unitary freedom relating equivalent Kraus sets.
//!
//! Kraus order matters throughout the crate. Operator 0 is the one that
//! interferes in a Mach-Zehnder arm, so it is never reordered unless a caller
//! asks for a canonical form via [`ChoiState::to_kraus`] or
//! [`KrausChannel::orthogonalize`].

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numerics::{
    complete_orthonormal, hermitian_eig, partial_trace, ComplexMatrix, Subsystem,
};
use crate::random::{gaussian_matrix, orthonormal_columns, rng};
use crate::scalar::{Real, C};

const COMPLETENESS_TOL: f64 = 1e-9;
const ISOMETRY_TOL: f64 = 1e-9;
const STATE_TOL: f64 = 1e-10;
const RANK_CUTOFF: f64 = 1e-12;

/// Trace-preserving channel given by an ordered Kraus set on `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel<T: Real> {
    dim: usize,
    ops: Vec<ComplexMatrix<T>>,
}

impl<T: Real> KrausChannel<T> {
    /// Checks shapes, the `d^2` operator bound, and `sum_i K_i^dagger K_i = I`.
    pub fn validate(ops: Vec<ComplexMatrix<T>>, dim: usize) -> Result<Self> {
        if dim == 0 || ops.is_empty() {
            return Err(Error::DimensionMismatch(
                "a channel needs a positive dimension and at least one operator".into(),
            ));
        }
        for (i, op) in ops.iter().enumerate() {
            if op.shape() != (dim, dim) {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator {i} is {}x{}, expected {dim}x{dim}",
                    op.rows(),
                    op.cols()
                )));
            }
            op.check_finite()?;
        }
        if ops.len() > dim * dim {
            return Err(Error::TooManyOperators {
                count: ops.len(),
                max: dim * dim,
            });
        }
        let ch = Self { dim, ops };
        let residual = ch.completeness_residual();
        if residual > T::tol(COMPLETENESS_TOL) {
            return Err(Error::NotTracePreserving {
                residual: residual.to_f64_lossy(),
            });
        }
        Ok(ch)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            ops: vec![ComplexMatrix::identity(dim)],
        }
    }

    /// Single-operator channel `rho -> U rho U^dagger`.
    pub fn unitary(u: ComplexMatrix<T>) -> Result<Self> {
        let dim = u.require_square()?;
        Self::validate(vec![u], dim)
    }

    /// The unitary channel written as `{0, U}`: it acts as `U` on the system
    /// but always flips the environment, so its first operator vanishes.
    pub fn flagged_unitary(u: ComplexMatrix<T>) -> Result<Self> {
        let dim = u.require_square()?;
        Self::validate(vec![ComplexMatrix::zeros(dim, dim), u], dim)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn ops(&self) -> &[ComplexMatrix<T>] {
        &self.ops
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// The distinguished first Kraus operator.
    #[inline]
    pub fn first(&self) -> &ComplexMatrix<T> {
        &self.ops[0]
    }

    pub fn into_ops(self) -> Vec<ComplexMatrix<T>> {
        self.ops
    }

    /// `|| sum_i K_i^dagger K_i - I ||_F`.
    pub fn completeness_residual(&self) -> T {
        let mut sum = ComplexMatrix::zeros(self.dim, self.dim);
        for op in &self.ops {
            sum = &sum + &(&op.adjoint() * op);
        }
        (&sum - &ComplexMatrix::identity(self.dim)).frobenius_norm()
    }

    /// Gram matrix `G_ij = tr[K_i^dagger K_j]`.
    pub fn gram(&self) -> ComplexMatrix<T> {
        let n = self.ops.len();
        ComplexMatrix::from_fn(n, n, |i, j| self.ops[i].inner(&self.ops[j]))
    }

    /// Normalized Choi state `(1/d) sum_ij |i><j| (x) L(|i><j|)`.
    pub fn to_choi(&self) -> ChoiState<T> {
        let d = self.dim;
        let inv_d = T::one() / T::lit(d as f64);
        let mut m = ComplexMatrix::zeros(d * d, d * d);
        for op in &self.ops {
            let v = vectorize(op);
            for r in 0..d * d {
                if v[r].is_zero() {
                    continue;
                }
                for c in 0..d * d {
                    m[(r, c)] += v[r] * v[c].conj() * inv_d;
                }
            }
        }
        ChoiState { dim: d, matrix: m }
    }

    /// `sum_i K_i rho K_i^dagger`.
    pub fn apply(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "state of dimension {} through a channel on dimension {}",
                rho.dim(),
                self.dim
            )));
        }
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for op in &self.ops {
            out = &out + &(&(op * rho.matrix()) * &op.adjoint());
        }
        Ok(DensityMatrix { matrix: out })
    }

    /// Equivalent Kraus set `K'_i = sum_k u_ik K_k` for an `m x n`
    /// isometry `u` with `n = len()`.
    pub fn remix(&self, u: &ComplexMatrix<T>) -> Result<Self> {
        let n = self.ops.len();
        if u.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "mixing matrix has {} columns for {n} Kraus operators",
                u.cols()
            )));
        }
        u.check_finite()?;
        let residual = u.isometry_residual();
        if residual > T::tol(ISOMETRY_TOL) {
            return Err(Error::NotIsometry {
                residual: residual.to_f64_lossy(),
            });
        }
        if u.rows() > self.dim * self.dim {
            return Err(Error::TooManyOperators {
                count: u.rows(),
                max: self.dim * self.dim,
            });
        }
        Ok(Self {
            dim: self.dim,
            ops: self.mix_rows(u),
        })
    }

    fn mix_rows(&self, u: &ComplexMatrix<T>) -> Vec<ComplexMatrix<T>> {
        let d = self.dim;
        (0..u.rows())
            .map(|i| {
                let mut acc = ComplexMatrix::zeros(d, d);
                for (k, op) in self.ops.iter().enumerate() {
                    let w = u[(i, k)];
                    if !w.is_zero() {
                        acc = &acc + &op.scale(w);
                    }
                }
                acc
            })
            .collect()
    }

    /// Rewrites the Kraus set so the operators are mutually orthogonal in
    /// the Hilbert-Schmidt sense, ordered by descending `tr[K^dagger K]`.
    ///
    /// Returns the new channel and the unitary `mixing` with
    /// `self.remix(&mixing) == result`.
    pub fn orthogonalize(&self) -> (Self, ComplexMatrix<T>) {
        let eig = hermitian_eig(&self.gram()).expect("a Gram matrix is Hermitian and finite");
        // W^dagger G W is diagonal, so the new operators use the columns of W
        let mixing = eig.eigenvectors.transpose();
        let ops = self.mix_rows(&mixing);
        (Self { dim: self.dim, ops }, mixing)
    }

    /// Stinespring isometry `V = sum_i |i>_anc (x) K_i`, ancilla first.
    pub fn dilate(&self) -> StinespringDilation<T> {
        let d = self.dim;
        let k = self.ops.len();
        let mut iso = ComplexMatrix::zeros(d * k, d);
        for (i, op) in self.ops.iter().enumerate() {
            iso.set_block(i * d, 0, op);
        }
        StinespringDilation {
            dim: d,
            anc_dim: k,
            isometry: iso,
        }
    }

    /// Deterministic random channel: orthonormalize the columns of a seeded
    /// `(d k) x d` complex Gaussian matrix and cut it into `k` blocks.
    pub fn random(dim: usize, n_kraus: usize, seed: u64) -> Result<Self> {
        if dim == 0 || n_kraus == 0 || n_kraus > dim * dim {
            return Err(Error::BadArity(format!(
                "{n_kraus} Kraus operators on dimension {dim} (need 1..={})",
                dim * dim
            )));
        }
        let mut r = rng(seed);
        let iso = orthonormal_columns(&gaussian_matrix::<T>(dim * n_kraus, dim, &mut r));
        let ops = (0..n_kraus)
            .map(|i| iso.block(i * dim, 0, dim, dim))
            .collect();
        Self::validate(ops, dim)
    }
}

/// Column-stacking `vec`: entry `i*d + a` holds `K[a][i]`.
fn vectorize<T: Real>(op: &ComplexMatrix<T>) -> Vec<C<T>> {
    let d = op.rows();
    (0..d * d).map(|idx| op[(idx % d, idx / d)]).collect()
}

fn unvectorize<T: Real>(v: &[C<T>], d: usize) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(d, d, |a, i| v[i * d + a])
}

/// Normalized Choi state of a channel on `C^d`, a `d^2 x d^2` density
/// matrix whose first (input) factor reduces to `I/d`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiState<T: Real> {
    dim: usize,
    matrix: ComplexMatrix<T>,
}

impl<T: Real> ChoiState<T> {
    pub fn new(matrix: ComplexMatrix<T>, dim: usize) -> Result<Self> {
        if matrix.shape() != (dim * dim, dim * dim) {
            return Err(Error::DimensionMismatch(format!(
                "Choi matrix {}x{} for dimension {dim}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let eig = hermitian_eig(&matrix)?;
        let min = *eig.eigenvalues.last().expect("nonempty spectrum");
        if min < -T::tol(STATE_TOL) {
            return Err(Error::NotPsd {
                min_eigenvalue: min.to_f64_lossy(),
            });
        }
        let reduced = partial_trace(&matrix, Subsystem::Second, (dim, dim))?;
        let target = ComplexMatrix::identity(dim).scale_real(T::one() / T::lit(dim as f64));
        let residual = (&reduced - &target).frobenius_norm();
        if residual > T::tol(COMPLETENESS_TOL) {
            return Err(Error::NotTracePreservingImage {
                residual: residual.to_f64_lossy(),
            });
        }
        Ok(Self { dim, matrix })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    /// Canonical Kraus set from the spectral decomposition: one operator
    /// `sqrt(d mu) unvec(v)` per eigenpair with `mu >= 1e-12`, descending.
    /// The result is orthogonal with `tr[K_i^dagger K_i] = d mu_i`.
    pub fn to_kraus(&self) -> Result<KrausChannel<T>> {
        let d = self.dim;
        let eig = hermitian_eig(&self.matrix)?;
        let ops: Vec<_> = eig
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &mu)| mu >= T::tol(RANK_CUTOFF))
            .map(|(k, &mu)| {
                let w = (T::lit(d as f64) * mu).sqrt();
                unvectorize(&eig.vector(k), d).scale_real(w)
            })
            .collect();
        KrausChannel::validate(ops, d)
    }

    /// `L(rho) = d tr_in[(rho^T (x) I) J]`.
    pub fn contract(&self, rho: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        let d = self.dim;
        if rho.shape() != (d, d) {
            return Err(Error::DimensionMismatch(
                "state/Choi dimension mismatch".into(),
            ));
        }
        let lifted = &rho.transpose().kron(&ComplexMatrix::identity(d)) * &self.matrix;
        Ok(partial_trace(&lifted, Subsystem::First, (d, d))?.scale_real(T::lit(d as f64)))
    }
}

/// Isometric dilation `V: C^d -> C^k (x) C^d` (ancilla index first) whose
/// `i`-th block row is Kraus operator `i`. The ancilla starts in `|0>`.
#[derive(Debug, Clone, PartialEq)]
pub struct StinespringDilation<T: Real> {
    dim: usize,
    anc_dim: usize,
    isometry: ComplexMatrix<T>,
}

impl<T: Real> StinespringDilation<T> {
    pub fn new(isometry: ComplexMatrix<T>, dim: usize, anc_dim: usize) -> Result<Self> {
        if isometry.shape() != (dim * anc_dim, dim) {
            return Err(Error::DimensionMismatch(format!(
                "isometry {}x{} for dim {dim}, ancilla {anc_dim}",
                isometry.rows(),
                isometry.cols()
            )));
        }
        let residual = isometry.isometry_residual();
        if residual > T::tol(ISOMETRY_TOL) {
            return Err(Error::NotIsometry {
                residual: residual.to_f64_lossy(),
            });
        }
        Ok(Self {
            dim,
            anc_dim,
            isometry,
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn anc_dim(&self) -> usize {
        self.anc_dim
    }

    #[inline]
    pub fn isometry(&self) -> &ComplexMatrix<T> {
        &self.isometry
    }

    /// `(<i|_anc (x) I) V`.
    pub fn kraus(&self, i: usize) -> ComplexMatrix<T> {
        self.isometry.block(i * self.dim, 0, self.dim, self.dim)
    }

    pub fn to_channel(&self) -> Result<KrausChannel<T>> {
        let ops = (0..self.anc_dim).map(|i| self.kraus(i)).collect();
        KrausChannel::validate(ops, self.dim)
    }

    /// A unitary on `C^k (x) C^d` agreeing with `V` on `|0>_anc (x) C^d`
    /// (its first `d` columns); the rest is a deterministic completion.
    pub fn unitary_extension(&self) -> ComplexMatrix<T> {
        let cols: Vec<_> = (0..self.dim).map(|j| self.isometry.column(j)).collect();
        complete_orthonormal(&cols, self.dim * self.anc_dim)
    }
}

/// Density operator on `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    matrix: ComplexMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        matrix.require_square()?;
        matrix.check_finite()?;
        let herm = matrix.hermitian_residual();
        if herm > T::tol(STATE_TOL) {
            return Err(Error::NotHermitian {
                asymmetry: herm.to_f64_lossy(),
            });
        }
        let tr = matrix.trace();
        if (tr - C::one()).norm() > T::tol(STATE_TOL) {
            return Err(Error::InvalidState(format!("trace {} + {}i", tr.re, tr.im)));
        }
        let eig = hermitian_eig(&matrix)?;
        let min = *eig.eigenvalues.last().expect("nonempty spectrum");
        if min < -T::tol(STATE_TOL) {
            return Err(Error::NotPsd {
                min_eigenvalue: min.to_f64_lossy(),
            });
        }
        Ok(Self { matrix })
    }

    /// `I/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(T::one() / T::lit(dim as f64)),
        }
    }

    /// `|psi><psi|` for a state vector normalized to within `1e-9`.
    pub fn pure(psi: &[C<T>]) -> Result<Self> {
        let norm = crate::numerics::vec_norm(psi);
        if psi.is_empty() || (norm - T::one()).abs() > T::tol(1e-9) {
            return Err(Error::InvalidState(format!("state vector norm {norm}")));
        }
        let col = ComplexMatrix::column_vector(psi);
        Ok(Self {
            matrix: &col * &col.adjoint(),
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }
}
