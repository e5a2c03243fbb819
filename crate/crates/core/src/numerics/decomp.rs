use num_traits::Zero;

use super::eig::hermitian_eig;
use super::matrix::ComplexMatrix;
use super::svd::svd;
use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// Left polar factorization `a = stretch * unitary`.
#[derive(Debug, Clone)]
pub struct Polar<T: Real> {
    /// `sqrt(a a^dagger)`, positive semidefinite.
    pub stretch: ComplexMatrix<T>,
    pub unitary: ComplexMatrix<T>,
    /// Set when `a` has a singular value below 1e-12, so `unitary` is not unique.
    pub degenerate: bool,
}

/// Polar decomposition from the SVD `a = W S X^dagger`:
/// `stretch = W S W^dagger`, `unitary = W X^dagger`.
pub fn polar_unitary<T: Real>(a: &ComplexMatrix<T>) -> Result<Polar<T>> {
    let n = a.require_square()?;
    let s = svd(a)?;
    let w = &s.left;
    let stretch = ComplexMatrix::from_fn(n, n, |i, j| {
        (0..n).fold(C::zero(), |acc, k| {
            acc + w[(i, k)] * w[(j, k)].conj() * s.singulars[k]
        })
    });
    let unitary = w * &s.right.adjoint();
    let degenerate = s.singulars.iter().any(|&x| x < T::tol(1e-12));
    Ok(Polar {
        stretch,
        unitary,
        degenerate,
    })
}

/// Principal square root of a Hermitian positive semidefinite matrix.
///
/// Eigenvalues in `[-1e-10, 0)` are clamped to zero; anything more negative
/// is rejected. Eigenvalues at roundoff level relative to the spectrum are
/// also zeroed so that projectors map to themselves.
pub fn psd_sqrt<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let eig = hermitian_eig(a)?;
    let floor = -T::tol(1e-10);
    if let Some(&min) = eig.eigenvalues.last() {
        if min < floor {
            return Err(Error::NotPsd {
                min_eigenvalue: min.to_f64_lossy(),
            });
        }
    }
    let top = eig.eigenvalues.first().map_or(T::zero(), |x| x.abs());
    let noise = T::epsilon() * T::lit(64.0) * top;
    Ok(eig.reconstruct_with(|x| if x <= noise { T::zero() } else { x.sqrt() }))
}

/// Which tensor factor [`partial_trace`] removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Traces out one factor of a matrix on `C^d (x) C^k`, `dims = (d, k)`.
pub fn partial_trace<T: Real>(
    a: &ComplexMatrix<T>,
    traced: Subsystem,
    dims: (usize, usize),
) -> Result<ComplexMatrix<T>> {
    let (d, k) = dims;
    if d == 0 || k == 0 || a.shape() != (d * k, d * k) {
        return Err(Error::DimensionMismatch(format!(
            "partial trace over dims ({d}, {k}) of a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    Ok(match traced {
        Subsystem::Second => ComplexMatrix::from_fn(d, d, |i, j| {
            (0..k).fold(C::zero(), |acc, m| acc + a[(i * k + m, j * k + m)])
        }),
        Subsystem::First => ComplexMatrix::from_fn(k, k, |i, j| {
            (0..d).fold(C::zero(), |acc, m| acc + a[(m * k + i, m * k + j)])
        }),
    })
}
