//! Seeded generators for test corpora. Output depends only on the arguments.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::numerics::ComplexMatrix;
use crate::scalar::{Real, C};

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Matrix with i.i.d. standard complex Gaussian entries (real and imaginary
/// parts each N(0, 1/2)).
pub fn gaussian_matrix<T: Real>(
    rows: usize,
    cols: usize,
    rng: &mut ChaCha20Rng,
) -> ComplexMatrix<T> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C::new(T::lit(re * h), T::lit(im * h))
    })
}

/// Orthonormalizes the columns of `a` (tall, full column rank) by modified
/// Gram-Schmidt, fixing each column so the Gram-Schmidt diagonal is positive.
pub fn orthonormal_columns<T: Real>(a: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let (m, n) = a.shape();
    assert!(m >= n, "need a tall matrix to orthonormalize columns");
    let mut cols: Vec<Vec<C<T>>> = (0..n).map(|j| a.column(j)).collect();
    for j in 0..n {
        for _ in 0..2 {
            for i in 0..j {
                let p = crate::numerics::vec_inner(&cols[i], &cols[j]);
                let (done, rest) = cols.split_at_mut(j);
                for (x, y) in rest[0].iter_mut().zip(&done[i]) {
                    *x -= p * y;
                }
            }
        }
        let norm = crate::numerics::vec_norm(&cols[j]);
        assert!(norm > T::tol(1e-12), "columns are numerically dependent");
        for x in cols[j].iter_mut() {
            *x /= norm;
        }
    }
    let mut out = ComplexMatrix::zeros(m, n);
    for (j, c) in cols.iter().enumerate() {
        out.set_column(j, c);
    }
    out
}

/// Haar-distributed `n x n` unitary (QR of a Ginibre matrix with positive
/// R diagonal).
pub fn haar_unitary<T: Real>(n: usize, rng: &mut ChaCha20Rng) -> ComplexMatrix<T> {
    orthonormal_columns(&gaussian_matrix(n, n, rng))
}

/// Random `m x n` isometry (`m >= n`).
pub fn random_isometry<T: Real>(m: usize, n: usize, rng: &mut ChaCha20Rng) -> ComplexMatrix<T> {
    orthonormal_columns(&gaussian_matrix(m, n, rng))
}

/// Random density matrix `G G^dagger / tr` from a square Ginibre matrix.
pub fn random_density<T: Real>(d: usize, rng: &mut ChaCha20Rng) -> ComplexMatrix<T> {
    let g = gaussian_matrix::<T>(d, d, rng);
    let p = &g * &g.adjoint();
    let tr = p.trace().re;
    p.scale_real(T::one() / tr)
}
