//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.

use num_traits::Zero;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{cis, Real, C};

const MAX_SWEEPS: usize = 100;

/// Spectrum of a Hermitian matrix, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct HermitianEig<T: Real> {
    pub eigenvalues: Vec<T>,
    /// Columns are unit eigenvectors in the order of `eigenvalues`.
    pub eigenvectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEig<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, k: usize) -> Vec<C<T>> {
        self.eigenvectors.column(k)
    }

    /// `V diag(f(lambda)) V^dagger`.
    pub fn reconstruct_with(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let n = self.dim();
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).fold(C::zero(), |acc, k| {
                acc + v[(i, k)] * v[(j, k)].conj() * f(self.eigenvalues[k])
            })
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.reconstruct_with(|x| x)
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted descending. Each eigenvector's largest-magnitude
/// entry is made real and nonnegative (lowest row index wins ties).
pub fn hermitian_eig<T: Real>(a: &ComplexMatrix<T>) -> Result<HermitianEig<T>> {
    let n = a.require_square()?;
    a.check_finite()?;
    let scale = a.tolerance_scale();
    let asym = a.hermitian_residual();
    if asym > T::tol(1e-9) * scale {
        return Err(Error::NotHermitian {
            asymmetry: asym.to_f64_lossy(),
        });
    }

    // symmetrize so the rotations see an exactly Hermitian matrix
    let mut m = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C::new(a[(i, i)].re, T::zero())
        } else {
            (a[(i, j)] + a[(j, i)].conj()) * T::lit(0.5)
        }
    });
    let mut v = ComplexMatrix::identity(n);
    let eps = T::epsilon();

    let floor = eps * T::lit(1e-2) * scale;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mag = m[(p, q)].norm();
                let diag_scale = (m[(p, p)].re * m[(q, q)].re).abs().sqrt();
                if mag <= floor || mag <= eps * diag_scale {
                    m[(p, q)] = C::zero();
                    m[(q, p)] = C::zero();
                    continue;
                }
                rotate(&mut m, &mut v, p, q);
                rotated = true;
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| {
        diag[j]
            .partial_cmp(&diag[i])
            .expect("finite eigenvalues")
            .then(i.cmp(&j))
    });

    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        let mut col = v.column(i);
        fix_phase(&mut col);
        eigenvectors.set_column(k, &col);
    }
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

/// Annihilates `m[p][q]` with `G = D J`, where `D` makes the pivot real and
/// `J` is the real Jacobi rotation. Updates `m <- G^dagger m G`, `v <- v G`.
fn rotate<T: Real>(m: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let n = m.rows();
    let apq = m[(p, q)];
    let mag = apq.norm();
    let phase = cis(-apq.im.atan2(apq.re));
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;

    let theta = (aqq - app) / (mag + mag);
    let t = if theta >= T::zero() {
        T::one() / (theta + (T::one() + theta * theta).sqrt())
    } else {
        -T::one() / (-theta + (T::one() + theta * theta).sqrt())
    };
    let cs = T::one() / (T::one() + t * t).sqrt();
    let sn = t * cs;

    // G = [[c, s], [-s e, c e]] with e = phase
    let g_pp = C::new(cs, T::zero());
    let g_pq = C::new(sn, T::zero());
    let g_qp = phase * (-sn);
    let g_qq = phase * cs;

    // columns: m <- m G
    for i in 0..n {
        let mp = m[(i, p)];
        let mq = m[(i, q)];
        m[(i, p)] = mp * g_pp + mq * g_qp;
        m[(i, q)] = mp * g_pq + mq * g_qq;
        let vp = v[(i, p)];
        let vq = v[(i, q)];
        v[(i, p)] = vp * g_pp + vq * g_qp;
        v[(i, q)] = vp * g_pq + vq * g_qq;
    }
    // rows: m <- G^dagger m
    for j in 0..n {
        let mp = m[(p, j)];
        let mq = m[(q, j)];
        m[(p, j)] = g_pp.conj() * mp + g_qp.conj() * mq;
        m[(q, j)] = g_pq.conj() * mp + g_qq.conj() * mq;
    }
    m[(p, q)] = C::zero();
    m[(q, p)] = C::zero();
    m[(p, p)].im = T::zero();
    m[(q, q)].im = T::zero();
}

/// Rotates a vector so its largest-magnitude entry is real and nonnegative.
pub(crate) fn fix_phase<T: Real>(col: &mut [C<T>]) {
    let max = col.iter().fold(T::zero(), |acc, z| acc.max(z.norm()));
    if max.is_zero() {
        return;
    }
    let cutoff = max * (T::one() - T::tol(1e-10));
    let pivot = col
        .iter()
        .position(|z| z.norm() >= cutoff)
        .expect("some entry attains the maximum");
    let z = col[pivot];
    let rot = z.conj() / z.norm();
    for x in col.iter_mut() {
        *x *= rot;
    }
    col[pivot] = C::new(col[pivot].norm(), T::zero());
}
