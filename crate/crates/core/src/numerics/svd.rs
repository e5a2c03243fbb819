//! Singular value decomposition by one-sided (Hestenes) Jacobi.

use num_traits::Zero;

use super::eig::fix_phase;
use super::matrix::{complete_orthonormal, vec_inner, vec_norm, ComplexMatrix};
use crate::error::Result;
use crate::scalar::{cis, Real, C};

const MAX_SWEEPS: usize = 100;

/// Thin SVD `a = left * diag(singulars) * right^dagger`.
///
/// For an `m x n` input, `left` is `m x r`, `right` is `n x r` with
/// `r = min(m, n)`; singular values are descending.
#[derive(Debug, Clone)]
pub struct SvdResult<T: Real> {
    pub left: ComplexMatrix<T>,
    pub singulars: Vec<T>,
    pub right: ComplexMatrix<T>,
}

impl<T: Real> SvdResult<T> {
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let s: Vec<C<T>> = self
            .singulars
            .iter()
            .map(|&x| C::new(x, T::zero()))
            .collect();
        let scaled =
            ComplexMatrix::from_fn(self.left.rows(), s.len(), |i, j| self.left[(i, j)] * s[j]);
        &scaled * &self.right.adjoint()
    }

    pub fn largest(&self) -> T {
        self.singulars[0]
    }
}

pub fn svd<T: Real>(a: &ComplexMatrix<T>) -> Result<SvdResult<T>> {
    a.check_finite()?;
    if a.rows() >= a.cols() {
        Ok(svd_tall(a))
    } else {
        let t = svd_tall(&a.adjoint());
        Ok(SvdResult {
            left: t.right,
            singulars: t.singulars,
            right: t.left,
        })
    }
}

fn svd_tall<T: Real>(a: &ComplexMatrix<T>) -> SvdResult<T> {
    let (m, n) = a.shape();
    let mut cols: Vec<Vec<C<T>>> = (0..n).map(|j| a.column(j)).collect();
    let mut right: Vec<Vec<C<T>>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    if i == j {
                        C::new(T::one(), T::zero())
                    } else {
                        C::zero()
                    }
                })
                .collect()
        })
        .collect();
    let eps = T::epsilon();
    let floor = eps * eps * a.tolerance_scale();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = vec_inner(&cols[p], &cols[p]).re;
                let beta = vec_inner(&cols[q], &cols[q]).re;
                let gamma = vec_inner(&cols[p], &cols[q]);
                let mag = gamma.norm();
                if mag <= floor || mag <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;

                // make the overlap real by rephasing column q
                let phase = cis(-gamma.im.atan2(gamma.re));
                for z in cols[q].iter_mut() {
                    *z *= phase;
                }
                for z in right[q].iter_mut() {
                    *z *= phase;
                }

                let zeta = (beta - alpha) / (mag + mag);
                let t = if zeta >= T::zero() {
                    T::one() / (zeta + (T::one() + zeta * zeta).sqrt())
                } else {
                    -T::one() / (-zeta + (T::one() + zeta * zeta).sqrt())
                };
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = cs * t;
                rotate_pair(&mut cols, p, q, cs, sn);
                rotate_pair(&mut right, p, q, cs, sn);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<T> = cols.iter().map(|c| vec_norm(c)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        norms[j]
            .partial_cmp(&norms[i])
            .expect("finite norms")
            .then(i.cmp(&j))
    });

    let cutoff = eps * T::lit(16.0) * norms.iter().fold(T::zero(), |acc, &x| acc.max(x));
    let mut singulars = Vec::with_capacity(n);
    let mut lefts: Vec<Vec<C<T>>> = Vec::with_capacity(n);
    let mut rights = ComplexMatrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        let s = norms[i];
        let mut r = right[i].clone();
        if s > cutoff && !s.is_zero() {
            let mut u: Vec<C<T>> = cols[i].iter().map(|z| *z / s).collect();
            // canonical phase: fix on the left vector, mirror on the right
            let before = u.clone();
            fix_phase(&mut u);
            let rot = rotation_between(&before, &u);
            for z in r.iter_mut() {
                *z *= rot;
            }
            lefts.push(u);
            singulars.push(s);
        } else {
            singulars.push(T::zero());
        }
        rights.set_column(k, &r);
    }

    // rank-deficient: complete the left basis deterministically
    let rank = lefts.len();
    let left_full = complete_orthonormal(&lefts, m);
    let left = left_full.block(0, 0, m, n);
    debug_assert!(rank <= n);

    SvdResult {
        left,
        singulars,
        right: rights,
    }
}

fn rotate_pair<T: Real>(vs: &mut [Vec<C<T>>], p: usize, q: usize, cs: T, sn: T) {
    let (lo, hi) = vs.split_at_mut(q);
    let vp = &mut lo[p];
    let vq = &mut hi[0];
    for (a, b) in vp.iter_mut().zip(vq.iter_mut()) {
        let x = *a;
        let y = *b;
        *a = x * cs - y * sn;
        *b = x * sn + y * cs;
    }
}

/// Unit phase `w` with `after = w * before`, read off the largest entry.
fn rotation_between<T: Real>(before: &[C<T>], after: &[C<T>]) -> C<T> {
    let (idx, _) = before
        .iter()
        .enumerate()
        .fold((0, T::zero()), |(bi, bm), (i, z)| {
            if z.norm() > bm {
                (i, z.norm())
            } else {
                (bi, bm)
            }
        });
    let w = after[idx] / before[idx];
    w / w.norm()
}
