//! Coherence measures between channels.
//!
//! Everything here is normalized by the dimension `d`, so unitary channels
//! score 1 against themselves. Metrics that read the first Kraus operator
//! ([`coherent_fidelity`], [`self_visibility`], [`closest_unitary`]) depend on
//! the decomposition; the maxima and [`raginsky_fidelity`] depend only on the
//! channels.

use num_traits::{One, Zero};

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::numerics::{
    complete_orthonormal, polar_unitary, psd_sqrt, svd, vec_norm, ComplexMatrix,
};
use crate::scalar::{principal_arg, Real, C};

const DEGENERATE: f64 = 1e-12;

/// Magnitude and phase of `tr[U_0^dagger V_0] / d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceReport<T: Real> {
    pub fidelity: T,
    /// In `(-pi, pi]`; zero when `degenerate`.
    pub phase: T,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxSelfCoherence<T: Real> {
    pub v_max: T,
    /// Orthogonal decomposition with the heaviest operator first.
    pub realizing: KrausChannel<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosestUnitaryReport<T: Real> {
    /// The arm unitary maximizing `|tr[K_0^dagger U]|`.
    pub unitary: ComplexMatrix<T>,
    /// `tr sqrt(K_0^dagger K_0) / d`.
    pub visibility: T,
    /// `K_0` is rank deficient, so `unitary` is one of several maximizers.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxFidelityReport<T: Real> {
    pub max_fidelity: T,
    /// Mixing weights of the optimal first operator on the upper channel's
    /// orthogonal Kraus set.
    pub g0: Vec<C<T>>,
    /// Same for the lower channel.
    pub h0: Vec<C<T>>,
    /// `A_ij = tr[U_i^dagger V_j]` over the two orthogonal Kraus sets.
    pub overlap_matrix: ComplexMatrix<T>,
    /// Decompositions whose first operators attain the maximum.
    pub upper_realizing: KrausChannel<T>,
    pub lower_realizing: KrausChannel<T>,
    /// `|tr[U'_0^dagger V'_0]| / d` recomputed from the realizing pair.
    pub achieved: T,
    /// `sigma_max(A) < 1e-12`: `h0` is a placeholder basis vector.
    pub degenerate: bool,
}

fn same_dim<T: Real>(a: &KrausChannel<T>, b: &KrausChannel<T>) -> Result<T> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "channels on dimensions {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(T::lit(a.dim() as f64))
}

/// `|tr[U_0^dagger V_0]| / d` and its phase.
pub fn coherent_fidelity<T: Real>(
    upper: &KrausChannel<T>,
    lower: &KrausChannel<T>,
) -> Result<CoherenceReport<T>> {
    let d = same_dim(upper, lower)?;
    let z = upper.first().inner(lower.first());
    let fidelity = z.norm() / d;
    if fidelity < T::tol(DEGENERATE) {
        Ok(CoherenceReport {
            fidelity,
            phase: T::zero(),
            degenerate: true,
        })
    } else {
        Ok(CoherenceReport {
            fidelity,
            phase: principal_arg(z),
            degenerate: false,
        })
    }
}

/// Fringe visibility with the same decomposition in both arms.
pub fn self_visibility<T: Real>(ch: &KrausChannel<T>) -> T {
    ch.first().frobenius_norm().powi(2) / T::lit(ch.dim() as f64)
}

/// Largest self-visibility over all Kraus decompositions of `ch`: the top
/// Gram eigenvalue over `d`, attained by the orthogonal decomposition.
pub fn max_self_coherence<T: Real>(ch: &KrausChannel<T>) -> MaxSelfCoherence<T> {
    let (realizing, _) = ch.orthogonalize();
    MaxSelfCoherence {
        v_max: self_visibility(&realizing),
        realizing,
    }
}

/// Closest unitary to the first Kraus operator, from its polar factor.
pub fn closest_unitary<T: Real>(ch: &KrausChannel<T>) -> ClosestUnitaryReport<T> {
    let polar = polar_unitary(ch.first()).expect("Kraus operators are square and finite");
    let visibility = polar.stretch.trace().re / T::lit(ch.dim() as f64);
    ClosestUnitaryReport {
        unitary: polar.unitary,
        visibility,
        degenerate: polar.degenerate,
    }
}

/// Maximum of `|tr[U'_0^dagger V'_0]| / d` over all decompositions of both
/// channels, i.e. the operator norm of the overlap matrix over `d`.
pub fn max_coherent_fidelity<T: Real>(
    upper: &KrausChannel<T>,
    lower: &KrausChannel<T>,
) -> Result<MaxFidelityReport<T>> {
    let d = same_dim(upper, lower)?;
    let (ou, _) = upper.orthogonalize();
    let (ov, _) = lower.orthogonalize();
    let a = ComplexMatrix::from_fn(ou.len(), ov.len(), |i, j| ou.ops()[i].inner(&ov.ops()[j]));
    let s = svd(&a)?;
    let sigma = s.largest();
    let g0 = s.left.column(0);
    let degenerate = sigma < T::tol(DEGENERATE);
    let h0 = if degenerate {
        let mut e = vec![C::zero(); ov.len()];
        e[0] = C::one();
        e
    } else {
        let img = a.adjoint().apply_vec(&g0);
        let norm = vec_norm(&img);
        img.into_iter().map(|z| z / norm).collect()
    };

    let upper_realizing = ou.remix(&leading_row_unitary(&g0))?;
    let lower_realizing = ov.remix(&leading_row_unitary(&h0))?;
    let achieved = upper_realizing
        .first()
        .inner(lower_realizing.first())
        .norm()
        / d;

    Ok(MaxFidelityReport {
        max_fidelity: sigma / d,
        g0,
        h0,
        overlap_matrix: a,
        upper_realizing,
        lower_realizing,
        achieved,
        degenerate,
    })
}

/// Unitary whose first row is `w` (a unit vector), completed
/// deterministically.
fn leading_row_unitary<T: Real>(w: &[C<T>]) -> ComplexMatrix<T> {
    complete_orthonormal(&[w.to_vec()], w.len()).transpose()
}

/// Uhlmann fidelity `tr sqrt(sqrt(J_U) J_V sqrt(J_U))` of the Choi states,
/// unsquared.
pub fn raginsky_fidelity<T: Real>(upper: &KrausChannel<T>, lower: &KrausChannel<T>) -> Result<T> {
    same_dim(upper, lower)?;
    let ju = upper.to_choi();
    let jv = lower.to_choi();
    let root = psd_sqrt(ju.matrix())?;
    let inner = &(&root * jv.matrix()) * &root;
    // symmetrize roundoff before the second square root
    let inner = (&inner + &inner.adjoint()).scale_real(T::lit(0.5));
    Ok(psd_sqrt(&inner)?.trace().re)
}
