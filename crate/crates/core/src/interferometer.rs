//! Mach-Zehnder interferometer with a channel in each arm.
//!
//! The particle enters in path `|0>`, passes a Hadamard beamsplitter, picks
//! up `e^{i phi}` and channel U in the upper arm (path `|1>`) and channel V in
//! the lower arm (path `|0>`), and recombines on a second Hadamard. The
//! probability of leaving through port 0 is
//!
//! `P0(phi) = (1 + Re{e^{-i phi} z}) / 2 = (1 + v cos(phi - alpha)) / 2`
//!
//! with `z = v e^{i alpha} = tr[U_0^dagger V_0 rho]` built from the first Kraus
//! operators of the two channels.

use num_traits::Zero;

use crate::channels::{DensityMatrix, KrausChannel, StinespringDilation};
use crate::error::{Error, Result};
use crate::numerics::{psd_sqrt, ComplexMatrix};
use crate::scalar::{cis, principal_arg, Real, C};

/// Default number of phase samples per pattern.
pub const DEFAULT_SAMPLES: usize = 64;

const GRID_TOL: f64 = 1e-12;
const PROB_TOL: f64 = 1e-12;
const DEGENERATE_VISIBILITY: f64 = 1e-12;

/// `P0` sampled on the grid `phi_k = 2 pi k / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferencePattern<T: Real> {
    phases: Vec<T>,
    probabilities: Vec<T>,
}

impl<T: Real> InterferencePattern<T> {
    pub fn new(phases: Vec<T>, probabilities: Vec<T>) -> Result<Self> {
        if phases.len() != probabilities.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} phases but {} probabilities",
                phases.len(),
                probabilities.len()
            )));
        }
        if phases.len() < 3 {
            return Err(Error::TooFewSamples(phases.len()));
        }
        let deviation = grid_deviation(&phases);
        if deviation > T::tol(GRID_TOL) {
            return Err(Error::NonUniformGrid {
                deviation: deviation.to_f64_lossy(),
            });
        }
        let lo = -T::tol(PROB_TOL);
        let hi = T::one() + T::tol(PROB_TOL);
        if let Some(p) = probabilities.iter().find(|p| !(**p >= lo && **p <= hi)) {
            return Err(Error::InvalidState(format!(
                "probability {p} outside [0, 1]"
            )));
        }
        Ok(Self {
            phases,
            probabilities,
        })
    }

    /// Samples `f` on the uniform grid of `n` points.
    pub fn from_fn(n: usize, f: impl FnMut(T) -> T) -> Result<Self> {
        if n < 3 {
            return Err(Error::BadSampleCount(n));
        }
        let phases = uniform_grid::<T>(n);
        let probabilities = phases.iter().copied().map(f).collect();
        Self::new(phases, probabilities)
    }

    pub fn phases(&self) -> &[T] {
        &self.phases
    }

    pub fn probabilities(&self) -> &[T] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.phases
            .iter()
            .copied()
            .zip(self.probabilities.iter().copied())
    }
}

/// `phi_k = 2 pi k / n`.
pub fn uniform_grid<T: Real>(n: usize) -> Vec<T> {
    let step = T::TAU() / T::lit(n as f64);
    (0..n).map(|k| T::lit(k as f64) * step).collect()
}

fn grid_deviation<T: Real>(phases: &[T]) -> T {
    uniform_grid::<T>(phases.len())
        .iter()
        .zip(phases)
        .fold(T::zero(), |acc, (a, b)| acc.max((*a - *b).abs()))
}

/// Fringe parameters of `P0(phi) = (1 + v cos(phi - alpha)) / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VisibilityEstimate<T: Real> {
    pub v: T,
    /// In `(-pi, pi]`; zero when `degenerate`.
    pub alpha: T,
    /// `v < 1e-12`, so `alpha` carries no information.
    pub degenerate: bool,
}

impl<T: Real> VisibilityEstimate<T> {
    pub fn from_complex(z: C<T>) -> Self {
        let v = z.norm();
        if v < T::tol(DEGENERATE_VISIBILITY) {
            Self {
                v,
                alpha: T::zero(),
                degenerate: true,
            }
        } else {
            Self {
                v,
                alpha: principal_arg(z),
                degenerate: false,
            }
        }
    }
}

fn require_same_dim<T: Real>(
    a: &KrausChannel<T>,
    b: &KrausChannel<T>,
    rho: &DensityMatrix<T>,
) -> Result<usize> {
    if a.dim() != b.dim() || a.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "arm channels on dimensions {} and {} with a state of dimension {}",
            a.dim(),
            b.dim(),
            rho.dim()
        )));
    }
    Ok(a.dim())
}

/// `tr[U_0^dagger V_0 rho]` for the first Kraus operators of the two arms.
pub fn complex_visibility<T: Real>(
    upper: &KrausChannel<T>,
    lower: &KrausChannel<T>,
    rho: &DensityMatrix<T>,
) -> Result<C<T>> {
    require_same_dim(upper, lower, rho)?;
    let product = &(&upper.first().adjoint() * lower.first()) * rho.matrix();
    Ok(product.trace())
}

/// Closed-form pattern from [`complex_visibility`].
pub fn simulate_pattern<T: Real>(
    upper: &KrausChannel<T>,
    lower: &KrausChannel<T>,
    rho: &DensityMatrix<T>,
    n_samples: usize,
) -> Result<InterferencePattern<T>> {
    if n_samples < 3 {
        return Err(Error::BadSampleCount(n_samples));
    }
    let z = complex_visibility(upper, lower, rho)?;
    let half = T::lit(0.5);
    InterferencePattern::from_fn(n_samples, |phi: T| half * (T::one() + (cis(-phi) * z).re))
}

/// Brute-force pattern from evolving path, both ancillas and the system.
///
/// Each arm's isometry is completed to a unitary on `ancilla (x) system`
/// and applied controlled on the path qubit; the other arm's ancilla is a
/// spectator. The register order is `path (x) anc_U (x) anc_V (x) system`.
/// The input `|0><0| (x) |0><0| (x) |0><0| (x) rho` is carried as `X X^dagger`
/// with `X = |000> (x) sqrt(rho)`, which gives the exact output state.
pub fn simulate_pattern_dilated<T: Real>(
    upper: &StinespringDilation<T>,
    lower: &StinespringDilation<T>,
    rho: &DensityMatrix<T>,
    n_samples: usize,
) -> Result<InterferencePattern<T>> {
    if upper.dim() != lower.dim() || upper.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "dilations on dimensions {} and {} with a state of dimension {}",
            upper.dim(),
            lower.dim(),
            rho.dim()
        )));
    }
    if n_samples < 3 {
        return Err(Error::BadSampleCount(n_samples));
    }
    let d = rho.dim();
    let (ku, kv) = (upper.anc_dim(), lower.anc_dim());
    let branch = ku * kv * d;
    let idx = |au: usize, av: usize, s: usize| (au * kv + av) * d + s;

    let wu = upper.unitary_extension();
    let wv = lower.unitary_extension();
    // arm unitaries lifted to anc_U (x) anc_V (x) system
    let arm_u = ComplexMatrix::from_fn(branch, branch, |r, c| {
        let (au2, av2, s2) = (r / (kv * d), (r / d) % kv, r % d);
        let (au1, av1, s1) = (c / (kv * d), (c / d) % kv, c % d);
        if av1 == av2 {
            wu[(au2 * d + s2, au1 * d + s1)]
        } else {
            C::zero()
        }
    });
    let arm_v = ComplexMatrix::from_fn(branch, branch, |r, c| {
        let (au2, av2, s2) = (r / (kv * d), (r / d) % kv, r % d);
        let (au1, av1, s1) = (c / (kv * d), (c / d) % kv, c % d);
        if au1 == au2 {
            wv[(av2 * d + s2, av1 * d + s1)]
        } else {
            C::zero()
        }
    });

    let root = psd_sqrt(rho.matrix())?;
    let full = 2 * branch;
    let mut input = ComplexMatrix::zeros(full, d);
    for s in 0..d {
        for j in 0..d {
            input[(idx(0, 0, s), j)] = root[(s, j)];
        }
    }
    let hadamard = |x: &ComplexMatrix<T>| -> ComplexMatrix<T> {
        let h = T::FRAC_1_SQRT_2();
        let top = x.block(0, 0, branch, d);
        let bottom = x.block(branch, 0, branch, d);
        let mut out = ComplexMatrix::zeros(full, d);
        out.set_block(0, 0, &(&top + &bottom).scale_real(h));
        out.set_block(branch, 0, &(&top - &bottom).scale_real(h));
        out
    };

    let split = hadamard(&input);
    let lower_in = split.block(0, 0, branch, d);
    let upper_in = split.block(branch, 0, branch, d);
    let lower_out = &arm_v * &lower_in;
    let upper_out = &arm_u * &upper_in;

    InterferencePattern::from_fn(n_samples, |phi| {
        let mut state = ComplexMatrix::zeros(full, d);
        state.set_block(0, 0, &lower_out);
        state.set_block(branch, 0, &upper_out.scale(cis(phi)));
        let out = hadamard(&state);
        // P0 = tr[(|0><0| (x) I) X X^dagger] = ||top block of X||_F^2
        let p0 = out.block(0, 0, branch, d).frobenius_norm();
        p0 * p0
    })
}

/// Recovers `(v, alpha)` from the fundamental Fourier coefficient of
/// `2 P0 - 1`. Exact for noiseless single-cosine patterns.
pub fn extract_visibility<T: Real>(
    pattern: &InterferencePattern<T>,
) -> Result<VisibilityEstimate<T>> {
    let n = pattern.len();
    if n < 3 {
        return Err(Error::TooFewSamples(n));
    }
    let deviation = grid_deviation(pattern.phases());
    if deviation > T::tol(GRID_TOL) {
        return Err(Error::NonUniformGrid {
            deviation: deviation.to_f64_lossy(),
        });
    }
    let two = T::lit(2.0);
    let coeff = pattern.iter().fold(C::zero(), |acc, (phi, p)| {
        acc + cis(phi) * (two * p - T::one())
    }) * (two / T::lit(n as f64));
    let mut est = VisibilityEstimate::from_complex(coeff);
    est.v = est.v.min(T::one());
    Ok(est)
}

/// Squared Hilbert-Schmidt distance `2 (d - Re tr[U^dagger V])` between
/// unitaries.
pub fn unitary_distance<T: Real>(u: &ComplexMatrix<T>, v: &ComplexMatrix<T>) -> Result<T> {
    let d = u.require_square()?;
    if v.shape() != (d, d) {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            d,
            d,
            v.rows(),
            v.cols()
        )));
    }
    for m in [u, v] {
        m.check_finite()?;
        let residual = m.isometry_residual();
        if residual > T::tol(1e-9) {
            return Err(Error::NotUnitary {
                residual: residual.to_f64_lossy(),
            });
        }
    }
    let overlap = u.inner(v).re;
    Ok(T::lit(2.0) * (T::lit(d as f64) - overlap))
}
