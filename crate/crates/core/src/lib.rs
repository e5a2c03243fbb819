//! Interference of quantum channels.
//!
//! Places CPTP maps in the two arms of a Mach-Zehnder interferometer and
//! reads off what the fringe reveals about them: visibility and fringe shift,
//! the coherent fidelity between Kraus decompositions, the largest
//! self-coherence a channel can show, the unitary it is closest to, and the
//! maximum coherent fidelity between two channels.
//!
//! The library is generic over the real scalar ([`Real`], implemented for
//! `f32` and `f64`). The aliases at the crate root fix it to `f64`, which is
//! what all tolerances are tuned for.
//!
//! ```
//! use chanint::{coherence, DensityMatrix, KrausChannel, interferometer};
//!
//! let id = KrausChannel::identity(2);
//! let pattern = interferometer::simulate_pattern(&id, &id, &DensityMatrix::maximally_mixed(2), 64).unwrap();
//! let fringe = interferometer::extract_visibility(&pattern).unwrap();
//! assert!((fringe.v - 1.0).abs() < 1e-12);
//! assert!((coherence::self_visibility(&id) - 1.0).abs() < 1e-15);
//! ```

pub mod channels;
pub mod coherence;
pub mod error;
pub mod interferometer;
pub mod numerics;
pub mod random;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Real, C};

/// Complex number in double precision.
pub type Complex = scalar::C<f64>;
pub type ComplexMatrix = numerics::ComplexMatrix<f64>;
pub type HermitianEig = numerics::HermitianEig<f64>;
pub type SvdResult = numerics::SvdResult<f64>;
pub type Polar = numerics::Polar<f64>;
pub type KrausChannel = channels::KrausChannel<f64>;
pub type ChoiState = channels::ChoiState<f64>;
pub type StinespringDilation = channels::StinespringDilation<f64>;
pub type DensityMatrix = channels::DensityMatrix<f64>;
pub type InterferencePattern = interferometer::InterferencePattern<f64>;
pub type VisibilityEstimate = interferometer::VisibilityEstimate<f64>;
pub type CoherenceReport = coherence::CoherenceReport<f64>;
pub type MaxSelfCoherence = coherence::MaxSelfCoherence<f64>;
pub type ClosestUnitaryReport = coherence::ClosestUnitaryReport<f64>;
pub type MaxFidelityReport = coherence::MaxFidelityReport<f64>;
