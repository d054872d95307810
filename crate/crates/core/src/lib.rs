//! Capacity bounds for the two-user binary additive multiple-access channel
//! with feedback.
//!
//! Two channels are modeled: the noisy MAC `Y = X₁ + X₂ + N` with `N`
//! uniform on `{0, 1}`, and the noiseless erasure MAC `Y = X₁ + X₂`. All
//! entropies are in bits.
//!
//! - [`infofn`]: binary entropy, `φ`, `f₂` and the composites built on them.
//! - [`channel`]: input laws and exact information quantities.
//! - [`feasible`]: the `(u₁, u₂, u)` parameterization and the set `P`.
//! - [`bounds`]: constraint sets and swept boundaries of every region.
//! - [`symrate`]: symmetric-rate points.
//! - [`oracle`]: brute-force verification against the original expressions.
//! - [`geometry`]: Pareto boundaries, support functions and curve gaps.

pub mod bounds;
pub mod channel;
pub mod error;
pub mod feasible;
pub mod geometry;
pub mod infofn;
pub mod oracle;
pub mod search;
pub mod symrate;

pub use error::{Error, Result};
