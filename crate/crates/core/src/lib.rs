//! Rate regions of the interference channel with a cognitive encoder.
//!
//! Two transmitter/receiver pairs share a channel; encoder 1 (the cognitive
//! one) knows both messages, encoder 2 only its own. This crate computes the
//! achievable (inner) rate regions of the rate-splitting / binning /
//! cooperation scheme and the matching outer bounds, in two settings:
//!
//! - **Gaussian channels** (`Y1 = X1 + a·X2 + Z1`, `Y2 = b·X1 + X2 + Z2`):
//!   closed-form mutual informations via log-determinants of jointly
//!   Gaussian auxiliaries, swept over the dirty-paper parametrization.
//! - **Small discrete memoryless channels**: exact mutual informations by
//!   summation, with brute-force search over factorized input distributions.
//!
//! Split-rate constraint systems are projected onto the `(R1, R2)` plane by
//! numeric Fourier–Motzkin elimination, which doubles as a cross-check of
//! the eliminated closed forms.
//!
//! All rates are in bits per channel use (log base 2) throughout.
//!
//! Everything is a pure function over immutable values; all randomized
//! searches are driven by explicit seeds and are reproducible bit-for-bit.

pub mod cli;
pub mod dmc;
pub mod error;
pub mod fme;
pub mod gaussian;
pub mod inner;
pub mod outer;
pub mod region;

pub use error::{Error, Result};
pub use gaussian::{DpcParams, GaussianChannel, JointGaussian};
pub use region::{pareto_frontier, region_contains, RatePair, RateRegion, RegionComparison};
