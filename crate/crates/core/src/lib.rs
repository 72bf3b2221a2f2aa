//! Classical mutual information over the permutation arrangements of a
//! fixed spectrum.
//!
//! The crate enumerates the CMI-invariant classes of `m x n` arrangements,
//! finds the extremal classes by brute force and Monte Carlo census,
//! certifies a-priori order relations between classes (majorisation and the
//! entropic relation `⊳`), and evaluates the two-qubit T-state geometry.
//! All information values are computed in nats; [`LogBase`] converts at
//! the reporting boundary.

pub mod classes;
pub mod cli;
pub mod error;
pub mod extrema;
pub mod order;
pub mod permutation;
pub mod probability;
pub mod qubit2;
pub mod symbolic;
pub mod tolerance;

pub use error::{Error, Result};
pub use probability::{LogBase, ProbMatrix, Spectrum};
