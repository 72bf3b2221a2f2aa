//! Numeric tolerances shared across the crate.
//!
//! All information values are computed in double precision from at most a
//! few dozen summed terms, so equality and ordering checks use a fixed
//! absolute window rather than a relative one.

/// Equality/ordering window for information values and unit sums.
pub const EPS: f64 = 1e-12;

/// Validation gate for user-typed spectra before exact renormalisation.
pub const INPUT_SUM_GATE: f64 = 1e-9;

/// Sampled spectra with adjacent entries closer than this are redrawn.
pub const SAMPLE_TIE_GAP: f64 = 1e-15;

/// Agreement required between the identric-mean transposition formula and
/// a direct CMI difference.
pub const TRANSPOSITION_IDENTITY: f64 = 1e-10;

/// Membership slack for the tetrahedron and octahedron of T-states.
pub const GEOMETRY_SLACK: f64 = 1e-12;
