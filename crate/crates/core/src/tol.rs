//! Numerical tolerances used across the crate.
//!
//! All state and operator validity checks share [`EPS`]; the coarser
//! constants exist where floating-point error accumulates through
//! renormalisation or decomposition.

/// General validity tolerance: Hermiticity, positivity, trace and norm
/// checks, probability normalisation.
pub const EPS: f64 = 1e-9;

/// Eigenvalues closer than this are merged into one degenerate
/// eigenprojector during spectral decomposition.
pub const EPS_SPEC: f64 = 1e-7;

/// Singular values below this do not count towards the Schmidt rank.
pub const EPS_SCHMIDT: f64 = 1e-7;

/// Spectral reconstruction must reproduce the input entrywise within this.
pub const EPS_RECON: f64 = 1e-8;

/// Eigenspace-membership threshold for the eigenstate property rule:
/// a state has the value iff Tr(P ρ) > 1 − EPS_EIG.
pub const EPS_EIG: f64 = 1e-9;

/// Branch weights at or below this are treated as null branches.
pub const EPS_PRUNE: f64 = 1e-12;

/// Collapsed-state overlaps above this witness spoiling. Coarser than
/// [`EPS`] because overlaps pass through renormalisation.
pub const EPS_SPOIL: f64 = 1e-6;

/// A discrimination strategy counts as perfect above 1 − EPS_PERFECT.
pub const EPS_PERFECT: f64 = 1e-9;

/// Ensemble files may deviate from unit norms and unit prior sums by at
/// most this before parsing fails; smaller deviations are renormalised.
pub const FILE_NORM_TOL: f64 = 1e-6;

/// Largest supported local dimension per party.
pub const DIM_CAP: usize = 16;

/// Default bound on the number of measurement rounds in a protocol tree.
pub const DEFAULT_MAX_ROUNDS: usize = 8;
