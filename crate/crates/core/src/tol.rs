//! Numerical tolerances shared across the crate.

/// Maximum |ρ − ρ†| accepted for a density operator.
pub const HERMITIAN: f64 = 1e-10;

/// Maximum |Tr ρ − 1|.
pub const TRACE: f64 = 1e-8;

/// Smallest eigenvalue accepted as rounding noise rather than integration failure.
pub const POSITIVITY: f64 = -1e-10;

/// Hamiltonians must be Hermitian to this accuracy.
pub const HAMILTONIAN_HERMITIAN: f64 = 1e-12;

/// Allowed relative norm² growth per step of non-Hermitian evolution.
pub const NORM_GROWTH: f64 = 1e-9;

/// Normalization slack for pure states fed to the tangle.
pub const NORMALIZED: f64 = 1e-9;

/// Norm² below which a trajectory state cannot be renormalized.
pub const VANISHING_NORM: f64 = 1e-300;

/// Slack on probabilities computed from survival curves.
pub const PROBABILITY: f64 = 1e-12;

/// Slack on tangle values above 1.
pub const TANGLE: f64 = 1e-9;
