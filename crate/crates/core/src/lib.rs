//! Atom/field entanglement generated when a two-level atom is driven by a
//! weakly focused coherent pulse.
//!
//! The paraxial field is coarse-grained into N temporal modes. Three
//! estimators of the atom-field tangle are provided: a stepwise open-system
//! evolution with a dynamically updated symmetric mode ([`symmetric`]),
//! single-mode Jaynes-Cummings models with and without lumped decay, and an
//! upper bound on the tangle between the atom and all paraxial modes from a
//! quantum-trajectory unravelling ([`trajectory`]).

pub mod error;
pub mod linalg;
pub mod lindblad;
pub mod measures;
pub mod params;
pub mod state;
pub mod sweep;
pub mod symmetric;
pub mod tol;
pub mod trajectory;
pub mod validate;

pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use measures::{
    closed_tangle_analytic, ppt_separable, pure_tangle, wootters_tangle, AtomState, InitialState, TangleValue,
};
pub use params::{Method, Rates, SimParams};
pub use state::{partial_trace, DensityOperator, PureState};
pub use symmetric::{run_closed_evolution, run_full_evolution, run_lumped_evolution, TangleSeries};
pub use trajectory::{tangle_upper_bound, BoundPoint, JumpStatistics};
