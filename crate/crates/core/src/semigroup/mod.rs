//! Dense finite-difference realisation on the periodic grid and its
//! semigroup and resolvent.

pub mod evolution;
pub mod grid;
pub mod resolvent;

pub use evolution::{contraction_check, propagate, ContractionPlan, ContractionResult, Propagator};
pub use grid::{
    assemble, assemble_with_cap, discrete_pairing, lp_norm, numerical_range_sample,
    random_grid_vector, sector_excess, GridFunction, GridOperator, DEFAULT_NODE_CAP, SCHEME,
};
pub use resolvent::{resolvent_check, ResolventPlan, ResolventResult};
