//! Cohomology of the genus-two surface group with coefficients in
//! `SO(2,1)`-modules.

pub mod cache;
pub mod cocycle;
pub mod cohomology;
pub mod octagon;
pub mod presentation;
pub mod representation;

pub use cocycle::{geodesic_cocycle, CocycleOptions, CocycleReport};
pub use cohomology::{
    cohomology_report, euler_oracle, h0_dim, h1_dim, is_coboundary, relator_constraint_residual, CohomologyReport,
    GroupCocycle,
};
pub use octagon::{octagon_group, OctagonDomain};
pub use presentation::{GroupPresentation, Letter, Word};
pub use representation::{coefficient_action, Coefficients, FlatRepresentation};
