//! Hyperbolic geometry in the Klein chart: the tractor connection, its
//! transport and holonomy, normal tractors and the first BGG operators.

pub mod bgg_ops;
pub mod holonomy;
pub mod klein;
pub mod normal;
pub mod transport;

pub use holonomy::{
    check_flatness, check_metric, isometry_holonomy, quotient_holonomy, FlatnessReport, HolonomyReport,
};
pub use klein::{metric_at, KleinPoint};
pub use normal::{normal_tractor_check, Hypersurface, NormalTractorReport};
pub use transport::{
    connection_matrix, dual_tractor_derivative, parallel_transport, parallel_transport_sym, tractor_derivative,
    transport_matrix, CurveSpec, SymTractor, TractorRep, TractorVector, Transport,
};
