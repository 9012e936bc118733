//! Independent numerical checks: a Monte Carlo oracle for `Phi`, certified
//! interval masses of the measure, local-dimension regression and
//! conditional measures on dyadic cells.

pub mod conditional;
pub mod interval_mass;
pub mod local_dim;
pub mod phi_oracle;

pub use conditional::{conditional_measure_check, dyadic_interval, ConditionalBounds};
pub use interval_mass::{interval_mass, IntervalMass};
pub use local_dim::{
    default_depth, geometric_radii, local_dimension_estimate, EstimateConfig, LocalDimEstimate,
};
pub use phi_oracle::{phi_oracle, PhiOracleEstimate};
