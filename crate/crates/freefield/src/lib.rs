//! Exact free-field (vanishing cosmological constant) correlator ratios in the
//! doubled coordinates, with descendant insertion by Gaussian integration by
//! parts.

mod config;
pub mod coulomb;
mod error;
mod random;
mod rational;

pub use config::{BoundaryInsertion, BulkInsertion, CorrelatorConfig};
pub use coulomb::{
    check_neutral, coulomb_log_correlator, derivative_identity_residual, doubled_insertions,
    doubled_insertions_in, doubled_insertions_symbolic, global_ward_residuals, insertion_data,
    ipp_eval, ipp_insert, log_coulomb_value, Entry, GlobalWardResiduals, InsertionData, Origin,
    PairExponent,
};
pub use error::FreeFieldError;
pub use random::random_neutral_config;
pub use rational::{RationalField, Scalar, C};
