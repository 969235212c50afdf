//! Desk-scale Monte Carlo for the half-plane 𝔰𝔩₃ Toda field: exact sampling
//! of the mollified GFF on a grid, renormalized chaos masses, correlator
//! estimates and fusion slopes.

pub mod checks;
pub mod correlator;
pub mod error;
pub mod fusion;
pub mod grid;
pub mod kernel;
pub mod mollifier;
pub mod sampler;
pub mod stats;
pub mod weights;

pub use checks::{
    bulk_mass, covariance_check, default_probe_pairs, mass_stability, mollifier_swap,
    CovarianceReport, MassComparison, PairResult, ProbePair,
};
pub use correlator::{
    direct_vertex_estimate, estimate_correlator, exact_log_prefactor, log_prefactor, log_zero_mode,
    mu_b1_derivative, seiberg_violation, CorrelatorEstimate, DerivativeCheck, Diagnostics,
    EstimateOptions, Method, ZeroModeReport,
};
pub use error::GmcError;
pub use fusion::{
    bound_exponent, fusion_probe, FusionPair, FusionReport, PairKind, SLOPE_TOLERANCE,
};
pub use grid::{Node, Window};
pub use kernel::{green, Kernel};
pub use mollifier::Mollifier;
pub use sampler::{GffSample, GffSampler, MAX_POINTS};
pub use stats::Stats;
