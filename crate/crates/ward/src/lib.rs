//! Ward-identity systems for boundary W₃ correlators, BPZ closability by
//! descendant counting, and the hypergeometric equations that result.

mod bpz;
mod closable;
mod error;
mod local;
mod system;

pub use bpz::{
    bpz_spec, mu_condition, mu_condition_check, BpzMu, BpzWeights, Family, HypergeometricSpec,
    Prefactor, Variable,
};
pub use closable::{
    closable, closable_classes, insertion_counts, patterns, Closability, InsertionCounts,
};
pub use error::WardError;
pub use local::{local_ward_rhs, Current, LocalExpansion, PoleTerm, Source};
pub use system::{
    global_ward_system, global_ward_system_at, global_ward_system_in, Reduction, Unknown, WKind,
    WardRow, WardSystem,
};
