//! Singular vectors of degenerate weights, the level-one operators that
//! accompany them, and the constants of the higher equations of motion.

mod d1;
mod eom;
mod error;
mod vector;

pub use d1::{
    level_three_instance, level_two_instance, reference_instances, solve_d1, w1_vector, D1Solution,
};
pub use eom::{
    d2_table, eom_constant, eom_rhs, D2Table, EomConstant, EomRhs, EomStatus, EomTerm, Field,
    MuData,
};
pub use error::SingularError;
pub use vector::{
    build_singular, level_one_symbolic_residual, ratio_identity_residual, verify_null_form,
    Descendant, SingularVectorSpec,
};
