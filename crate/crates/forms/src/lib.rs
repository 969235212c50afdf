//! Descendant multilinear forms in canonical form, and the free-field spin-3
//! current realized through the quantum Miura transformation.

mod error;
mod field_poly;
mod lforms;
pub mod miura;
mod ope;
mod weight;

pub use error::FormError;
pub use field_poly::{combine, FieldMonomial, FieldPolynomial};
pub use lforms::{l_form, l_form_with, Partition, SUPPORTED_PARTITIONS};
pub use miura::{miura_w_form, miura_w_form_in, realization, MiuraConvention, WRealization};
pub use ope::ope_mode;
pub use weight::{Chi, Weight, WeightTag};
