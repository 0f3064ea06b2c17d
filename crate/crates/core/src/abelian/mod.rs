//! Exact integer linear algebra and finitely generated abelian groups.

mod group;
mod matrix;
mod snf;

pub use group::{cokernel_group, min_generators, subgroup_compare, FgAbelianGroup, GroupElement, SubgroupOrder};
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, smith_normal_form_word, SnfResult};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbelianError {
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("element has ambient rank {found}, group has ambient rank {expected}")]
    WrongAmbient { expected: usize, found: usize },
    #[error("integer overflow in word-sized arithmetic; use the arbitrary-precision path")]
    Overflow,
}
