use alloc::vec::Vec;

use crate::algebra::Violation;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid algebra ({} violation(s))", .0.len())]
    InvalidAlgebra(Vec<Violation>),
    #[error("operation expects {expected} arguments, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("element {element} is outside the universe of size {size}")]
    ElementOutOfRange { element: usize, size: usize },
    #[error("algebra is not idempotent")]
    NotIdempotent,
    #[error("budget exceeded: {0}")]
    BudgetExceeded(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
