//! Decision procedures for cube terms in finite algebras.
//!
//! An algebra is given by the value tables of its basic operations over the
//! universe `{0, …, n-1}`. This crate decides whether such an algebra has a
//! cube term (equivalently an edge term) and, building on that, a near
//! unanimity term. Idempotent algebras are handled by a polynomial-time
//! search for cube term blockers; general algebras by subpower membership
//! queries up to the `|A|³·m` dimension bound.
//!
//! Every fast path has an independent brute-force counterpart in
//! [`oracles`] so the two can be cross-checked on small inputs.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, wall-clock
//! limits and the command-line front end live in the `cubeterm` crate.
#![no_std]
#![forbid(unsafe_code)]
extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod blockers;
pub mod decide;
pub mod error;
pub mod fixtures;
mod frontier;
pub mod oracles;
pub mod relation;
pub mod set;
pub mod subpower;

pub use algebra::{AlgebraDescription, FiniteAlgebra, OperationDescription, OperationTable, Violation};
pub use blockers::{exhaustive_blocker_search, find_blocker, verify_blocker, Blocker};
pub use decide::{CheckStrategy, CubeDecision, CubeVerdict, DecideOptions, NuVerdict, PairEngine};
pub use error::Error;
pub use relation::{ChippedCubeSpec, Relation};
pub use set::ElementSet;
pub use subpower::{Budget, MembershipAnswer};

/// Universe elements. Universes have at most 256 elements.
pub type Elem = u8;

/// Largest supported universe size.
pub const MAX_UNIVERSE: usize = 256;
