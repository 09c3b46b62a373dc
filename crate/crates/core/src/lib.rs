//! Certified lower bounds of concurrence for multipartite mixed states.
//!
//! High-dimensional states are compressed onto small product subspaces
//! (qubit or `s`-level per party); the two-qubit concurrences or exact pure
//! concurrences of those substates are then aggregated into a lower bound for
//! the full state. The crate also ships exact pure-state evaluators and a
//! sampling-based convex-roof upper estimate used to check soundness.
//!
//! Module map:
//! - [`linalg`]: dense complex matrices and a Jacobi Hermitian eigensolver.
//! - [`qstate`]: states, partial traces, party merging, generators, file I/O.
//! - [`pure_concurrence`]: exact concurrence of pure states.
//! - [`wootters`]: two-qubit concurrence of (unnormalized) density operators.
//! - [`substate`]: enumeration and extraction of projected substates.
//! - [`bounds`]: the lower-bound evaluators and printed closed forms.
//! - [`oracle`]: convex-roof upper estimates and inequality checks.

pub mod bounds;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod pure_concurrence;
pub mod qstate;
pub mod substate;
pub mod wootters;

pub use error::{Error, Result};
