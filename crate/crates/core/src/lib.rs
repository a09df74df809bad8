//! Symmetry groups of Gaussian graphical models.
//!
//! For an undirected graph on `[m]`, the model is the family of zero-mean
//! normal distributions whose concentration (inverse covariance) matrices
//! vanish at non-edges. This crate computes the maximal subgroup of
//! `GL_m(ℝ)` stabilizing that cone and everything that follows from it:
//!
//! - the closed-neighborhood preorder, its equivalence classes, class
//!   poset and size-colored quotient graph ([`preorder`]);
//! - the stabilizer's continuous factor (a zero-pattern matrix group), the
//!   lifted quotient automorphisms forming its discrete factor, membership
//!   tests and the semidirect decomposition ([`group`], [`perm`]);
//! - the dimension of the orbit space on concentration matrices, computed
//!   three independent ways, and the transitivity characterization
//!   ([`orbit`]);
//! - minimal sample sizes for equivariant estimation, breakdown bounds,
//!   the maximal invariant, slice reduction, constructive equivariant
//!   estimators and the decomposable MLE ([`estimation`]);
//! - text formats, per-graph reports and an exhaustive verification sweep
//!   over all small graphs ([`io`], [`report`], [`sweep`]).
//!
//! Vertices are 1-based in all textual input and output, 0-based in the
//! API. All randomized routines take explicit seeds or RNGs and are
//! deterministic given them.

pub mod checks;
pub mod error;
pub mod estimation;
pub mod graph;
pub mod group;
pub mod io;
pub mod orbit;
pub mod perm;
pub mod preorder;
pub mod report;
pub mod sampling;
pub mod sweep;
pub mod testgraphs;

pub use error::{Error, Result};
pub use graph::Graph;
