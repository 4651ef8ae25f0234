//! Distributions on `k`-element subsets of a ground set, with the walk
//! machinery built on them: the down and up averaging operators, the down-up
//! and up-down walks, links, homogenization of spin measures into set
//! systems, subset correlation matrices, generating polynomials, and
//! verifiers for the trickle-down spectral bounds.
//!
//! Subsets are bitmasks over 0-based ground elements; file formats use
//! 1-based element lists. State spaces are materialized explicitly, so
//! everything is exact and capped at small ground sets.

mod correlation;
mod dist;
mod error;
mod genpoly;
mod homog;
mod operators;
mod trickledown;
mod walks;

pub use correlation::{correlation_matrix_subset, si_local_identity_check, SiLocalReport, SubsetCorrelation};
pub use dist::{random_dense, random_sparse, SubsetDistribution};
pub use error::SubsetError;
pub use genpoly::{fact213_matrix, generating_polynomial_eval, log_g_hessian_at_one};
pub use homog::{homogenize, homogenized_mask, HOMOGENIZE_MAX_N};
pub use operators::{down_operator, up_operator, LevelOperator};
pub use trickledown::{
    continuity_bound, continuity_verify, oppenheim_verify, trickledown_bound, ContinuityReport,
    OppenheimReport,
};
pub use walks::{active_walk, down_up_walk, lambda2, up_down_walk, SubsetWalk};

pub type Result<T> = std::result::Result<T, SubsetError>;
