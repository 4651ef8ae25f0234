//! Exact desk-scale analysis of Gibbs measures `mu ∝ exp(H)` on `{±1}^n`:
//! full probability tables, the Glauber transition operator, spectral gaps,
//! correlation matrices and spectral independence, tilts and fractional
//! log-concavity falsification, entropy functionals with tensorization and
//! MLSI constant searches, and the standard mixing-time brackets.
//!
//! Everything here enumerates the `2^n` state space, so inputs are capped at
//! small `n`; the point is exactness, not scale. State order is lexicographic
//! over `(sigma_1, ..., sigma_n)` with `+1 < -1` (see `spin_core::corners`).

mod bounds;
mod correlation;
mod entropy;
mod error;
mod flc;
pub mod random;
mod report;
mod table;
mod walk;

pub use bounds::{mixing_time_bounds, si_from_contraction, MixingBounds};
pub use correlation::{
    correlation_matrix_spin, homogenized_marginals, spectral_independence_eta, CorrelationMatrix,
};
pub use entropy::{
    at_constant_search, comparison_check, entropy_functional, mlsi_search, site_entropy_sum,
    AtSearchResult, ComparisonReport, MlsiSearchResult,
};
pub use error::EngineError;
pub use flc::{flc_falsify, FlcOutcome};
pub use report::CheckRecord;
pub use table::{gibbs_table, sample_states, tv_distance, ExactGibbsTable, GIBBS_MAX_N};
pub use walk::{
    dirichlet_form, dirichlet_form_cosh, dirichlet_form_cov, glauber_operator,
    measured_mixing_time, spectral_gap, walk_eigenvalues, WalkKind, WalkOperator, GLAUBER_MAX_N,
};

pub type Result<T> = std::result::Result<T, EngineError>;
