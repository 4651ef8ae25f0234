//! Sparse representation of functions `H : {±1}^n -> R` through their Fourier
//! coefficients, together with the calculus that spin-system verification
//! needs: the multilinear (harmonic) extension over `[-1,1]^n`, cavity fields,
//! gradients and Hessians, pinning of subsystems, and the smoothness constants
//! `beta` (max corner Hessian norm) and `T` (sup over pinned subsystems).
//!
//! Conventions used throughout the workspace:
//!
//! * Sites are 1-based indices `1..=n`. A term is a subset of sites stored as
//!   a bitmask with bit `i-1` for site `i`.
//! * Corner states are indexed lexicographically over `(sigma_1, ..., sigma_n)`
//!   with `+1 < -1`: state bit `n-i` is 0 when `sigma_i = +1`. State 0 is the
//!   all-plus corner.
//! * Coefficients are `f64`; all tolerances elsewhere assume double precision.

pub mod corners;
mod error;
mod hamiltonian;
pub mod linalg;
mod pin;
mod smoothness;

pub use error::SpinError;
pub use hamiltonian::SpinHamiltonian;
pub use pin::PinningContext;
pub use smoothness::{smoothness_beta, t_constant, SampleMode, SmoothnessReport};

/// Result alias for fallible spin-core operations.
pub type Result<T> = std::result::Result<T, SpinError>;
