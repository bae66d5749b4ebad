//! Independent reference computations for certifying `subplanck`.
//!
//! Everything here is deliberately simple and slow: a truncated Fock-basis
//! state algebra with displacement via the matrix exponential of the
//! truncated ladder generator, direct numerical quadrature of the Wigner
//! integral, and a double-double power-series Bessel evaluation.  These
//! routines share no code path with the closed forms they check.

mod extended;
mod fock;
mod quadrature;

pub use extended::bessel_j_series_dd;
pub use fock::{fock_coherent, fock_displace, fock_state, recommended_dim, FockVector};
pub use quadrature::wigner_quadrature;

/// Errors from oracle computations.
#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("truncated basis too small: dim {dim} but need more than {needed:.1}")]
    DimensionTooSmall { dim: usize, needed: f64 },

    #[error("truncation tail mass {tail:.3e} exceeds {limit:.3e} of the norm")]
    TailMass { tail: f64, limit: f64 },
}

pub type Result<T> = std::result::Result<T, OracleError>;
