//! Superpositions of compass states in phase space.
//!
//! A compass state is a superposition of four coherent states placed at the
//! north, south, east and west of phase space; superposing `n` such states,
//! each rotated by `π/2n` with respect to its predecessor, spreads `4n`
//! coherent states evenly on a circle.  This crate evaluates the Wigner
//! function of any such superposition exactly (pairwise Gaussian kernel) and
//! through the centre-interference approximation, computes the overlap
//! `γ(δ) = |⟨ψ|D(δ)|ψ⟩|²` between a state and its displaced copy both exactly
//! and with cross terms dropped, and extracts the displacement sensitivity
//! `|δ|min` together with its anisotropy as a function of `n`.
//!
//! Grid sampling ([`grid`]) and the direction sweep in [`sensitivity`] run on
//! rayon when the default `parallel` feature is enabled; disable default
//! features for a fully sequential build.  Both paths produce bit-identical
//! output.

pub mod error;
pub mod grid;
pub mod overlap;
pub mod sensitivity;
pub mod special;
pub mod states;
pub mod wigner;

pub use error::{Error, Result};
pub use states::{CoherentComponent, Displacement, StateSpec};
pub use wigner::PhasePoint;

pub(crate) type Complex = num_complex::Complex64;
