//! Numerical laboratory for single-mode multiround interferometry with
//! photon loss.
//!
//! A single-mode probe state picks up the phase φ+ϑ in one arm, is reversed
//! in the Fock basis by a permutation unitary, and returns through the
//! reference arm, where the absolute phase ϑ cancels. The crate simulates
//! this round trip with explicit Kraus channels, evaluates the analytic
//! output states for the optimal phase state and the M&M state, and turns
//! them into phase-error figures (circular RMS, Holevo variance, error
//! propagation) alongside shot-noise, Heisenberg and NOON reference curves.

pub mod error;
pub mod estimation;
pub mod fock;
pub mod protocol;
pub mod states;
pub mod sweep;

pub use error::{Error, Result};
