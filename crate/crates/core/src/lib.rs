//! Rabi dynamics of the Jaynes-Cummings model from three directions: an exact
//! truncated-Fock oracle, closed-form semiclassical trajectories of a coherent
//! wave packet, and phase-space averages of the leading-order quasi-flow.

pub mod error;
pub mod fock;
pub mod harness;
pub mod semiclassics;
pub mod spectral;

pub use error::{Error, Result};
