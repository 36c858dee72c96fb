//! Semiclassical wave-packet dynamics: closed-form trajectories and
//! phase-space averages of the leading-order quasi-flow.

mod closed_form;
mod prep;
mod quadrature;
mod quasiflow;

pub use closed_form::{
    field_amplitude_rotating, sigma3_collapse, sigma3_dressed, validity_window, FieldAmplitude, PacketFrame,
    ValidityWindow,
};
pub use prep::{AtomicPrep, WavePacketPrep};
pub use quadrature::{wigner_expectation, PhaseSpaceEngine, PhaseSpaceGrid, PhaseSpaceQuadrature};
pub use quasiflow::{
    check_hermitian, quasiflow_b, quasiflow_sigma3, ActionSymbol, ConstantSymbol, FieldFlow, QuasiFlowSymbol,
    Sigma3Flow,
};
