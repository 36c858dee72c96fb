//! Exact quantum mechanics on the truncated atom ⊗ Fock space.

mod basis;
mod operators;
mod sectors;
mod state;
mod verify;

pub use basis::{Atom, BasisSpec};
pub use operators::{build_operators, OperatorMatrix, OperatorSet};
pub use sectors::{Sector, SectorDecomposition};
pub use state::{prepare_state, AtomFieldState};
pub use verify::{
    b_flow, tau3_flow, verify_all, verify_heisenberg_flows, verify_normal_form, verify_polariton_algebra,
    AlgebraReport, FlowReport, IdentityReport, NormalFormReport,
};
