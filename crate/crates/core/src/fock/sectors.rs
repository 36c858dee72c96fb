//! Block decomposition of the Hamiltonian into excitation-number sectors and
//! exact propagation within each block.

use num_complex::Complex64 as C64;

use super::basis::{Atom, BasisSpec};
use super::operators::OperatorMatrix;
use super::state::AtomFieldState;
use crate::error::{Error, Result};
use crate::spectral::ModelParams;

/// One complete two-dimensional sector `{|e,k-1>, |g,k>}`.
///
/// The block is stored as `mean + half_split * (axis_x tau1 + axis_z tau3)`
/// with a unit axis, which gives the propagator in closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct Sector {
    pub k: usize,
    pub block: [[f64; 2]; 2],
    pub mean: f64,
    pub half_split: f64,
    pub axis_x: f64,
    pub axis_z: f64,
    /// `[upper, lower]`.
    pub eigenvalues: [f64; 2],
    /// Eigenvectors in the (up, down) basis, same order as `eigenvalues`.
    pub eigenvectors: [[f64; 2]; 2],
}

impl Sector {
    fn from_block(k: usize, block: [[f64; 2]; 2]) -> Self {
        let mean = 0.5 * (block[0][0] + block[1][1]);
        let dz = 0.5 * (block[0][0] - block[1][1]);
        let dx = block[0][1];
        let half_split = dz.hypot(dx);
        let (axis_x, axis_z) = if half_split > 0.0 {
            (dx / half_split, dz / half_split)
        } else {
            (0.0, 1.0)
        };
        let half_angle = 0.5 * axis_x.atan2(axis_z);
        let (sn, cs) = half_angle.sin_cos();
        Self {
            k,
            block,
            mean,
            half_split,
            axis_x,
            axis_z,
            eigenvalues: [mean + half_split, mean - half_split],
            eigenvectors: [[cs, sn], [-sn, cs]],
        }
    }

    /// `exp(-i block t / hbar)` as a 2x2 matrix.
    pub fn propagator(&self, t: f64, hbar: f64) -> [[C64; 2]; 2] {
        let global = C64::from_polar(1.0, -self.mean * t / hbar);
        let (sn, cs) = (self.half_split * t / hbar).sin_cos();
        let c = C64::new(cs, 0.0);
        let isz = C64::new(0.0, -sn * self.axis_z);
        let isx = C64::new(0.0, -sn * self.axis_x);
        [
            [global * (c + isz), global * isx],
            [global * isx, global * (c - isz)],
        ]
    }
}

/// Exact spectral decomposition of the truncated Hamiltonian.
#[derive(Clone, Debug)]
pub struct SectorDecomposition {
    pub basis: BasisSpec,
    pub hbar: f64,
    /// Energy of `|g,0>`.
    pub dark_energy: f64,
    /// Sectors `k = 1..=n_max`.
    pub sectors: Vec<Sector>,
    /// Energy of the lone truncated state `|e,n_max>`.
    pub edge_energy: f64,
}

impl SectorDecomposition {
    /// Builds the blocks from the Hamiltonian matrix elements.
    pub fn new(basis: BasisSpec, params: &ModelParams) -> Self {
        let hbar = params.hbar;
        let field = |n: f64| hbar * params.omega * (n + 0.5);
        let atom = 0.5 * hbar * params.nu;
        let sectors = (1..=basis.n_max())
            .map(|k| {
                let kf = k as f64;
                let off = hbar * params.g * kf.sqrt();
                Sector::from_block(k, [[field(kf - 1.0) + atom, off], [off, field(kf) - atom]])
            })
            .collect();
        Self {
            basis,
            hbar,
            dark_energy: field(0.0) - atom,
            sectors,
            edge_energy: field(basis.n_max() as f64) + atom,
        }
    }

    pub fn sector(&self, k: usize) -> &Sector {
        &self.sectors[k - 1]
    }

    /// `exp(-iHt/hbar) psi`, one closed-form 2x2 rotation per sector.
    pub fn propagate(&self, state: &AtomFieldState, t: f64) -> Result<AtomFieldState> {
        let basis = self.basis;
        if state.basis() != basis {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                got: state.basis().dim(),
            });
        }
        let psi = state.amplitudes();
        let mut out = psi.clone();
        let dark = basis.dark_index();
        out[dark] = psi[dark] * C64::from_polar(1.0, -self.dark_energy * t / self.hbar);
        let edge = basis.index(Atom::Excited, basis.n_max());
        out[edge] = psi[edge] * C64::from_polar(1.0, -self.edge_energy * t / self.hbar);
        for sector in &self.sectors {
            let up = basis.index(Atom::Excited, sector.k - 1);
            let down = basis.index(Atom::Ground, sector.k);
            let u = sector.propagator(t, self.hbar);
            let (x, y) = (psi[up], psi[down]);
            out[up] = u[0][0] * x + u[0][1] * y;
            out[down] = u[1][0] * x + u[1][1] * y;
        }
        Ok(AtomFieldState::from_amplitudes(basis, out))
    }

    /// Dense `exp(-iHt/hbar)` for operator-level checks.
    pub fn unitary(&self, t: f64) -> OperatorMatrix {
        let basis = self.basis;
        let mut u = OperatorMatrix::zeros(format!("U({t})"), basis.dim());
        let dark = basis.dark_index();
        u.data[[dark, dark]] = C64::from_polar(1.0, -self.dark_energy * t / self.hbar);
        let edge = basis.index(Atom::Excited, basis.n_max());
        u.data[[edge, edge]] = C64::from_polar(1.0, -self.edge_energy * t / self.hbar);
        for sector in &self.sectors {
            let idx = [
                basis.index(Atom::Excited, sector.k - 1),
                basis.index(Atom::Ground, sector.k),
            ];
            let block = sector.propagator(t, self.hbar);
            for r in 0..2 {
                for c in 0..2 {
                    u.data[[idx[r], idx[c]]] = block[r][c];
                }
            }
        }
        u
    }
}
