//! Operator-identity validation at the default resonance and detuning.

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::Result;
use crate::fock::{verify_all, BasisSpec, IdentityReport};
use crate::spectral::ModelParams;

pub const VALIDATE_N_MAX: usize = 128;
pub const VALIDATE_TOLERANCE: f64 = 1e-10;
pub const VALIDATE_B_R: [f64; 2] = [0.0, 6.25];
const FLOW_SAMPLES: usize = 7;

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub reports: Vec<IdentityReport>,
    pub tolerance: f64,
    pub elapsed: Duration,
}

impl ValidationReport {
    pub fn max_residual(&self) -> f64 {
        self.reports.iter().map(IdentityReport::max_residual).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.max_residual() <= self.tolerance
    }
}

pub fn run_validation(n_max: usize, b_rs: &[f64]) -> Result<ValidationReport> {
    let start = Instant::now();
    let reports = b_rs
        .par_iter()
        .map(|&b_r| {
            let params = ModelParams::from_action_scale(1.0, 1.0, 0.0, b_r)?;
            Ok(verify_all(BasisSpec::new(n_max), &params, FLOW_SAMPLES))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ValidationReport {
        reports,
        tolerance: VALIDATE_TOLERANCE,
        elapsed: start.elapsed(),
    })
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<34}", "identity")?;
        for r in &self.reports {
            write!(f, " {:>14}", format!("B_R={}", r.b_r))?;
        }
        writeln!(f)?;
        let rows: [(&str, fn(&IdentityReport) -> f64); 11] = [
            ("normal form", |r| r.normal_form.residual),
            ("action diagonal", |r| r.normal_form.action_offdiag),
            ("action = hbar * excitation", |r| r.normal_form.action_vs_excitation),
            ("tau^2 = 0", |r| r.algebra.tau_nilpotent),
            ("{tau, tau+} + dark = 1", |r| r.algebra.tau_anticommutator),
            ("[b, B] = hbar b", |r| r.algebra.b_action_commutator),
            ("[b, tau] = 0", |r| r.algebra.b_tau_commutator),
            ("[b, tau+] = 0", |r| r.algebra.b_tau_dag_commutator),
            ("[H, excitation] = 0", |r| r.algebra.hamiltonian_excitation_commutator),
            ("tau3(t) flow", |r| r.flows.tau3_residual),
            ("b(t) flow", |r| r.flows.b_residual),
        ];
        for (label, get) in rows {
            write!(f, "{label:<34}")?;
            for r in &self.reports {
                write!(f, " {:>14.3e}", get(r))?;
            }
            writeln!(f)?;
        }
        writeln!(
            f,
            "max residual {:.3e} (tolerance {:.0e}), n_max = {}, {:.2} s: {}",
            self.max_residual(),
            self.tolerance,
            self.reports.first().map_or(0, |r| r.n_max),
            self.elapsed.as_secs_f64(),
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}
