use ndarray::Array1;
use num_complex::Complex64 as C64;

use super::basis::{Atom, BasisSpec};
use super::operators::OperatorMatrix;
use crate::error::{Error, Result};
use crate::semiclassics::{AtomicPrep, WavePacketPrep};
use crate::spectral::{mixing, ModelParams};

/// Pure state on the truncated atom ⊗ Fock basis.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomFieldState {
    basis: BasisSpec,
    amps: Array1<C64>,
}

impl AtomFieldState {
    pub fn from_amplitudes(basis: BasisSpec, amps: Array1<C64>) -> Self {
        assert_eq!(amps.len(), basis.dim());
        Self { basis, amps }
    }

    pub fn basis_state(basis: BasisSpec, atom: Atom, n: usize) -> Self {
        let mut amps = Array1::zeros(basis.dim());
        amps[basis.index(atom, n)] = C64::new(1.0, 0.0);
        Self { basis, amps }
    }

    pub fn basis(&self) -> BasisSpec {
        self.basis
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amps
    }

    pub fn amplitude(&self, atom: Atom, n: usize) -> C64 {
        self.amps[self.basis.index(atom, n)]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<σ3>`, the excited minus ground population.
    pub fn sigma3(&self) -> f64 {
        let n_max = self.basis.n_max();
        (0..=n_max)
            .map(|n| self.amplitude(Atom::Excited, n).norm_sqr() - self.amplitude(Atom::Ground, n).norm_sqr())
            .sum()
    }

    /// `<a>`.
    pub fn field(&self) -> C64 {
        let n_max = self.basis.n_max();
        let mut acc = C64::new(0.0, 0.0);
        for atom in [Atom::Excited, Atom::Ground] {
            for n in 1..=n_max {
                acc += self.amplitude(atom, n - 1).conj() * self.amplitude(atom, n) * (n as f64).sqrt();
            }
        }
        acc
    }

    /// `<a†a + σ†σ>`.
    pub fn excitation(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(i, z)| self.basis.sector(i) as f64 * z.norm_sqr())
            .sum()
    }

    /// `<psi| op |psi>`.
    pub fn expect(&self, op: &OperatorMatrix) -> Result<C64> {
        if op.dim() != self.amps.len() {
            return Err(Error::DimensionMismatch {
                expected: self.amps.len(),
                got: op.dim(),
            });
        }
        let applied = op.data.dot(&self.amps);
        Ok(self.amps.iter().zip(applied.iter()).map(|(a, b)| a.conj() * b).sum())
    }

    /// Expectation of a hermitian operator; the imaginary part must vanish
    /// to 1e-12 relative to the operator scale.
    pub fn expect_real(&self, op: &OperatorMatrix) -> Result<f64> {
        let z = self.expect(op)?;
        if z.im.abs() > 1e-12 * op.max_abs().max(1.0) {
            return Err(Error::NonRealExpectation {
                label: op.label.clone(),
                imag: z.im,
            });
        }
        Ok(z.re)
    }
}

/// Coherent photon amplitudes `exp(-|a|^2/2) a^n / sqrt(n!)` for `n <= n_max`,
/// evaluated in log space.
fn coherent_amplitudes(alpha0: C64, n_max: usize) -> Vec<C64> {
    if alpha0.norm() == 0.0 {
        let mut v = vec![C64::new(0.0, 0.0); n_max + 1];
        v[0] = C64::new(1.0, 0.0);
        return v;
    }
    let (r, phase) = alpha0.to_polar();
    let ln_r = r.ln();
    let mut ln_fact = 0.0;
    (0..=n_max)
        .map(|n| {
            if n > 0 {
                ln_fact += (n as f64).ln();
            }
            let nf = n as f64;
            let ln_mag = -0.5 * r * r + nf * ln_r - 0.5 * ln_fact;
            C64::from_polar(ln_mag.exp(), nf * phase)
        })
        .collect()
}

/// Separable initial state: coherent field times the atomic vector of `prep`.
///
/// The plus-dressed atomic vector is `(cos(θ/2), e^{-i arg α0} sin(θ/2))`
/// with `cos θ = c(A0)`, the `+1` eigenvector of `s σ1 + c σ3` rotated into
/// the field phase; for real `α0` it is the plain `σ1`/`σ3` eigenvector.
pub fn prepare_state(prep: &WavePacketPrep, basis: BasisSpec, params: &ModelParams) -> Result<AtomFieldState> {
    let mean = prep.mean_photons();
    let required = BasisSpec::required_cutoff(mean);
    if basis.n_max() < required {
        return Err(Error::Truncation {
            have: basis.n_max(),
            required,
            mean,
        });
    }
    let (up, down) = match prep.atomic {
        AtomicPrep::Excited => (C64::new(1.0, 0.0), C64::new(0.0, 0.0)),
        AtomicPrep::PlusDressed => {
            let (c, s) = mixing(prep.action(params.hbar), params)?;
            let half = 0.5 * s.atan2(c);
            let field_phase = if mean > 0.0 { prep.alpha0.arg() } else { 0.0 };
            (
                C64::new(half.cos(), 0.0),
                C64::from_polar(half.sin(), -field_phase),
            )
        }
    };
    let field = coherent_amplitudes(prep.alpha0, basis.n_max());
    let mut amps = Array1::zeros(basis.dim());
    for (n, &f) in field.iter().enumerate() {
        amps[basis.index(Atom::Excited, n)] = up * f;
        amps[basis.index(Atom::Ground, n)] = down * f;
    }
    let norm = amps.iter().map(|z: &C64| z.norm_sqr()).sum::<f64>().sqrt();
    amps.mapv_inplace(|z| z / norm);
    Ok(AtomFieldState { basis, amps })
}
