use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::spectral::{dressed_projection, Branch, ModelParams, PolarizationMatrix};

/// How the atom is prepared alongside the coherent field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AtomicPrep {
    /// Bare excited state, `w = (1 + tau3) / 2`.
    Excited,
    /// Best separable approximation to the `+` dressed subspace at the mean
    /// action, `w = P_+(A0)`.
    PlusDressed,
}

impl fmt::Display for AtomicPrep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AtomicPrep::Excited => "excited",
            AtomicPrep::PlusDressed => "plus-dressed",
        })
    }
}

impl FromStr for AtomicPrep {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "excited" => Ok(AtomicPrep::Excited),
            "plus-dressed" => Ok(AtomicPrep::PlusDressed),
            other => Err(Error::config(
                "prep.atomic",
                format!("expected `excited` or `plus-dressed`, got `{other}`"),
            )),
        }
    }
}

/// Coherent field amplitude plus atomic preparation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WavePacketPrep {
    pub alpha0: C64,
    pub atomic: AtomicPrep,
}

impl WavePacketPrep {
    pub fn new(alpha0: C64, atomic: AtomicPrep) -> Self {
        Self { alpha0, atomic }
    }

    /// Real coherent amplitude with `|alpha0|^2 = n_mean`.
    pub fn from_mean_photons(n_mean: f64, atomic: AtomicPrep) -> Self {
        Self::new(C64::new(n_mean.sqrt(), 0.0), atomic)
    }

    /// Real coherent amplitude whose mean action is `a0` at the given `hbar`.
    pub fn from_action(a0: f64, hbar: f64, atomic: AtomicPrep) -> Result<Self> {
        let mean = a0 / hbar - 0.5;
        if !(mean >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "action {a0} is below the zero-point value hbar/2 = {}",
                hbar / 2.0
            )));
        }
        Ok(Self::from_mean_photons(mean, atomic))
    }

    pub fn mean_photons(&self) -> f64 {
        self.alpha0.norm_sqr()
    }

    /// Mean action of the coherent state, `A0 = hbar (|alpha0|^2 + 1/2)`.
    pub fn action(&self, hbar: f64) -> f64 {
        hbar * (self.mean_photons() + 0.5)
    }

    /// Atomic density matrix `w` in the polariton polarization space.
    pub fn polarization(&self, params: &ModelParams) -> Result<PolarizationMatrix> {
        match self.atomic {
            AtomicPrep::Excited => {
                Ok((PolarizationMatrix::identity() + PolarizationMatrix::tau3()) * 0.5)
            }
            AtomicPrep::PlusDressed => dressed_projection(self.action(params.hbar), Branch::Plus, params),
        }
    }
}
