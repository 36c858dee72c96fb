//! Closed-form semiclassical trajectories of a coherent wave packet.
//!
//! All three trajectories are expansions about the mean action
//! `A0 = hbar (|alpha0|^2 + 1/2)` and share the collapse envelope
//! `exp(-hbar A0 (Ω' t)^2 / 2)`.

use num_complex::Complex64 as C64;

use super::prep::{AtomicPrep, WavePacketPrep};
use crate::error::{Error, Result};
use crate::spectral::{frequencies, DressedFrame, ModelParams};

/// Dressed frame evaluated at the packet's mean action.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PacketFrame {
    pub hbar: f64,
    pub action: f64,
    pub alpha0: C64,
    pub frame: DressedFrame,
}

impl PacketFrame {
    pub fn new(prep: &WavePacketPrep, params: &ModelParams) -> Result<Self> {
        let action = prep.action(params.hbar);
        Ok(Self {
            hbar: params.hbar,
            action,
            alpha0: prep.alpha0,
            frame: frequencies(action, params)?,
        })
    }

    /// Gaussian collapse envelope.
    pub fn envelope(&self, t: f64) -> f64 {
        let x = self.frame.rabi_slope * t;
        (-0.5 * self.hbar * self.action * x * x).exp()
    }

    /// Mean polarization for the excited preparation:
    /// `c² + s² cos(Ωt) env(t)`.
    pub fn collapse(&self, t: f64) -> f64 {
        let f = &self.frame;
        f.c * f.c + f.s * f.s * (f.rabi * t).cos() * self.envelope(t)
    }

    /// Mean polarization for the plus-dressed preparation:
    /// `c - hbar Ω' t s (A0 θ' + s/2) sin(Ωt) env(t)`.
    pub fn dressed_polarization(&self, t: f64) -> f64 {
        let f = &self.frame;
        let growth = self.hbar * f.rabi_slope * t;
        let weight = f.s * (self.action * f.mixing_slope + 0.5 * f.s);
        f.c - growth * weight * (f.rabi * t).sin() * self.envelope(t)
    }

    /// Adiabatic part of the rotating-frame field amplitude:
    /// `(cos(ω̃t) - i c sin(ω̃t)) alpha0`.
    pub fn field_adiabatic(&self, t: f64) -> C64 {
        let f = &self.frame;
        let (sn, cs) = (f.phase_freq * t).sin_cos();
        C64::new(cs, -f.c * sn) * self.alpha0
    }

    /// Amplitude `hbar s² |alpha0| / (4 A0)` of the fast field oscillation.
    pub fn field_rabi_amplitude(&self) -> f64 {
        self.hbar * self.frame.s * self.frame.s * self.alpha0.norm() / (4.0 * self.action)
    }

    /// Rotating-frame field amplitude `<a_t> e^{iωt}` for the excited
    /// preparation: adiabatic part plus
    /// `hbar s²/(4 A0) [1 - (cos(Ωt) - i c sin(Ωt)) env(t)] alpha0`.
    pub fn field(&self, t: f64) -> C64 {
        let f = &self.frame;
        let (sn, cs) = (f.rabi * t).sin_cos();
        let k = self.hbar * f.s * f.s / (4.0 * self.action);
        let fast = C64::new(1.0, 0.0) - C64::new(cs, -f.c * sn) * self.envelope(t);
        self.field_adiabatic(t) + fast * self.alpha0 * k
    }
}

fn require(prep: &WavePacketPrep, atomic: AtomicPrep) -> Result<()> {
    if prep.atomic != atomic {
        return Err(Error::InvalidParams(format!(
            "trajectory needs the {atomic} preparation, got {}",
            prep.atomic
        )));
    }
    Ok(())
}

pub fn sigma3_collapse(t: f64, prep: &WavePacketPrep, params: &ModelParams) -> Result<f64> {
    require(prep, AtomicPrep::Excited)?;
    Ok(PacketFrame::new(prep, params)?.collapse(t))
}

pub fn sigma3_dressed(t: f64, prep: &WavePacketPrep, params: &ModelParams) -> Result<f64> {
    require(prep, AtomicPrep::PlusDressed)?;
    Ok(PacketFrame::new(prep, params)?.dressed_polarization(t))
}

/// Rotating-frame field amplitude, total and adiabatic-only.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldAmplitude {
    pub total: C64,
    pub adiabatic: C64,
}

pub fn field_amplitude_rotating(t: f64, prep: &WavePacketPrep, params: &ModelParams) -> Result<FieldAmplitude> {
    require(prep, AtomicPrep::Excited)?;
    let frame = PacketFrame::new(prep, params)?;
    Ok(FieldAmplitude {
        total: frame.field(t),
        adiabatic: frame.field_adiabatic(t),
    })
}

/// Time scales bounding the semiclassical description.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValidityWindow {
    /// `1 / (sqrt(hbar A0) Ω')`.
    pub t_collapse: f64,
    /// `1 / (hbar Ω')`.
    pub t_heisenberg: f64,
    /// `2π / Ω(A0)`.
    pub rabi_period: f64,
}

impl ValidityWindow {
    pub fn collapse_in_periods(&self) -> f64 {
        self.t_collapse / self.rabi_period
    }

    pub fn heisenberg_in_periods(&self) -> f64 {
        self.t_heisenberg / self.rabi_period
    }
}

pub fn validity_window(params: &ModelParams, prep: &WavePacketPrep) -> Result<ValidityWindow> {
    let frame = PacketFrame::new(prep, params)?;
    let slope = frame.frame.rabi_slope;
    Ok(ValidityWindow {
        t_collapse: 1.0 / ((params.hbar * frame.action).sqrt() * slope),
        t_heisenberg: 1.0 / (params.hbar * slope),
        rabi_period: 2.0 * std::f64::consts::PI / frame.frame.rabi,
    })
}
