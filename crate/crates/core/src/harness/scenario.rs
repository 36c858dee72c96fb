//! Scenario execution: the exact oracle alongside the semiclassical
//! predictions on a shared uniform time grid.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::config::ScenarioConfig;
use crate::error::{Error, Result};
use crate::fock::{prepare_state, BasisSpec, SectorDecomposition};
use crate::semiclassics::{validity_window, AtomicPrep, PacketFrame, PhaseSpaceEngine, ValidityWindow};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Observable {
    /// `<σ3>`.
    Sigma3,
    /// Rotating-frame field amplitude `<a_t> e^{iωt}`.
    Field,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    Oracle,
    ClosedForm,
    PhaseSpace,
    AdiabaticOnly,
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Observable::Sigma3 => "sigma3",
            Observable::Field => "field",
        })
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Oracle => "oracle",
            Provenance::ClosedForm => "closed-form",
            Provenance::PhaseSpace => "phase-space",
            Provenance::AdiabaticOnly => "adiabatic-only",
        })
    }
}

impl FromStr for Observable {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sigma3" => Ok(Observable::Sigma3),
            "field" => Ok(Observable::Field),
            other => Err(Error::config("observable", format!("unknown observable `{other}`"))),
        }
    }
}

impl FromStr for Provenance {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle" => Ok(Provenance::Oracle),
            "closed-form" => Ok(Provenance::ClosedForm),
            "phase-space" => Ok(Provenance::PhaseSpace),
            "adiabatic-only" => Ok(Provenance::AdiabaticOnly),
            other => Err(Error::config("provenance", format!("unknown provenance `{other}`"))),
        }
    }
}

/// One observable from one source on a uniform grid.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    pub observable: Observable,
    pub provenance: Provenance,
    pub times: Vec<f64>,
    pub values: Vec<C64>,
}

impl TimeSeries {
    pub fn new(observable: Observable, provenance: Provenance, times: Vec<f64>, values: Vec<C64>) -> Self {
        assert_eq!(times.len(), values.len());
        Self {
            observable,
            provenance,
            times,
            values,
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn real(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }

    pub fn label(&self) -> String {
        format!("{}/{}", self.observable, self.provenance)
    }
}

/// Everything produced by one scenario.
#[derive(Clone, Debug)]
pub struct ScenarioRun {
    pub config: ScenarioConfig,
    pub window: ValidityWindow,
    pub n_max: usize,
    pub series: Vec<TimeSeries>,
}

impl ScenarioRun {
    pub fn find(&self, observable: Observable, provenance: Provenance) -> Option<&TimeSeries> {
        self.series
            .iter()
            .find(|s| s.observable == observable && s.provenance == provenance)
    }
}

/// Uniform grid on `[0, t_max]` with at least the requested density per
/// Rabi period; `t_max = 0` gives the single sample `t = 0`.
pub fn time_grid(config: &ScenarioConfig, window: &ValidityWindow) -> Vec<f64> {
    let t_max = config.time.t_max_collapse_units * window.t_collapse;
    if t_max == 0.0 {
        return vec![0.0];
    }
    let dt = window.rabi_period / config.time.samples_per_rabi_period as f64;
    let steps = (t_max / dt).ceil() as usize;
    (0..=steps).map(|i| t_max * i as f64 / steps as f64).collect()
}

pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioRun> {
    let params = config.params;
    let prep = config.prep;
    let window = validity_window(&params, &prep)?;
    let times = time_grid(config, &window);

    let basis = match config.n_max {
        Some(n) => BasisSpec::new(n),
        None => BasisSpec::for_mean_photons(prep.mean_photons()),
    };
    let psi0 = prepare_state(&prep, basis, &params)?;
    let sectors = SectorDecomposition::new(basis, &params);
    let oracle = times
        .par_iter()
        .map(|&t| {
            let psi = sectors.propagate(&psi0, t)?;
            Ok((psi.sigma3(), psi.field() * C64::from_polar(1.0, params.omega * t)))
        })
        .collect::<Result<Vec<_>>>()?;

    let frame = PacketFrame::new(&prep, &params)?;
    let engine = if config.observables.phase_space {
        Some(PhaseSpaceEngine::new(params, prep, config.quadrature)?)
    } else {
        None
    };
    let phase_space = |f: &(dyn Fn(&PhaseSpaceEngine, f64) -> Result<C64> + Sync)| -> Result<Option<Vec<C64>>> {
        engine
            .as_ref()
            .map(|e| times.par_iter().map(|&t| f(e, t)).collect::<Result<Vec<_>>>())
            .transpose()
    };
    let series_of = |observable, provenance, values: Vec<C64>| TimeSeries::new(observable, provenance, times.clone(), values);

    let mut series = Vec::new();
    if config.observables.sigma3 {
        series.push(series_of(
            Observable::Sigma3,
            Provenance::Oracle,
            oracle.iter().map(|o| C64::new(o.0, 0.0)).collect(),
        ));
        let closed: Vec<C64> = times
            .iter()
            .map(|&t| match prep.atomic {
                AtomicPrep::Excited => frame.collapse(t),
                AtomicPrep::PlusDressed => frame.dressed_polarization(t),
            })
            .map(|v| C64::new(v, 0.0))
            .collect();
        series.push(series_of(Observable::Sigma3, Provenance::ClosedForm, closed));
        if let Some(values) = phase_space(&|e, t| Ok(C64::new(e.sigma3(t)?, 0.0)))? {
            series.push(series_of(Observable::Sigma3, Provenance::PhaseSpace, values));
        }
    }
    if config.observables.field {
        series.push(series_of(Observable::Field, Provenance::Oracle, oracle.iter().map(|o| o.1).collect()));
        series.push(series_of(
            Observable::Field,
            Provenance::ClosedForm,
            times.iter().map(|&t| frame.field(t)).collect(),
        ));
        series.push(series_of(
            Observable::Field,
            Provenance::AdiabaticOnly,
            times.iter().map(|&t| frame.field_adiabatic(t)).collect(),
        ));
        if let Some(values) = phase_space(&|e, t| e.field_rotating(t))? {
            series.push(series_of(Observable::Field, Provenance::PhaseSpace, values));
        }
    }

    Ok(ScenarioRun {
        config: config.clone(),
        window,
        n_max: basis.n_max(),
        series,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_length_window_gives_initial_values() {
        let mut cfg = ScenarioConfig::preset("fig2-top").unwrap();
        cfg.time.t_max_collapse_units = 0.0;
        cfg.observables.sigma3 = true;
        cfg.observables.phase_space = true;
        let run = run_scenario(&cfg).unwrap();
        for s in &run.series {
            assert_eq!(s.times, vec![0.0]);
            let want = match s.observable {
                Observable::Sigma3 => C64::new(1.0, 0.0),
                Observable::Field => cfg.prep.alpha0,
            };
            assert!((s.values[0] - want).norm() < 1e-9, "{}: {}", s.label(), s.values[0]);
        }
        assert_eq!(run.series.len(), 7);
    }

    #[test]
    fn grid_is_uniform_and_dense_enough() {
        let cfg = ScenarioConfig::preset("fig1-bottom").unwrap();
        let window = validity_window(&cfg.params, &cfg.prep).unwrap();
        let t = time_grid(&cfg, &window);
        let dt = t[1] - t[0];
        assert!(dt <= window.rabi_period / 40.0 + 1e-15);
        assert!(t.windows(2).all(|w| ((w[1] - w[0]) - dt).abs() < 1e-12));
        assert!((t.last().unwrap() - 3.0 * window.t_collapse).abs() < 1e-12);
    }

    #[test]
    fn field_preset_emits_three_series() {
        let run = run_scenario(&ScenarioConfig::preset("fig2-top").unwrap()).unwrap();
        let kinds: Vec<_> = run.series.iter().map(|s| s.provenance).collect();
        assert_eq!(kinds, [Provenance::Oracle, Provenance::ClosedForm, Provenance::AdiabaticOnly]);
        assert!(run.series.iter().all(|s| s.observable == Observable::Field));
    }

    #[test]
    fn truncation_error_reports_the_needed_cutoff() {
        let mut cfg = ScenarioConfig::preset("fig1-bottom").unwrap();
        cfg.n_max = Some(60);
        assert!(matches!(run_scenario(&cfg), Err(Error::Truncation { required: 141, .. })));
    }

    #[test]
    fn names_roundtrip() {
        for p in [Provenance::Oracle, Provenance::ClosedForm, Provenance::PhaseSpace, Provenance::AdiabaticOnly] {
            assert_eq!(p.to_string().parse::<Provenance>().unwrap(), p);
        }
        for o in [Observable::Sigma3, Observable::Field] {
            assert_eq!(o.to_string().parse::<Observable>().unwrap(), o);
        }
    }
}
