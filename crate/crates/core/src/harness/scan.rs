//! Scaling-law scans over `hbar` at fixed mean action, `B_R` and `lambda`.

use rayon::prelude::*;

use super::compare::compare;
use super::config::ScenarioConfig;
use super::fit::{fit_collapse, fit_power_law, PowerLawFit};
use super::scenario::{run_scenario, time_grid, Observable, Provenance};
use crate::error::{Error, Result};
use crate::semiclassics::{AtomicPrep, PacketFrame, WavePacketPrep};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanPoint {
    pub hbar: f64,
    pub mean_photons: f64,
    /// Fitted collapse time of the oracle `<σ3>`, in Rabi periods.
    pub collapse_periods: f64,
    /// `1 / (sqrt(hbar A0) Ω')` in Rabi periods.
    pub collapse_theory_periods: f64,
    /// Peak `|<σ3> - c(A0)|` of the plus-dressed closed form.
    pub dressed_peak: f64,
    /// `max |Re(<a> e^{iωt})_oracle - Re(...)_closed| / |alpha0|`.
    pub field_error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanReport {
    pub points: Vec<ScanPoint>,
    pub collapse: PowerLawFit,
    pub dressed_peak: PowerLawFit,
    pub field_error: PowerLawFit,
}

fn scan_point(base: &ScenarioConfig, hbar: f64) -> Result<ScanPoint> {
    let mut cfg = base.with_hbar(hbar)?;
    cfg.prep.atomic = AtomicPrep::Excited;
    cfg.observables.sigma3 = true;
    cfg.observables.field = true;
    cfg.observables.phase_space = false;
    let run = run_scenario(&cfg)?;
    let get = |o, p| {
        run.find(o, p)
            .ok_or_else(|| Error::Fit(format!("scenario produced no {o}/{p} series")))
    };

    let collapse = fit_collapse(get(Observable::Sigma3, Provenance::Oracle)?)?;
    let field = compare(
        get(Observable::Field, Provenance::ClosedForm)?,
        get(Observable::Field, Provenance::Oracle)?,
        None,
    )?;

    let dressed = WavePacketPrep::new(cfg.prep.alpha0, AtomicPrep::PlusDressed);
    let frame = PacketFrame::new(&dressed, &cfg.params)?;
    let dressed_peak = time_grid(&cfg, &run.window)
        .into_iter()
        .map(|t| (frame.dressed_polarization(t) - frame.frame.c).abs())
        .fold(0.0, f64::max);

    Ok(ScanPoint {
        hbar,
        mean_photons: cfg.prep.mean_photons(),
        collapse_periods: collapse.t_collapse / run.window.rabi_period,
        collapse_theory_periods: run.window.collapse_in_periods(),
        dressed_peak,
        field_error: field.real.max_abs / cfg.prep.alpha0.norm(),
    })
}

/// Runs every scan point and fits the three exponents against `hbar`.
pub fn hbar_scan(base: &ScenarioConfig, hbars: &[f64]) -> Result<ScanReport> {
    if hbars.len() < 3 {
        return Err(Error::ScanTooShort(hbars.len()));
    }
    let points = hbars
        .par_iter()
        .map(|&h| scan_point(base, h))
        .collect::<Result<Vec<_>>>()?;
    let column = |f: fn(&ScanPoint) -> f64| points.iter().map(f).collect::<Vec<_>>();
    let h = column(|p| p.hbar);
    Ok(ScanReport {
        collapse: fit_power_law(&h, &column(|p| p.collapse_periods))?,
        dressed_peak: fit_power_law(&h, &column(|p| p.dressed_peak))?,
        field_error: fit_power_law(&h, &column(|p| p.field_error))?,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_scans_are_rejected() {
        let base = ScenarioConfig::preset("fig2-top").unwrap();
        assert!(matches!(hbar_scan(&base, &[1.0, 0.5]), Err(Error::ScanTooShort(2))));
    }

    #[test]
    fn small_scan_recovers_the_collapse_exponent() {
        let base = ScenarioConfig::preset("fig2-bottom").unwrap();
        let report = hbar_scan(&base, &[1.0, 0.5, 0.25]).unwrap();
        assert_eq!(report.points.len(), 3);
        for p in &report.points {
            assert!((p.collapse_periods / p.collapse_theory_periods - 1.0).abs() < 0.1, "{p:?}");
        }
        assert!((report.collapse.exponent + 0.5).abs() < 0.1, "{:?}", report.collapse);
        assert!((report.dressed_peak.exponent - 0.5).abs() < 0.1, "{:?}", report.dressed_peak);
    }
}
