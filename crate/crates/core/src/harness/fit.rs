//! Collapse-envelope fits and log-log power laws.

use levenberg_marquardt::{LeastSquaresProblem, LevenbergMarquardt};
use nalgebra::{storage::Owned, Dyn, OMatrix, OVector, U5};

use super::scenario::TimeSeries;
use crate::error::{Error, Result};

/// Extrema required before the oscillation decays below this fraction of
/// its initial amplitude.
pub const MIN_EXTREMA: usize = 5;
const DECAY_FRACTION: f64 = 0.05;

/// `offset + amplitude cos(frequency t + phase) exp(-t² / (2 t_collapse²))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CollapseFit {
    pub t_collapse: f64,
    /// Gaussian rate `1 / t_collapse`.
    pub width: f64,
    pub amplitude: f64,
    pub frequency: f64,
    pub phase: f64,
    pub offset: f64,
    /// RMS residual relative to `|amplitude|`.
    pub residual: f64,
}

fn model(p: &[f64; 5], t: f64) -> (f64, [f64; 5]) {
    let [offset, amp, freq, phase, tc] = *p;
    let env = (-0.5 * (t / tc).powi(2)).exp();
    let (sn, cs) = (freq * t + phase).sin_cos();
    let value = offset + amp * cs * env;
    let grad = [
        1.0,
        cs * env,
        -amp * sn * env * t,
        -amp * sn * env,
        amp * cs * env * t * t / (tc * tc * tc),
    ];
    (value, grad)
}

struct CollapseProblem<'a> {
    times: &'a [f64],
    values: &'a [f64],
    p: OVector<f64, U5>,
}

impl CollapseProblem<'_> {
    fn params(&self) -> [f64; 5] {
        [self.p[0], self.p[1], self.p[2], self.p[3], self.p[4]]
    }
}

impl LeastSquaresProblem<f64, Dyn, U5> for CollapseProblem<'_> {
    type ResidualStorage = Owned<f64, Dyn>;
    type JacobianStorage = Owned<f64, Dyn, U5>;
    type ParameterStorage = Owned<f64, U5>;

    fn set_params(&mut self, x: &OVector<f64, U5>) {
        self.p.copy_from(x);
    }

    fn params(&self) -> OVector<f64, U5> {
        self.p
    }

    fn residuals(&self) -> Option<OVector<f64, Dyn>> {
        let p = CollapseProblem::params(self);
        let r = self.times.iter().zip(self.values).map(|(&t, &v)| model(&p, t).0 - v);
        Some(OVector::<f64, Dyn>::from_iterator(self.times.len(), r))
    }

    fn jacobian(&self) -> Option<OMatrix<f64, Dyn, U5>> {
        let p = CollapseProblem::params(self);
        let mut j = OMatrix::<f64, Dyn, U5>::zeros(self.times.len());
        for (row, &t) in self.times.iter().enumerate() {
            let (_, grad) = model(&p, t);
            for (col, g) in grad.into_iter().enumerate() {
                j[(row, col)] = g;
            }
        }
        Some(j)
    }
}

fn interior_extrema(values: &[f64]) -> Vec<usize> {
    (1..values.len().saturating_sub(1))
        .filter(|&i| (values[i] - values[i - 1]) * (values[i + 1] - values[i]) < 0.0)
        .collect()
}

/// Initial guess from the sampled extrema.
fn initial_guess(times: &[f64], values: &[f64]) -> Result<[f64; 5]> {
    let ext = interior_extrema(values);
    if ext.len() < 2 {
        return Err(Error::InsufficientExtrema {
            needed: MIN_EXTREMA,
            found: ext.len(),
        });
    }
    let pairs = ext.len().min(5) - 1;
    let offset = ext.windows(2).take(pairs).map(|w| 0.5 * (values[w[0]] + values[w[1]])).sum::<f64>() / pairs as f64;
    let half_swing = 0.5 * (values[ext[0]] - values[ext[1]]).abs();
    let start = values[0] - offset;
    let (amp, phase) = if start.abs() >= 0.5 * half_swing {
        (start, 0.0)
    } else {
        let rising = values[ext[0]] > offset;
        (half_swing, if rising { -std::f64::consts::FRAC_PI_2 } else { std::f64::consts::FRAC_PI_2 })
    };

    let reference = amp.abs().max(half_swing);
    let live: Vec<usize> = ext
        .iter()
        .copied()
        .take_while(|&i| (values[i] - offset).abs() >= DECAY_FRACTION * reference)
        .collect();
    if live.len() < MIN_EXTREMA {
        return Err(Error::InsufficientExtrema {
            needed: MIN_EXTREMA,
            found: live.len(),
        });
    }
    let freq = std::f64::consts::PI * (live.len() - 1) as f64 / (times[live[live.len() - 1]] - times[live[0]]);

    // ln|peak| = a - t² / (2 t_c²)
    let xs: Vec<f64> = live.iter().map(|&i| times[i] * times[i]).collect();
    let ys: Vec<f64> = live.iter().map(|&i| (values[i] - offset).abs().ln()).collect();
    let (slope, _) = ols(&xs, &ys);
    let span = times[times.len() - 1] - times[0];
    let tc = if slope < 0.0 { (-0.5 / slope).sqrt() } else { span };
    Ok([offset, amp, freq, phase, tc])
}

pub fn fit_collapse_values(times: &[f64], values: &[f64]) -> Result<CollapseFit> {
    if times.len() != values.len() {
        return Err(Error::GridMismatch(format!("{} times vs {} values", times.len(), values.len())));
    }
    let guess = initial_guess(times, values)?;
    let problem = CollapseProblem {
        times,
        values,
        p: OVector::<f64, U5>::from_column_slice(&guess),
    };
    let (fitted, report) = LevenbergMarquardt::new().with_tol(1e-14).minimize(problem);
    if !report.termination.was_successful() {
        return Err(Error::Fit(format!("{:?}", report.termination)));
    }
    let [offset, amplitude, frequency, phase, tc] = fitted.params();
    let tc = tc.abs();
    if !(tc.is_finite() && tc > 0.0 && amplitude != 0.0) {
        return Err(Error::Fit(format!("degenerate fit: t_c = {tc}, amplitude = {amplitude}")));
    }
    let rss = 2.0 * report.objective_function;
    Ok(CollapseFit {
        t_collapse: tc,
        width: 1.0 / tc,
        amplitude,
        frequency,
        phase,
        offset,
        residual: (rss / times.len() as f64).sqrt() / amplitude.abs(),
    })
}

/// Fits the real part of `series`.
pub fn fit_collapse(series: &TimeSeries) -> Result<CollapseFit> {
    fit_collapse_values(&series.times, &series.real())
}

/// `y = prefactor x^exponent` fitted by least squares in log-log space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerLawFit {
    pub exponent: f64,
    /// Standard error of the slope; `None` for two points.
    pub exponent_stderr: Option<f64>,
    pub prefactor: f64,
}

fn ols(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<PowerLawFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::Fit(format!("power law needs matching samples, got {} and {}", xs.len(), ys.len())));
    }
    if xs.iter().chain(ys).any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::Fit("power law needs positive finite samples".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let (slope, intercept) = ols(&lx, &ly);
    let n = lx.len();
    let stderr = (n > 2).then(|| {
        let mx = lx.iter().sum::<f64>() / n as f64;
        let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
        let ssr: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
        (ssr / (n - 2) as f64 / sxx).sqrt()
    });
    Ok(PowerLawFit {
        exponent: slope,
        exponent_stderr: stderr,
        prefactor: intercept.exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiclassics::{validity_window, AtomicPrep, PacketFrame, WavePacketPrep};
    use crate::spectral::ModelParams;

    fn synthetic(p: [f64; 5], n: usize, t_max: f64) -> (Vec<f64>, Vec<f64>) {
        let times: Vec<f64> = (0..n).map(|i| t_max * i as f64 / (n - 1) as f64).collect();
        let values = times.iter().map(|&t| model(&p, t).0).collect();
        (times, values)
    }

    #[test]
    fn recovers_a_synthetic_collapse() {
        let truth = [0.11, 0.89, 15.0, 0.0, 1.06];
        let (t, v) = synthetic(truth, 400, 3.2);
        let fit = fit_collapse_values(&t, &v).unwrap();
        assert!((fit.t_collapse - truth[4]).abs() < 1e-6 * truth[4]);
        assert!((fit.frequency - truth[2]).abs() < 1e-6 * truth[2]);
        assert!((fit.offset - truth[0]).abs() < 1e-6);
        assert!(fit.residual < 1e-8);
    }

    #[test]
    fn recovers_a_sine_like_start() {
        let truth = [0.3, 0.5, 9.0, -std::f64::consts::FRAC_PI_2, 2.0];
        let (t, v) = synthetic(truth, 600, 6.0);
        let fit = fit_collapse_values(&t, &v).unwrap();
        assert!((fit.t_collapse - 2.0).abs() < 1e-6);
    }

    #[test]
    fn matches_the_closed_form_collapse_time() {
        let p = ModelParams::from_action_scale(1.0, 1.0, 0.0, 6.25).unwrap();
        let prep = WavePacketPrep::from_mean_photons(50.0, AtomicPrep::Excited);
        let frame = PacketFrame::new(&prep, &p).unwrap();
        let w = validity_window(&p, &prep).unwrap();
        let n = (3.0 * w.t_collapse / w.rabi_period * 40.0).ceil() as usize + 1;
        let times: Vec<f64> = (0..n).map(|i| 3.0 * w.t_collapse * i as f64 / (n - 1) as f64).collect();
        let values: Vec<f64> = times.iter().map(|&t| frame.collapse(t)).collect();
        let fit = fit_collapse_values(&times, &values).unwrap();
        assert!((fit.t_collapse / w.t_collapse - 1.0).abs() < 0.01);
    }

    #[test]
    fn too_few_extrema_are_rejected() {
        // decays within about one period
        let (t, v) = synthetic([0.0, 1.0, 6.0, 0.0, 0.4], 200, 3.0);
        assert!(matches!(fit_collapse_values(&t, &v), Err(Error::InsufficientExtrema { .. })));
        let flat = vec![1.0; 50];
        assert!(matches!(fit_collapse_values(&t[..50], &flat), Err(Error::InsufficientExtrema { found: 0, .. })));
    }

    #[test]
    fn power_law_exponent_and_error() {
        let xs = [1.0, 0.25, 0.0625];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(-0.5)).collect();
        let fit = fit_power_law(&xs, &ys).unwrap();
        assert!((fit.exponent + 0.5).abs() < 1e-12);
        assert!((fit.prefactor - 3.0).abs() < 1e-12);
        assert!(fit.exponent_stderr.unwrap() < 1e-12);
        assert!(fit_power_law(&[1.0, 2.0], &[1.0, -1.0]).is_err());
        assert!(fit_power_law(&[1.0, 2.0], &[1.0, 2.0]).unwrap().exponent_stderr.is_none());
    }
}
