//! Scenario configuration: TOML ingestion, validation and built-in presets.

use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::semiclassics::{AtomicPrep, PhaseSpaceQuadrature, WavePacketPrep};
use crate::spectral::ModelParams;

pub const PRESETS: [&str; 4] = ["fig1-top", "fig1-bottom", "fig2-top", "fig2-bottom"];

const MIN_SAMPLES_PER_PERIOD: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGridSpec {
    /// Window length in units of the collapse time.
    pub t_max_collapse_units: f64,
    pub samples_per_rabi_period: usize,
}

impl Default for TimeGridSpec {
    fn default() -> Self {
        Self {
            t_max_collapse_units: 3.0,
            samples_per_rabi_period: MIN_SAMPLES_PER_PERIOD,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ObservableSet {
    pub sigma3: bool,
    pub field: bool,
    pub phase_space: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OutputSpec {
    pub dir: Option<PathBuf>,
    pub svg: bool,
}

/// A validated scenario.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub params: ModelParams,
    pub prep: WavePacketPrep,
    pub time: TimeGridSpec,
    pub observables: ObservableSet,
    pub quadrature: PhaseSpaceQuadrature,
    /// Photon cutoff for the oracle; chosen from the mean photon number when absent.
    pub n_max: Option<usize>,
    pub output: OutputSpec,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    name: Option<String>,
    model: RawModel,
    prep: RawPrep,
    #[serde(default)]
    time: RawTime,
    #[serde(default)]
    observables: RawObservables,
    quadrature: Option<RawQuadrature>,
    oracle: Option<RawOracle>,
    output: Option<RawOutput>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    hbar: f64,
    g: f64,
    #[serde(default)]
    omega: f64,
    b_r: Option<f64>,
    delta: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPrep {
    n_mean: Option<f64>,
    alpha0_re: Option<f64>,
    alpha0_im: Option<f64>,
    atomic: String,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawTime {
    t_max_collapse_units: Option<f64>,
    samples_per_rabi_period: Option<i64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawObservables {
    #[serde(default = "yes")]
    sigma3: bool,
    #[serde(default)]
    field: bool,
    #[serde(default)]
    phase_space: bool,
}

impl Default for RawObservables {
    fn default() -> Self {
        Self {
            sigma3: true,
            field: false,
            phase_space: false,
        }
    }
}

fn yes() -> bool {
    true
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQuadrature {
    rule: String,
    order: Option<i64>,
    samples: Option<i64>,
    seed: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOracle {
    n_max: i64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<PathBuf>,
    #[serde(default)]
    svg: bool,
}

fn positive(field: &str, x: f64) -> Result<f64> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(Error::config(field, format!("must be a positive finite number, got {x}")))
    }
}

fn finite(field: &str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::config(field, format!("must be finite, got {x}")))
    }
}

fn count(field: &str, x: i64, min: i64) -> Result<usize> {
    if x < min {
        return Err(Error::config(field, format!("must be at least {min}, got {x}")));
    }
    Ok(x as usize)
}

impl RawConfig {
    fn validate(self, fallback_name: &str) -> Result<ScenarioConfig> {
        let m = self.model;
        let hbar = positive("model.hbar", m.hbar)?;
        let g = positive("model.g", m.g)?;
        let omega = finite("model.omega", m.omega)?;
        let lambda = hbar.sqrt() * g;
        let params = match (m.b_r, m.delta) {
            (Some(b_r), None) => {
                if !(b_r >= 0.0 && b_r.is_finite()) {
                    return Err(Error::config("model.b_r", format!("must be non-negative, got {b_r}")));
                }
                ModelParams::from_action_scale(hbar, lambda, omega, b_r)
            }
            (None, Some(delta)) => ModelParams::from_detuning(hbar, lambda, omega, finite("model.delta", delta)?),
            (Some(_), Some(_)) => return Err(Error::config("model.b_r", "give exactly one of `b_r` and `delta`")),
            (None, None) => return Err(Error::config("model.b_r", "one of `b_r` or `delta` is required")),
        }
        .map_err(|e| Error::config("model", e.to_string()))?;

        let p = self.prep;
        let atomic: AtomicPrep = p.atomic.parse()?;
        let alpha0 = match (p.n_mean, p.alpha0_re, p.alpha0_im) {
            (Some(n), None, None) => {
                let n = positive("prep.n_mean", n)?;
                C64::new(n.sqrt(), 0.0)
            }
            (None, Some(re), im) => C64::new(finite("prep.alpha0_re", re)?, finite("prep.alpha0_im", im.unwrap_or(0.0))?),
            (None, None, Some(_)) => return Err(Error::config("prep.alpha0_re", "required alongside `alpha0_im`")),
            (Some(_), _, _) => return Err(Error::config("prep.n_mean", "give exactly one of `n_mean` and `alpha0_re`/`alpha0_im`")),
            (None, None, None) => return Err(Error::config("prep.n_mean", "one of `n_mean` or `alpha0_re` is required")),
        };
        if alpha0.norm_sqr() == 0.0 {
            return Err(Error::config("prep", "the coherent amplitude must be nonzero"));
        }
        let prep = WavePacketPrep::new(alpha0, atomic);

        let defaults = TimeGridSpec::default();
        let t_max = self.time.t_max_collapse_units.unwrap_or(defaults.t_max_collapse_units);
        if !(t_max >= 0.0 && t_max.is_finite()) {
            return Err(Error::config("time.t_max_collapse_units", format!("must be non-negative, got {t_max}")));
        }
        let samples = match self.time.samples_per_rabi_period {
            Some(s) => count("time.samples_per_rabi_period", s, MIN_SAMPLES_PER_PERIOD as i64)?,
            None => defaults.samples_per_rabi_period,
        };

        let o = self.observables;
        if !o.sigma3 && !o.field {
            return Err(Error::config("observables", "request at least one of `sigma3` and `field`"));
        }
        if o.field && atomic != AtomicPrep::Excited {
            return Err(Error::config("observables.field", "the field closed form needs `prep.atomic = \"excited\"`"));
        }

        let quadrature = match self.quadrature {
            None => PhaseSpaceQuadrature::default(),
            Some(q) => match q.rule.as_str() {
                "gauss-hermite" => PhaseSpaceQuadrature::GaussHermite {
                    order: count("quadrature.order", q.order.unwrap_or(40), 2)?,
                },
                "monte-carlo" => PhaseSpaceQuadrature::MonteCarlo {
                    samples: count("quadrature.samples", q.samples.unwrap_or(1_000_000), 1)?,
                    seed: q
                        .seed
                        .ok_or_else(|| Error::config("quadrature.seed", "Monte-Carlo sampling needs an explicit seed"))?,
                },
                other => {
                    return Err(Error::config(
                        "quadrature.rule",
                        format!("expected `gauss-hermite` or `monte-carlo`, got `{other}`"),
                    ))
                }
            },
        };

        let n_max = self.oracle.map(|o| count("oracle.n_max", o.n_max, 1)).transpose()?;
        let output = self
            .output
            .map(|o| OutputSpec { dir: o.dir, svg: o.svg })
            .unwrap_or_default();

        Ok(ScenarioConfig {
            name: self.name.unwrap_or_else(|| fallback_name.to_string()),
            params,
            prep,
            time: TimeGridSpec {
                t_max_collapse_units: t_max,
                samples_per_rabi_period: samples,
            },
            observables: ObservableSet {
                sigma3: o.sigma3,
                field: o.field,
                phase_space: o.phase_space,
            },
            quadrature,
            n_max,
            output,
        })
    }
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str, fallback_name: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let field = e.message().split('`').nth(1).unwrap_or("config").to_string();
            Error::config(field, e.message().trim().to_string())
        })?;
        raw.validate(fallback_name)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario");
        Self::from_toml_str(&text, stem)
    }

    /// Built-in figure scenarios, all with `hbar = g = 1`, `omega = 0`, `B_R = 6.25`.
    pub fn preset(name: &str) -> Result<Self> {
        let (n_mean, atomic, field) = match name {
            "fig1-top" => (8.0, "plus-dressed", false),
            "fig1-bottom" => (50.0, "plus-dressed", false),
            "fig2-top" => (4.0, "excited", true),
            "fig2-bottom" => (8.0, "excited", true),
            other => {
                return Err(Error::config(
                    "preset",
                    format!("unknown preset `{other}`; available: {}", PRESETS.join(", ")),
                ))
            }
        };
        let text = format!(
            "[model]\nhbar = 1.0\ng = 1.0\nomega = 0.0\nb_r = 6.25\n\
             [prep]\nn_mean = {n_mean:?}\natomic = \"{atomic}\"\n\
             [observables]\nsigma3 = {}\nfield = {field}\n",
            !field
        );
        Self::from_toml_str(&text, name)
    }

    /// Same scenario at another `hbar`, holding the mean action, `B_R` and
    /// `lambda = sqrt(hbar) g` fixed; the coherent amplitude keeps its phase.
    pub fn with_hbar(&self, hbar: f64) -> Result<Self> {
        let hbar = positive("hbar", hbar)?;
        let p = &self.params;
        let params = ModelParams::from_action_scale(hbar, p.lambda(), p.omega, p.b_r())
            .map_err(|e| Error::config("hbar", e.to_string()))?;
        let action = self.prep.action(p.hbar);
        let scaled = WavePacketPrep::from_action(action, hbar, self.prep.atomic)
            .map_err(|e| Error::config("hbar", e.to_string()))?;
        let phase = if self.prep.alpha0.norm() > 0.0 { self.prep.alpha0.arg() } else { 0.0 };
        Ok(Self {
            name: format!("{}@hbar={hbar}", self.name),
            params,
            prep: WavePacketPrep::new(scaled.alpha0 * C64::from_polar(1.0, phase), self.prep.atomic),
            n_max: None,
            ..self.clone()
        })
    }
}
