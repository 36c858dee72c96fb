//! Gaussian phase-space averages of quasi-flow symbols.
//!
//! The coherent preparation has Wigner function
//! `2 w exp(-2|β - β0|²/ħ)` with `β0 = sqrt(ħ) α0`, so each quadrature of
//! `β` is normal with variance `ħ/4`. Weights are normalized so the
//! identity symbol integrates to one.

use std::fmt;
use std::num::NonZeroUsize;

use gauss_quad::hermite::GaussHermite;
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use super::prep::WavePacketPrep;
use super::quasiflow::{FieldFlow, QuasiFlowSymbol, Sigma3Flow};
use crate::error::{Error, Result};
use crate::spectral::{ModelParams, PolarizationMatrix};

const NORMALIZATION_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseSpaceQuadrature {
    /// Tensor Gauss-Hermite rule with `order` nodes per axis.
    GaussHermite { order: usize },
    /// Seeded Monte-Carlo sampling of the Gaussian.
    MonteCarlo { samples: usize, seed: u64 },
}

impl Default for PhaseSpaceQuadrature {
    fn default() -> Self {
        PhaseSpaceQuadrature::GaussHermite { order: 40 }
    }
}

impl fmt::Display for PhaseSpaceQuadrature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhaseSpaceQuadrature::GaussHermite { order } => write!(f, "gauss-hermite({order})"),
            PhaseSpaceQuadrature::MonteCarlo { samples, seed } => write!(f, "monte-carlo({samples}, seed {seed})"),
        }
    }
}

/// Weighted sample points of the coherent-state Gaussian.
#[derive(Clone, Debug)]
pub struct PhaseSpaceGrid {
    pub rule: PhaseSpaceQuadrature,
    pub center: C64,
    pub hbar: f64,
    points: Vec<(C64, f64)>,
}

impl PhaseSpaceGrid {
    /// Builds the grid and runs the normalization self-check.
    pub fn new(rule: PhaseSpaceQuadrature, center: C64, hbar: f64) -> Result<Self> {
        let points = match rule {
            PhaseSpaceQuadrature::GaussHermite { order } => {
                let order = NonZeroUsize::new(order)
                    .ok_or_else(|| Error::Quadrature("Gauss-Hermite order must be positive".into()))?;
                let rule = GaussHermite::new(order);
                let pairs = rule.as_node_weight_pairs();
                let scale = (hbar / 2.0).sqrt();
                let norm = std::f64::consts::PI;
                let mut points = Vec::with_capacity(pairs.len() * pairs.len());
                for &(x, wx) in pairs {
                    for &(y, wy) in pairs {
                        points.push((center + C64::new(x, y) * scale, wx * wy / norm));
                    }
                }
                points
            }
            PhaseSpaceQuadrature::MonteCarlo { samples, seed } => {
                if samples == 0 {
                    return Err(Error::Quadrature("Monte-Carlo sample count must be positive".into()));
                }
                let normal = Normal::new(0.0, (hbar / 4.0).sqrt())
                    .map_err(|e| Error::Quadrature(format!("invalid width: {e}")))?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let w = 1.0 / samples as f64;
                (0..samples)
                    .map(|_| (center + C64::new(normal.sample(&mut rng), normal.sample(&mut rng)), w))
                    .collect()
            }
        };
        let grid = Self {
            rule,
            center,
            hbar,
            points,
        };
        grid.self_check()?;
        Ok(grid)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[(C64, f64)] {
        &self.points
    }

    fn self_check(&self) -> Result<()> {
        let total: f64 = self.points.iter().map(|p| p.1).sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Quadrature(format!(
                "{}: identity integrates to {total}, off by {:e}",
                self.rule,
                total - 1.0
            )));
        }
        if let PhaseSpaceQuadrature::GaussHermite { .. } = self.rule {
            // exact for order >= 2
            let spread: f64 = self.points.iter().map(|(b, w)| w * (b - self.center).norm_sqr()).sum();
            let want = 0.5 * self.hbar;
            if (spread - want).abs() > NORMALIZATION_TOL * want.max(1.0) {
                return Err(Error::Quadrature(format!(
                    "{}: order too low, second moment {spread} instead of {want}",
                    self.rule
                )));
            }
        }
        Ok(())
    }

    /// Weighted sum of `f` over the grid; evaluation runs in parallel, the
    /// summation order is fixed.
    pub fn integrate<F>(&self, f: F) -> Result<C64>
    where
        F: Fn(C64) -> Result<C64> + Sync,
    {
        let values = self
            .points
            .par_iter()
            .map(|&(beta, w)| f(beta).map(|v| v * w))
            .collect::<Result<Vec<_>>>()?;
        Ok(values.into_iter().sum())
    }
}

/// Phase-space expectation engine for one preparation.
#[derive(Clone, Debug)]
pub struct PhaseSpaceEngine {
    pub params: ModelParams,
    pub prep: WavePacketPrep,
    pub polarization: PolarizationMatrix,
    pub grid: PhaseSpaceGrid,
}

impl PhaseSpaceEngine {
    pub fn new(params: ModelParams, prep: WavePacketPrep, rule: PhaseSpaceQuadrature) -> Result<Self> {
        let center = prep.alpha0 * params.hbar.sqrt();
        Ok(Self {
            params,
            prep,
            polarization: prep.polarization(&params)?,
            grid: PhaseSpaceGrid::new(rule, center, params.hbar)?,
        })
    }

    /// `∫ tr[L(β, t) w] dμ(β)`.
    pub fn expectation(&self, symbol: &dyn QuasiFlowSymbol, t: f64) -> Result<C64> {
        let w = self.polarization;
        self.grid.integrate(|beta| Ok((symbol.eval(beta, t)? * w).trace()))
    }

    /// `<σ3>(t)`.
    pub fn sigma3(&self, t: f64) -> Result<f64> {
        Ok(self.expectation(&Sigma3Flow(self.params), t)?.re)
    }

    /// Rotating-frame field `<a_t> e^{iωt} ≈ <b_t> e^{iωt} / sqrt(ħ)`.
    pub fn field_rotating(&self, t: f64) -> Result<C64> {
        let b = self.expectation(&FieldFlow(self.params), t)?;
        Ok(b * C64::from_polar(1.0, self.params.omega * t) / self.params.hbar.sqrt())
    }
}

pub fn wigner_expectation(
    symbol: &dyn QuasiFlowSymbol,
    prep: &WavePacketPrep,
    t: f64,
    quadrature: PhaseSpaceQuadrature,
    params: &ModelParams,
) -> Result<C64> {
    PhaseSpaceEngine::new(*params, *prep, quadrature)?.expectation(symbol, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiclassics::prep::AtomicPrep;
    use crate::semiclassics::quasiflow::{ActionSymbol, ConstantSymbol};
    use crate::semiclassics::PacketFrame;
    use approx::assert_relative_eq;

    fn detuned() -> ModelParams {
        ModelParams::from_action_scale(1.0, 1.0, 0.0, 6.25).unwrap()
    }

    fn excited(n: f64) -> WavePacketPrep {
        WavePacketPrep::from_mean_photons(n, AtomicPrep::Excited)
    }

    #[test]
    fn constant_polarization_of_excited_atom() {
        let z = wigner_expectation(
            &ConstantSymbol(PolarizationMatrix::tau3()),
            &excited(8.0),
            0.0,
            PhaseSpaceQuadrature::default(),
            &detuned(),
        )
        .unwrap();
        assert!((z - C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn action_symbol_reproduces_mean_action() {
        let prep = WavePacketPrep::new(C64::new(5.0, -3.0), AtomicPrep::PlusDressed);
        for hbar in [1.0, 0.1] {
            let p = ModelParams::from_action_scale(hbar, 1.0, 0.0, 6.25).unwrap();
            let z = wigner_expectation(&ActionSymbol, &prep, 0.0, PhaseSpaceQuadrature::default(), &p).unwrap();
            assert_relative_eq!(z.re, prep.action(hbar), max_relative = 1e-12);
        }
    }

    #[test]
    fn low_order_rule_is_rejected() {
        let err = PhaseSpaceGrid::new(PhaseSpaceQuadrature::GaussHermite { order: 1 }, C64::new(1.0, 0.0), 1.0);
        assert!(matches!(err, Err(Error::Quadrature(_))));
        assert!(PhaseSpaceGrid::new(PhaseSpaceQuadrature::GaussHermite { order: 0 }, C64::new(1.0, 0.0), 1.0).is_err());
        assert!(PhaseSpaceGrid::new(PhaseSpaceQuadrature::MonteCarlo { samples: 0, seed: 1 }, C64::new(1.0, 0.0), 1.0).is_err());
    }

    #[test]
    fn monte_carlo_is_seeded_and_agrees() {
        let p = detuned();
        let rule = PhaseSpaceQuadrature::MonteCarlo {
            samples: 200_000,
            seed: 7,
        };
        let a = PhaseSpaceEngine::new(p, excited(20.0), rule).unwrap();
        let b = PhaseSpaceEngine::new(p, excited(20.0), rule).unwrap();
        let gh = PhaseSpaceEngine::new(p, excited(20.0), PhaseSpaceQuadrature::default()).unwrap();
        let t = 1.3;
        assert_eq!(a.sigma3(t).unwrap(), b.sigma3(t).unwrap());
        assert!((a.sigma3(t).unwrap() - gh.sigma3(t).unwrap()).abs() < 0.01);
    }

    #[test]
    fn initial_field_is_the_coherent_amplitude() {
        let prep = WavePacketPrep::new(C64::new(2.0, 1.0), AtomicPrep::Excited);
        let engine = PhaseSpaceEngine::new(detuned(), prep, PhaseSpaceQuadrature::default()).unwrap();
        assert!((engine.field_rotating(0.0).unwrap() - prep.alpha0).norm() < 1e-12);
    }

    #[test]
    fn quadrature_tracks_the_collapse_formula() {
        // the closed form is the Gaussian integral of the same symbol to
        // leading order; the gap shrinks like sqrt(hbar / A0)
        let a0 = 50.5;
        let mut gaps = Vec::new();
        for &hbar in &[1.0, 0.25] {
            let p = ModelParams::from_action_scale(hbar, 1.0, 0.0, 6.25).unwrap();
            let prep = WavePacketPrep::from_action(a0, hbar, AtomicPrep::Excited).unwrap();
            let engine = PhaseSpaceEngine::new(p, prep, PhaseSpaceQuadrature::default()).unwrap();
            let frame = PacketFrame::new(&prep, &p).unwrap();
            let t_c = 1.0 / ((hbar * a0).sqrt() * frame.frame.rabi_slope);
            let gap = (0..200)
                .map(|i| 3.0 * t_c * i as f64 / 199.0)
                .map(|t| (engine.sigma3(t).unwrap() - frame.collapse(t)).abs())
                .fold(0.0, f64::max);
            gaps.push(gap);
        }
        assert!(gaps[0] < 0.02, "{gaps:?}");
        assert!(gaps[1] < 0.6 * gaps[0], "{gaps:?}");
    }
}
