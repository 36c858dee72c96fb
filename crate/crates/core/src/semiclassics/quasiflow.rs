//! Leading-order phase-space symbols of the Heisenberg-evolved polarization
//! and polariton amplitude, with the action operator replaced by `|β|²`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::spectral::{dressed_energy, mixing, projection_from_mixing, Branch, ModelParams, PolarizationMatrix};

/// A 2x2 matrix-valued function on polariton phase space and time.
pub trait QuasiFlowSymbol: Sync {
    fn eval(&self, beta: C64, t: f64) -> Result<PolarizationMatrix>;
}

/// Time-independent symbol.
#[derive(Clone, Copy, Debug)]
pub struct ConstantSymbol(pub PolarizationMatrix);

impl QuasiFlowSymbol for ConstantSymbol {
    fn eval(&self, _beta: C64, _t: f64) -> Result<PolarizationMatrix> {
        Ok(self.0)
    }
}

/// Symbol of the action operator, `|β|²` times the identity.
#[derive(Clone, Copy, Debug)]
pub struct ActionSymbol;

impl QuasiFlowSymbol for ActionSymbol {
    fn eval(&self, beta: C64, _t: f64) -> Result<PolarizationMatrix> {
        Ok(PolarizationMatrix::identity() * beta.norm_sqr())
    }
}

/// Heisenberg-evolved `τ3`.
#[derive(Clone, Copy, Debug)]
pub struct Sigma3Flow(pub ModelParams);

impl QuasiFlowSymbol for Sigma3Flow {
    fn eval(&self, beta: C64, t: f64) -> Result<PolarizationMatrix> {
        quasiflow_sigma3(beta, t, &self.0)
    }
}

/// Heisenberg-evolved polariton amplitude `b`.
#[derive(Clone, Copy, Debug)]
pub struct FieldFlow(pub ModelParams);

impl QuasiFlowSymbol for FieldFlow {
    fn eval(&self, beta: C64, t: f64) -> Result<PolarizationMatrix> {
        quasiflow_b(beta, t, &self.0)
    }
}

fn rabi(b: f64, params: &ModelParams) -> Result<f64> {
    Ok(2.0 * dressed_energy(b, params)? / params.hbar)
}

/// `τ3(t) = c (s τ1 + c τ3) - (s c τ1 - s² τ3) cos(Ωt) + s τ2 sin(Ωt)`
/// at `B = |β|²`.
pub fn quasiflow_sigma3(beta: C64, t: f64, params: &ModelParams) -> Result<PolarizationMatrix> {
    let b = beta.norm_sqr();
    let (c, s) = mixing(b, params)?;
    let (sn, cs) = (rabi(b, params)? * t).sin_cos();
    let m = [
        [c * c + s * s * cs, c * s * (1.0 - cs)],
        [c * s * (1.0 - cs), -(c * c + s * s * cs)],
    ];
    Ok(PolarizationMatrix::real(m) + PolarizationMatrix::tau2() * (s * sn))
}

/// `[(P+ + P- e^{-iΩt}) P+(B+ħ) e^{-iω̃t} + (P+ e^{iΩt} + P-) P-(B+ħ) e^{iω̃t}] e^{-iωt} β`
/// at `B = |β|²`, with the finite-difference phase frequency
/// `ω̃ = (ε(B+ħ) - ε(B)) / ħ`.
pub fn quasiflow_b(beta: C64, t: f64, params: &ModelParams) -> Result<PolarizationMatrix> {
    let hbar = params.hbar;
    let b = beta.norm_sqr();
    let (c, s) = mixing(b, params)?;
    let (c1, s1) = mixing(b + hbar, params)?;
    let omega_r = rabi(b, params)?;
    let phase = (dressed_energy(b + hbar, params)? - dressed_energy(b, params)?) / hbar;

    let here = |br| projection_from_mixing(c, s, br);
    let next = |br| projection_from_mixing(c1, s1, br);
    let e = |x: f64| C64::from_polar(1.0, x * t);
    let stay_plus = here(Branch::Plus) + here(Branch::Minus) * e(-omega_r);
    let stay_minus = here(Branch::Plus) * e(omega_r) + here(Branch::Minus);
    let sum = stay_plus * next(Branch::Plus) * e(-phase) + stay_minus * next(Branch::Minus) * e(phase);
    Ok(sum * (e(-params.omega) * beta))
}

/// Rejects matrices that are not Hermitian to `tol` entrywise.
pub fn check_hermitian(m: &PolarizationMatrix, tol: f64) -> Result<()> {
    let r = m.max_abs_diff(&m.dagger());
    if r > tol {
        return Err(Error::InvalidParams(format!("symbol is not Hermitian: residual {r:e}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{dressed_projection, frequencies};
    use proptest::prelude::*;

    fn detuned(hbar: f64) -> ModelParams {
        ModelParams::from_action_scale(hbar, 1.0, 0.4, 6.25).unwrap()
    }

    #[test]
    fn initial_symbols() {
        let p = detuned(1.0);
        let beta = C64::new(2.0, -1.0);
        assert!(quasiflow_sigma3(beta, 0.0, &p).unwrap().max_abs_diff(&PolarizationMatrix::tau3()) < 1e-15);
        let b0 = quasiflow_b(beta, 0.0, &p).unwrap();
        assert!(b0.max_abs_diff(&(PolarizationMatrix::identity() * beta)) < 1e-14);
    }

    #[test]
    fn classical_limit_phase_frequency() {
        // as hbar -> 0 at fixed B the diagonal blocks rotate at eps'(B)
        let b: f64 = 20.0;
        let t = 3.0;
        for &hbar in &[1e-3, 1e-5] {
            let p = detuned(hbar);
            let beta = C64::new(b.sqrt(), 0.0);
            let m = quasiflow_b(beta, t, &p).unwrap() * (C64::from_polar(1.0, p.omega * t) / beta);
            let frame = frequencies(b, &p).unwrap();
            let plus = dressed_projection(b, Branch::Plus, &p).unwrap();
            let got = (plus * m * plus).trace();
            let want = C64::from_polar(1.0, -frame.phase_freq * t);
            assert!((got - want).norm() < 20.0 * hbar, "{got} vs {want}");
        }
    }

    #[test]
    fn resonant_vacuum_polarization_stays_defined() {
        // B = 0 is regular away from resonance and singular at it
        assert!(quasiflow_sigma3(C64::new(0.0, 0.0), 1.0, &detuned(1.0)).is_ok());
        let res = ModelParams::from_action_scale(1.0, 1.0, 0.0, 0.0).unwrap();
        assert!(quasiflow_sigma3(C64::new(0.0, 0.0), 1.0, &res).is_err());
    }

    fn arb_beta() -> impl Strategy<Value = C64> {
        (-8.0..8.0f64, -8.0..8.0f64)
            .prop_filter("nonzero", |(x, y)| x * x + y * y > 1e-6)
            .prop_map(|(x, y)| C64::new(x, y))
    }

    proptest! {
        #[test]
        fn sigma3_symbol_is_hermitian(beta in arb_beta(), t in -50.0..50.0f64, hbar in 0.01..1.0f64) {
            let m = quasiflow_sigma3(beta, t, &detuned(hbar)).unwrap();
            prop_assert!(check_hermitian(&m, 1e-13).is_ok());
        }

        #[test]
        fn dressed_diagonal_is_conserved(beta in arb_beta(), t in -50.0..50.0f64, hbar in 0.01..1.0f64) {
            let p = detuned(hbar);
            let b = beta.norm_sqr();
            let m0 = quasiflow_sigma3(beta, 0.0, &p).unwrap();
            let mt = quasiflow_sigma3(beta, t, &p).unwrap();
            for br in [Branch::Plus, Branch::Minus] {
                let proj = dressed_projection(b, br, &p).unwrap();
                prop_assert!((proj * mt * proj).max_abs_diff(&(proj * m0 * proj)) < 1e-13);
                prop_assert!(((mt * proj).trace() - (m0 * proj).trace()).norm() < 1e-13);
            }
        }

        #[test]
        fn field_symbol_is_bounded(beta in arb_beta(), t in -50.0..50.0f64, hbar in 0.01..1.0f64) {
            let m = quasiflow_b(beta, t, &detuned(hbar)).unwrap();
            prop_assert!(m.max_abs() <= beta.norm() * (1.0 + 1e-12));
        }
    }
}
