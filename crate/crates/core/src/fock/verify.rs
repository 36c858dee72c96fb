//! Machine-precision checks of the polariton operator identities on the
//! truncated space.
//!
//! Identities involving `b` or `tau` are compared only on the interior
//! sectors `1..n_max` (see [`BasisSpec::is_interior`]); the ladder operators
//! are cut off above that.

use num_complex::Complex64 as C64;

use super::basis::BasisSpec;
use super::operators::{build_operators, OperatorMatrix, OperatorSet};
use super::sectors::SectorDecomposition;
use crate::error::{Error, Result};
use crate::spectral::{frequencies, Branch, DressedFrame, ModelParams};

#[derive(Clone, Debug, PartialEq)]
pub struct NormalFormReport {
    /// Max entrywise `|H - (omega B + delta tau3 + lambda sqrt(B) tau1)|` on
    /// the interior.
    pub residual: f64,
    /// Max entry of `H`, the scale for `residual`.
    pub hamiltonian_scale: f64,
    /// `|<g,0|H|g,0> - 0|`; the normal form drops the ground-state energy.
    pub dark_discrepancy: f64,
    /// Largest off-diagonal entry of `B = b b†` on the interior.
    pub action_offdiag: f64,
    /// Max `|B - hbar (a†a + σ†σ)|` on the interior.
    pub action_vs_excitation: f64,
    /// `max |[H, a†a - σ†σ]|`, nonzero whenever g > 0.
    pub signed_count_commutator: f64,
}

pub fn verify_normal_form(basis: BasisSpec, params: &ModelParams) -> NormalFormReport {
    let ops = build_operators(basis, params);
    normal_form_report(&ops, params)
}

fn normal_form_report(ops: &OperatorSet, params: &ModelParams) -> NormalFormReport {
    let basis = ops.basis;
    let interior = |i: usize| basis.is_interior(i);
    let dim = basis.dim();

    let mut offdiag = 0.0f64;
    for i in (0..dim).filter(|&i| interior(i)) {
        for j in (0..dim).filter(|&j| interior(j) && j != i) {
            offdiag = offdiag.max(ops.b_hat.data[[i, j]].norm());
        }
    }
    // B is diagonal, so its positive root is the entrywise root of the diagonal.
    let sqrt_b = OperatorMatrix::diagonal("sqrt(B)", dim, |i| ops.b_hat.data[[i, i]].re.max(0.0).sqrt().into());
    let normal_form = ops
        .b_hat
        .scale(params.omega)
        .plus(&ops.tau3.scale(params.delta()))
        .plus(&sqrt_b.matmul(&ops.tau1).scale(params.lambda()));
    let dark = basis.dark_index();
    let scaled_count = ops.n_excitation.scale(params.hbar);
    let signed_count = ops.n_photon.minus(&ops.sigma_dag.matmul(&ops.sigma));

    NormalFormReport {
        residual: ops.hamiltonian.masked_max_diff(&normal_form, interior),
        hamiltonian_scale: ops.hamiltonian.max_abs(),
        dark_discrepancy: (ops.hamiltonian.data[[dark, dark]] - normal_form.data[[dark, dark]]).norm(),
        action_offdiag: offdiag,
        action_vs_excitation: ops.b_hat.masked_max_diff(&scaled_count, interior),
        signed_count_commutator: ops.hamiltonian.commutator(&signed_count).max_abs(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraReport {
    /// `max |τ²|`.
    pub tau_nilpotent: f64,
    /// `{τ, τ†} + |g,0><g,0| - 1` on the interior plus the dark state.
    pub tau_anticommutator: f64,
    /// `[b, B] - hbar b`.
    pub b_action_commutator: f64,
    pub b_tau_commutator: f64,
    pub b_tau_dag_commutator: f64,
    /// `[H, a†a + σ†σ]` over the whole truncated space.
    pub hamiltonian_excitation_commutator: f64,
}

impl AlgebraReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.tau_nilpotent,
            self.tau_anticommutator,
            self.b_action_commutator,
            self.b_tau_commutator,
            self.b_tau_dag_commutator,
            self.hamiltonian_excitation_commutator,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn verify_polariton_algebra(basis: BasisSpec, params: &ModelParams) -> AlgebraReport {
    algebra_report(&build_operators(basis, params), params)
}

fn algebra_report(ops: &OperatorSet, params: &ModelParams) -> AlgebraReport {
    let basis = ops.basis;
    let dim = basis.dim();
    let interior = |i: usize| basis.is_interior(i);
    let dark = basis.dark_index();
    let zero = OperatorMatrix::zeros("0", dim);

    let anti = ops.tau.anticommutator(&ops.tau_dag).plus(&ops.dark_projector);
    AlgebraReport {
        tau_nilpotent: ops.tau.matmul(&ops.tau).max_abs(),
        tau_anticommutator: anti.masked_max_diff(&OperatorMatrix::identity(dim), |i| interior(i) || i == dark),
        b_action_commutator: ops
            .b
            .commutator(&ops.b_hat)
            .masked_max_diff(&ops.b.scale(params.hbar), interior),
        b_tau_commutator: ops.b.commutator(&ops.tau).masked_max_diff(&zero, interior),
        b_tau_dag_commutator: ops.b.commutator(&ops.tau_dag).masked_max_diff(&zero, interior),
        hamiltonian_excitation_commutator: ops.hamiltonian.commutator(&ops.n_excitation).max_abs(),
    }
}

/// Residuals of the closed-form Heisenberg flows against `U† X U`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowReport {
    pub tau3_residual: f64,
    pub b_residual: f64,
    /// Sector and time of the largest residual seen.
    pub worst_sector: usize,
    pub worst_time: f64,
}

/// Diagonal operator `f(frame at B = hbar k)` on sectors `k >= 1`, zero on
/// the dark state. `shift` evaluates at `B + shift * hbar`.
fn action_function(
    basis: BasisSpec,
    params: &ModelParams,
    shift: usize,
    f: impl Fn(&DressedFrame) -> C64,
) -> OperatorMatrix {
    OperatorMatrix::diagonal("f(B)", basis.dim(), |i| {
        let k = basis.sector(i);
        if k == 0 {
            return C64::new(0.0, 0.0);
        }
        let frame = frequencies(params.hbar * (k + shift) as f64, params).expect("B > 0 on sectors k >= 1");
        f(&frame)
    })
}

/// Operator-valued `P_pm(B + shift hbar)`, built from the polarization
/// generators of `ops`.
fn operator_projection(ops: &OperatorSet, params: &ModelParams, shift: usize, branch: Branch) -> OperatorMatrix {
    let basis = ops.basis;
    let one = OperatorMatrix::identity(basis.dim());
    let s = action_function(basis, params, shift, |f| f.s.into());
    let c = action_function(basis, params, shift, |f| f.c.into());
    let axis = s.matmul(&ops.tau1).plus(&c.matmul(&ops.tau3));
    one.plus(&axis.scale(branch.sign())).scale(0.5)
}

/// Closed-form `tau3(t)`:
/// `c (s tau1 + c tau3) - (s c tau1 - s² tau3) cos(Ωt) + s tau2 sin(Ωt)`,
/// every coefficient a function of `B`.
pub fn tau3_flow(ops: &OperatorSet, params: &ModelParams, t: f64) -> OperatorMatrix {
    let basis = ops.basis;
    let f = |g: fn(&DressedFrame, f64) -> f64| action_function(basis, params, 0, move |fr| g(fr, t).into());
    let along = f(|fr, _| fr.c * fr.s)
        .matmul(&ops.tau1)
        .plus(&f(|fr, _| fr.c * fr.c).matmul(&ops.tau3));
    let across = f(|fr, t| fr.s * fr.c * (fr.rabi * t).cos())
        .matmul(&ops.tau1)
        .minus(&f(|fr, t| fr.s * fr.s * (fr.rabi * t).cos()).matmul(&ops.tau3));
    let rotating = f(|fr, t| fr.s * (fr.rabi * t).sin()).matmul(&ops.tau2);
    along.minus(&across).plus(&rotating).relabel("τ3(t)")
}

/// Closed-form `b(t)`: the four dressed-branch transitions with their
/// phase factors, times `e^{-iωt} b`.
pub fn b_flow(ops: &OperatorSet, params: &ModelParams, t: f64) -> OperatorMatrix {
    let basis = ops.basis;
    let phase = |sign: f64, pick: fn(&DressedFrame) -> f64| {
        action_function(basis, params, 0, move |fr| C64::from_polar(1.0, sign * pick(fr) * t))
    };
    let p_plus = operator_projection(ops, params, 0, Branch::Plus);
    let p_minus = operator_projection(ops, params, 0, Branch::Minus);
    let next_plus = operator_projection(ops, params, 1, Branch::Plus);
    let next_minus = operator_projection(ops, params, 1, Branch::Minus);

    let stay_plus = p_plus.plus(&p_minus.matmul(&phase(-1.0, |f| f.rabi)));
    let stay_minus = p_plus.matmul(&phase(1.0, |f| f.rabi)).plus(&p_minus);
    let sum = stay_plus
        .matmul(&next_plus)
        .matmul(&phase(-1.0, |f| f.phase_freq_h))
        .plus(&stay_minus.matmul(&next_minus).matmul(&phase(1.0, |f| f.phase_freq_h)));
    sum.matmul(&ops.b)
        .scale(C64::from_polar(1.0, -params.omega * t))
        .relabel("b(t)")
}

pub fn verify_heisenberg_flows(basis: BasisSpec, params: &ModelParams, times: &[f64]) -> FlowReport {
    let ops = build_operators(basis, params);
    let sectors = SectorDecomposition::new(basis, params);
    flow_report(&ops, &sectors, params, times)
}

fn flow_report(ops: &OperatorSet, sectors: &SectorDecomposition, params: &ModelParams, times: &[f64]) -> FlowReport {
    let basis = ops.basis;
    let mut report = FlowReport {
        tau3_residual: 0.0,
        b_residual: 0.0,
        worst_sector: 0,
        worst_time: 0.0,
    };
    let mut worst = -1.0;
    for &t in times {
        let u = sectors.unitary(t);
        let u_dag = u.dagger();
        let exact_tau3 = u_dag.matmul(&ops.tau3).matmul(&u);
        let exact_b = u_dag.matmul(&ops.b).matmul(&u);
        for (exact, flow, slot) in [
            (exact_tau3, tau3_flow(ops, params, t), 0),
            (exact_b, b_flow(ops, params, t), 1),
        ] {
            let (res, sector) = worst_entry(&exact, &flow, basis);
            if slot == 0 {
                report.tau3_residual = report.tau3_residual.max(res);
            } else {
                report.b_residual = report.b_residual.max(res);
            }
            if res > worst {
                worst = res;
                report.worst_sector = sector;
                report.worst_time = t;
            }
        }
    }
    report
}

fn worst_entry(exact: &OperatorMatrix, flow: &OperatorMatrix, basis: BasisSpec) -> (f64, usize) {
    let mut best = (0.0, 0);
    for ((i, j), z) in exact.data.indexed_iter() {
        if basis.is_interior(i) && basis.is_interior(j) {
            let d = (z - flow.data[[i, j]]).norm();
            if d > best.0 {
                best = (d, basis.sector(j));
            }
        }
    }
    best
}

impl FlowReport {
    pub fn check(&self, tolerance: f64) -> Result<()> {
        for (identity, residual) in [("tau3 flow", self.tau3_residual), ("b flow", self.b_residual)] {
            if !(residual <= tolerance) {
                return Err(Error::FlowResidual {
                    identity,
                    residual,
                    tolerance,
                    sector: self.worst_sector,
                    time: self.worst_time,
                });
            }
        }
        Ok(())
    }
}

/// Every operator identity at one parameter point.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub n_max: usize,
    pub b_r: f64,
    pub normal_form: NormalFormReport,
    pub algebra: AlgebraReport,
    pub flows: FlowReport,
}

impl IdentityReport {
    /// Largest residual that is expected to vanish.
    pub fn max_residual(&self) -> f64 {
        [
            self.normal_form.residual,
            self.normal_form.action_offdiag,
            self.normal_form.action_vs_excitation,
            self.algebra.max_residual(),
            self.flows.tau3_residual,
            self.flows.b_residual,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Runs the normal-form, algebra and flow checks, sampling the flows on
/// `samples` points over three Rabi periods of the middle sector.
pub fn verify_all(basis: BasisSpec, params: &ModelParams, samples: usize) -> IdentityReport {
    let ops = build_operators(basis, params);
    let sectors = SectorDecomposition::new(basis, params);
    let mid = params.hbar * (basis.n_max() / 2).max(1) as f64;
    let period = 2.0 * std::f64::consts::PI / frequencies(mid, params).expect("mid sector has B > 0").rabi;
    let times: Vec<f64> = (0..samples)
        .map(|i| 3.0 * period * i as f64 / (samples.max(2) - 1) as f64)
        .collect();
    IdentityReport {
        n_max: basis.n_max(),
        b_r: params.b_r(),
        normal_form: normal_form_report(&ops, params),
        algebra: algebra_report(&ops, params),
        flows: flow_report(&ops, &sectors, params, &times),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::PolarizationMatrix;

    fn params(b_r: f64, omega: f64) -> ModelParams {
        ModelParams::from_action_scale(1.0, 1.0, omega, b_r).unwrap()
    }

    #[test]
    fn normal_form_at_resonance() {
        let p = params(0.0, 0.0);
        let r = verify_normal_form(BasisSpec::new(8), &p);
        assert!(r.residual <= 1e-12 * r.hamiltonian_scale, "{r:?}");
        assert!(r.action_vs_excitation < 1e-12);
    }

    #[test]
    fn normal_form_detuned_with_field_frequency() {
        let p = params(6.25, 0.9);
        let r = verify_normal_form(BasisSpec::new(40), &p);
        assert!(r.residual <= 1e-12 * r.hamiltonian_scale, "{r:?}");
        // ground-state energy hbar(omega - nu)/2 is absent from the normal form
        assert!((r.dark_discrepancy - (p.hbar * (p.omega - p.nu) / 2.0).abs()).abs() < 1e-12);
        assert!(r.signed_count_commutator > 0.1);
    }

    #[test]
    fn polariton_algebra_holds() {
        let r = verify_polariton_algebra(BasisSpec::new(30), &params(6.25, 0.0));
        assert_eq!(r.tau_nilpotent, 0.0);
        assert!(r.tau_anticommutator < 1e-13, "{r:?}");
        assert!(r.hamiltonian_excitation_commutator < 1e-13, "{r:?}");
        assert!(r.max_residual() < 1e-12, "{r:?}");
    }

    #[test]
    fn flows_reduce_to_operators_at_zero_time() {
        let p = params(6.25, 0.4);
        let basis = BasisSpec::new(12);
        let ops = build_operators(basis, &p);
        let interior = |i| basis.is_interior(i);
        assert!(tau3_flow(&ops, &p, 0.0).masked_max_diff(&ops.tau3, interior) < 1e-14);
        assert!(b_flow(&ops, &p, 0.0).masked_max_diff(&ops.b, interior) < 1e-14);
    }

    #[test]
    fn one_sector_resonant_flow_by_hand() {
        // Sector k = 1 at resonance: h = lambda sqrt(hbar) tau1, so
        // tau3(t) = cos(Ωt) tau3 + sin(Ωt) tau2 with Ω = 2 g.
        let p = params(0.0, 0.0);
        let basis = BasisSpec::new(4);
        let ops = build_operators(basis, &p);
        let up = basis.index(crate::fock::Atom::Excited, 0);
        let down = basis.index(crate::fock::Atom::Ground, 1);
        for i in 0..12 {
            let t = 0.3 * i as f64;
            let flow = tau3_flow(&ops, &p, t);
            let w = 2.0 * p.g * t;
            let hand = PolarizationMatrix::tau3() * w.cos() + PolarizationMatrix::tau2() * w.sin();
            let idx = [up, down];
            for r in 0..2 {
                for c in 0..2 {
                    assert!((flow.data[[idx[r], idx[c]]] - hand.get(r, c)).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn heisenberg_flows_match_exact_evolution() {
        for &(b_r, omega) in &[(0.0, 0.0), (6.25, 0.0), (2.0, 0.7)] {
            let p = params(b_r, omega);
            let report = verify_all(BasisSpec::new(24), &p, 7);
            report.flows.check(1e-10).unwrap();
        }
    }

    #[test]
    fn printed_tau3_flow_fails_at_zero_time() {
        // Taken literally (θ → 1, sin term multiplying the identity), the
        // flow sums to (1 + c²) tau3 + ... at t = 0 rather than tau3.
        let (c, s) = (0.6, 0.8);
        let t1 = PolarizationMatrix::tau1();
        let t3 = PolarizationMatrix::tau3();
        let literal = (t1 * s + t3 * c) * c - (t1 * (s * c) - t3);
        assert!(literal.max_abs_diff(&t3) > 0.1);
    }

    #[test]
    fn residual_breach_names_sector_and_time() {
        let report = FlowReport {
            tau3_residual: 1e-3,
            b_residual: 0.0,
            worst_sector: 7,
            worst_time: 0.5,
        };
        match report.check(1e-10) {
            Err(Error::FlowResidual { sector: 7, identity, .. }) => assert_eq!(identity, "tau3 flow"),
            other => panic!("{other:?}"),
        }
    }
}
