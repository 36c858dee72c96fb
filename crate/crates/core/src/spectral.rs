//! Scalar spectral functions of the polariton action `B` and the 2x2
//! dressed-polarization algebra.
//!
//! Within a polariton sector of action `B` the Hamiltonian is
//! `omega*B + delta*tau3 + lambda*sqrt(B)*tau1`, which splits into the dressed
//! branches `eps_pm(B) = omega*B +- lambda*sqrt(B + B_R)`. Everything here is a
//! pure function of [`ModelParams`] and `B`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Physical constants of the rotating-wave Jaynes-Cummings model.
///
/// Only `hbar`, `g`, `omega` and `nu` are stored; the detuning energy, the
/// coupling `lambda` and the action scale `B_R` are always recomputed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub hbar: f64,
    /// Atom-field coupling frequency.
    pub g: f64,
    /// Field mode frequency.
    pub omega: f64,
    /// Atomic transition frequency.
    pub nu: f64,
}

impl ModelParams {
    pub fn new(hbar: f64, g: f64, omega: f64, nu: f64) -> Result<Self> {
        if !(hbar > 0.0) || !hbar.is_finite() {
            return Err(Error::InvalidParams(format!("hbar must be positive, got {hbar}")));
        }
        if !(g >= 0.0) || !g.is_finite() {
            return Err(Error::InvalidParams(format!("g must be non-negative, got {g}")));
        }
        if !omega.is_finite() || !nu.is_finite() {
            return Err(Error::InvalidParams("frequencies must be finite".into()));
        }
        Ok(Self { hbar, g, omega, nu })
    }

    /// Builds parameters from the normal-form scales: coupling `lambda`
    /// (so `g = lambda / sqrt(hbar)`) and action scale `b_r >= 0`, with the
    /// atom detuned above the field.
    pub fn from_action_scale(hbar: f64, lambda: f64, omega: f64, b_r: f64) -> Result<Self> {
        if !(b_r >= 0.0) {
            return Err(Error::InvalidParams(format!("B_R must be non-negative, got {b_r}")));
        }
        let delta = lambda * b_r.sqrt();
        Self::from_detuning(hbar, lambda, omega, delta)
    }

    /// Builds parameters from `lambda` and the detuning energy
    /// `delta = hbar (nu - omega) / 2`.
    pub fn from_detuning(hbar: f64, lambda: f64, omega: f64, delta: f64) -> Result<Self> {
        if !(hbar > 0.0) {
            return Err(Error::InvalidParams(format!("hbar must be positive, got {hbar}")));
        }
        Self::new(hbar, lambda / hbar.sqrt(), omega, omega + 2.0 * delta / hbar)
    }

    /// `hbar (nu - omega) / 2`.
    pub fn delta(&self) -> f64 {
        0.5 * self.hbar * (self.nu - self.omega)
    }

    /// `sqrt(hbar) g`.
    pub fn lambda(&self) -> f64 {
        self.hbar.sqrt() * self.g
    }

    /// `(delta / lambda)^2`; infinite when `g = 0`.
    pub fn b_r(&self) -> f64 {
        let r = self.delta() / self.lambda();
        r * r
    }
}

/// Detuning energy, coupling and action scale.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scales {
    pub delta: f64,
    pub lambda: f64,
    pub b_r: f64,
}

pub fn derive_scales(params: &ModelParams) -> Result<Scales> {
    if params.g == 0.0 {
        return Err(Error::InvalidParams("g = 0 leaves B_R undefined".into()));
    }
    Ok(Scales {
        delta: params.delta(),
        lambda: params.lambda(),
        b_r: params.b_r(),
    })
}

/// Dressed mixing cosine and sine `(c, s)` at action `b`.
///
/// `c` carries the sign of the detuning so that the sector Hamiltonian is
/// always `eps (s tau1 + c tau3)`; for `nu >= omega` it is the non-negative
/// root `sqrt(B_R / (B + B_R))`.
pub fn mixing(b: f64, params: &ModelParams) -> Result<(f64, f64)> {
    let Scales { delta, b_r, .. } = derive_scales(params)?;
    if !(b >= 0.0) {
        return Err(Error::NegativeAction(b));
    }
    let total = b + b_r;
    if total == 0.0 {
        return Err(Error::IndeterminateMixing);
    }
    let c = (b_r / total).sqrt().copysign(if delta < 0.0 { -1.0 } else { 1.0 });
    let s = (b / total).sqrt();
    Ok((c, s))
}

/// Dressed energy `lambda sqrt(B + B_R)`, defined for all `B >= 0`.
pub fn dressed_energy(b: f64, params: &ModelParams) -> Result<f64> {
    let Scales { lambda, b_r, .. } = derive_scales(params)?;
    if !(b >= 0.0) {
        return Err(Error::NegativeAction(b));
    }
    Ok(lambda * (b + b_r).sqrt())
}

/// All frequency-like functions of the action at a single point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DressedFrame {
    pub b: f64,
    pub c: f64,
    pub s: f64,
    pub eps: f64,
    pub eps_plus: f64,
    pub eps_minus: f64,
    /// Rabi frequency `2 eps / hbar`.
    pub rabi: f64,
    /// `d rabi / dB`.
    pub rabi_slope: f64,
    /// Finite-`hbar` phase frequency `(eps(B + hbar) - eps(B)) / hbar`.
    pub phase_freq_h: f64,
    /// Classical phase frequency `eps'(B)`.
    pub phase_freq: f64,
    /// Derivative of the mixing angle `arccos(c)`.
    pub mixing_slope: f64,
}

pub fn frequencies(b: f64, params: &ModelParams) -> Result<DressedFrame> {
    let (c, s) = mixing(b, params)?;
    if s == 0.0 {
        return Err(Error::MixingSlopeUndefined(b));
    }
    let Scales { lambda, b_r, .. } = derive_scales(params)?;
    let hbar = params.hbar;
    let root = (b + b_r).sqrt();
    let eps = lambda * root;
    let eps_next = lambda * (b + hbar + b_r).sqrt();
    Ok(DressedFrame {
        b,
        c,
        s,
        eps,
        eps_plus: params.omega * b + eps,
        eps_minus: params.omega * b - eps,
        rabi: 2.0 * eps / hbar,
        rabi_slope: lambda / (hbar * root),
        phase_freq_h: (eps_next - eps) / hbar,
        phase_freq: lambda / (2.0 * root),
        mixing_slope: c / (2.0 * s * (b + b_r)),
    })
}

/// Branch selector for the dressed projections.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// `P_pm(B) = (1 +- (s tau1 + c tau3)) / 2`.
pub fn dressed_projection(b: f64, branch: Branch, params: &ModelParams) -> Result<PolarizationMatrix> {
    let (c, s) = mixing(b, params)?;
    Ok(projection_from_mixing(c, s, branch))
}

pub(crate) fn projection_from_mixing(c: f64, s: f64, branch: Branch) -> PolarizationMatrix {
    let axis = PolarizationMatrix::tau1() * s + PolarizationMatrix::tau3() * c;
    (PolarizationMatrix::identity() + axis * branch.sign()) * 0.5
}

/// A 2x2 complex matrix on the polarization space, basis order (up, down)
/// with `tau3 = diag(+1, -1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarizationMatrix(pub [[C64; 2]; 2]);

impl PolarizationMatrix {
    pub const fn new(m: [[C64; 2]; 2]) -> Self {
        Self(m)
    }

    pub fn zero() -> Self {
        Self([[C64::new(0.0, 0.0); 2]; 2])
    }

    pub fn identity() -> Self {
        Self::real([[1.0, 0.0], [0.0, 1.0]])
    }

    pub fn tau1() -> Self {
        Self::real([[0.0, 1.0], [1.0, 0.0]])
    }

    pub fn tau2() -> Self {
        let i = C64::i();
        Self([[C64::new(0.0, 0.0), -i], [i, C64::new(0.0, 0.0)]])
    }

    pub fn tau3() -> Self {
        Self::real([[1.0, 0.0], [0.0, -1.0]])
    }

    /// Polarization lowering operator: maps up to down.
    pub fn tau() -> Self {
        Self::real([[0.0, 0.0], [1.0, 0.0]])
    }

    pub fn real(m: [[f64; 2]; 2]) -> Self {
        Self([
            [C64::new(m[0][0], 0.0), C64::new(m[0][1], 0.0)],
            [C64::new(m[1][0], 0.0), C64::new(m[1][1], 0.0)],
        ])
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[row][col]
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn dagger(&self) -> Self {
        let m = &self.0;
        Self([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        *self * *other + *other * *self
    }
}

impl Add for PolarizationMatrix {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for (r, row) in out.0.iter_mut().enumerate() {
            for (c, z) in row.iter_mut().enumerate() {
                *z += rhs.0[r][c];
            }
        }
        out
    }
}

impl Sub for PolarizationMatrix {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for PolarizationMatrix {
    type Output = Self;
    fn neg(self) -> Self {
        self * -1.0
    }
}

impl Mul for PolarizationMatrix {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (&self.0, &rhs.0);
        Self([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

impl Mul<C64> for PolarizationMatrix {
    type Output = Self;
    fn mul(self, rhs: C64) -> Self {
        Self(self.0.map(|row| row.map(|z| z * rhs)))
    }
}

impl Mul<f64> for PolarizationMatrix {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self(self.0.map(|row| row.map(|z| z * rhs)))
    }
}

impl fmt::Display for PolarizationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(f, "[[{}, {}], [{}, {}]]", m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn detuned(hbar: f64, b_r: f64) -> ModelParams {
        ModelParams::from_action_scale(hbar, 1.0, 0.0, b_r).unwrap()
    }

    #[test]
    fn scales_for_the_figure_detuning() {
        let p = ModelParams::new(1.0, 1.0, 0.0, 5.0).unwrap();
        let s = derive_scales(&p).unwrap();
        assert_eq!(s.delta, 2.5);
        assert_eq!(s.lambda, 1.0);
        assert_eq!(s.b_r, 6.25);
    }

    #[test]
    fn scales_at_resonance() {
        let p = ModelParams::new(1.0, 1.0, 3.0, 3.0).unwrap();
        let s = derive_scales(&p).unwrap();
        assert_eq!(s.delta, 0.0);
        assert_eq!(s.b_r, 0.0);
    }

    #[test]
    fn scales_at_small_hbar() {
        let p = ModelParams::new(0.25, 2.0, 1.0, 5.0).unwrap();
        let s = derive_scales(&p).unwrap();
        assert_relative_eq!(s.delta, 0.5, max_relative = 1e-15);
        assert_relative_eq!(s.lambda, 1.0, max_relative = 1e-15);
        assert_relative_eq!(s.b_r, 0.25, max_relative = 1e-15);
    }

    #[test]
    fn zero_coupling_is_rejected() {
        let p = ModelParams::new(1.0, 0.0, 0.0, 1.0).unwrap();
        assert!(matches!(derive_scales(&p), Err(Error::InvalidParams(_))));
        assert!(ModelParams::new(0.0, 1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn mixing_limits() {
        let res = detuned(1.0, 0.0);
        assert_eq!(mixing(3.0, &res).unwrap(), (0.0, 1.0));
        let det = detuned(1.0, 6.25);
        assert_eq!(mixing(0.0, &det).unwrap(), (1.0, 0.0));
        assert!(matches!(mixing(0.0, &res), Err(Error::IndeterminateMixing)));
        assert!(matches!(mixing(-1.0, &det), Err(Error::NegativeAction(_))));
    }

    #[test]
    fn mixing_at_fifty_photons() {
        // sqrt(6.25/56.75) and sqrt(50.5/56.75), 30-digit evaluation
        let (c, s) = mixing(50.5, &detuned(1.0, 6.25)).unwrap();
        assert_relative_eq!(c, 0.331_861_655_799_985_98, max_relative = 1e-14);
        assert_relative_eq!(s, 0.943_328_066_692_437_4, max_relative = 1e-14);
    }

    #[test]
    fn negative_detuning_flips_c() {
        let p = ModelParams::from_detuning(1.0, 1.0, 0.0, -2.5).unwrap();
        let (c, s) = mixing(50.5, &p).unwrap();
        assert!(c < 0.0 && s > 0.0);
        assert_relative_eq!(c.abs(), 0.331_861_655_799_985_98, max_relative = 1e-14);
    }

    #[test]
    fn rabi_frequency_at_fifty_photons() {
        let f = frequencies(50.5, &detuned(1.0, 6.25)).unwrap();
        // 2 sqrt(56.75)
        assert_relative_eq!(f.rabi, 15.066_519_173_319_364, max_relative = 1e-14);
        assert_relative_eq!(f.eps_plus - f.eps_minus, 2.0 * f.eps, max_relative = 1e-15);
    }

    #[test]
    fn resonance_closed_forms() {
        let p = detuned(1.0, 0.0);
        let b: f64 = 9.0;
        let f = frequencies(b, &p).unwrap();
        assert_relative_eq!(f.phase_freq, 1.0 / (2.0 * b.sqrt()), max_relative = 1e-15);
        assert_relative_eq!(f.rabi, 2.0 * b.sqrt(), max_relative = 1e-15);
        assert_eq!(f.mixing_slope, 0.0);
    }

    #[test]
    fn mixing_slope_undefined_at_vacuum() {
        assert!(matches!(
            frequencies(0.0, &detuned(1.0, 6.25)),
            Err(Error::MixingSlopeUndefined(_))
        ));
    }

    fn centered(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
        (f(x + h) - f(x - h)) / (2.0 * h)
    }

    #[test]
    fn slopes_match_finite_differences() {
        for &(hbar, b_r, b) in &[(1.0, 6.25, 50.5), (0.25, 6.25, 8.5), (1.0, 0.3, 2.0), (0.1, 0.0, 4.0)] {
            let p = detuned(hbar, b_r);
            let f = frequencies(b, &p).unwrap();
            let h = 1e-4 * (b + b_r);
            let rabi = |x: f64| frequencies(x, &p).unwrap().rabi;
            let eps = |x: f64| dressed_energy(x, &p).unwrap();
            let theta = |x: f64| mixing(x, &p).unwrap().0.acos();
            assert_relative_eq!(f.rabi_slope, centered(rabi, b, h), max_relative = 1e-6);
            assert_relative_eq!(f.phase_freq, centered(eps, b, h), max_relative = 1e-6);
            if b_r > 0.0 {
                assert_relative_eq!(f.mixing_slope, centered(theta, b, h), max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn finite_hbar_phase_frequency_expansion() {
        // omega_h - omega_cl - (hbar/2) eps'' must vanish as hbar^2:
        // the Richardson ratio between successive decades approaches 100.
        let (lambda, b_r, b) = (1.0, 6.25, 20.0);
        let eps2 = -lambda / (4.0 * f64::powf(b + b_r, 1.5));
        let remainder = |hbar: f64| {
            let p = ModelParams::from_action_scale(hbar, lambda, 0.0, b_r).unwrap();
            let f = frequencies(b, &p).unwrap();
            f.phase_freq_h - f.phase_freq - 0.5 * hbar * eps2
        };
        let r: Vec<f64> = [1e-1, 1e-2, 1e-3].iter().map(|&h| remainder(h)).collect();
        let order1 = (r[0] / r[1]).log10();
        let order2 = (r[1] / r[2]).log10();
        assert!((order1 - 2.0).abs() < 0.05, "{order1}");
        assert!((order2 - 2.0).abs() < 0.05, "{order2}");
    }

    #[test]
    fn projection_limits() {
        let res = dressed_projection(4.0, Branch::Plus, &detuned(1.0, 0.0)).unwrap();
        let expect = (PolarizationMatrix::identity() + PolarizationMatrix::tau1()) * 0.5;
        assert!(res.max_abs_diff(&expect) < 1e-15);
        let bare = dressed_projection(0.0, Branch::Minus, &detuned(1.0, 6.25)).unwrap();
        let expect = (PolarizationMatrix::identity() - PolarizationMatrix::tau3()) * 0.5;
        assert!(bare.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn su2_algebra() {
        let (t1, t2, t3) = (
            PolarizationMatrix::tau1(),
            PolarizationMatrix::tau2(),
            PolarizationMatrix::tau3(),
        );
        let one = PolarizationMatrix::identity();
        for t in [t1, t2, t3] {
            assert_eq!(t * t, one);
        }
        let two_i = C64::new(0.0, 2.0);
        assert_eq!(t1.commutator(&t2), t3 * two_i);
        assert_eq!(t2.commutator(&t3), t1 * two_i);
        assert_eq!(t3.commutator(&t1), t2 * two_i);
        let tau = PolarizationMatrix::tau();
        assert_eq!(tau + tau.dagger(), t1);
        assert_eq!((tau - tau.dagger()) * C64::i(), t2);
        assert_eq!(tau.dagger() * tau - tau * tau.dagger(), t3);
    }

    proptest! {
        #[test]
        fn mixing_is_a_unit_vector(b in 0.0f64..1e4, b_r in 1e-6f64..1e3) {
            let (c, s) = mixing(b, &detuned(1.0, b_r)).unwrap();
            prop_assert!((c * c + s * s - 1.0).abs() <= 4.0 * f64::EPSILON);
        }

        #[test]
        fn splitting_is_hbar_times_rabi(b in 1e-3f64..1e4, b_r in 0.0f64..1e3, hbar in 1e-3f64..2.0) {
            let f = frequencies(b, &detuned(hbar, b_r)).unwrap();
            let split = f.eps_plus - f.eps_minus;
            prop_assert!((split - hbar * f.rabi).abs() <= 4.0 * f64::EPSILON * split);
        }

        #[test]
        fn projections_are_complementary(b in 0.0f64..1e3, b_r in 1e-6f64..1e3) {
            let p = detuned(1.0, b_r);
            let plus = dressed_projection(b, Branch::Plus, &p).unwrap();
            let minus = dressed_projection(b, Branch::Minus, &p).unwrap();
            let one = PolarizationMatrix::identity();
            prop_assert!((plus + minus).max_abs_diff(&one) < 1e-14);
            prop_assert!((plus * plus).max_abs_diff(&plus) < 1e-14);
            prop_assert!((minus * minus).max_abs_diff(&minus) < 1e-14);
            prop_assert!((plus * minus).max_abs() < 1e-14);
            prop_assert!((minus * plus).max_abs() < 1e-14);
            prop_assert!((plus.trace().re - 1.0).abs() < 1e-14);
        }
    }
}
