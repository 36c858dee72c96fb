//! Pointwise comparison of two series on a shared grid.

use num_complex::Complex64 as C64;

use super::scenario::TimeSeries;
use crate::error::{Error, Result};

/// Deviation statistics for one quadrature.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Deviation {
    pub max_abs: f64,
    /// Span `max - min` of the reference series on the window.
    pub span: f64,
    /// `max_abs / span`; zero when both vanish.
    pub normalized: f64,
}

impl Deviation {
    fn from_pairs(pairs: impl Iterator<Item = (f64, f64)> + Clone) -> Self {
        let max_abs = pairs.clone().map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let (lo, hi) = pairs
            .map(|(_, b)| b)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), b| (lo.min(b), hi.max(b)));
        let span = hi - lo;
        let normalized = if max_abs == 0.0 {
            0.0
        } else if span > 0.0 {
            max_abs / span
        } else {
            f64::INFINITY
        };
        Self {
            max_abs,
            span,
            normalized,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonReport {
    pub window: (f64, f64),
    pub real: Deviation,
    /// Present when either series has a nonzero imaginary part.
    pub imag: Option<Deviation>,
    /// `(t, a - b)` on the window.
    pub residuals: Vec<(f64, C64)>,
}

impl ComparisonReport {
    /// Largest normalized deviation over the compared quadratures.
    pub fn normalized(&self) -> f64 {
        self.imag.map_or(self.real.normalized, |im| self.real.normalized.max(im.normalized))
    }
}

fn same_grid(a: &TimeSeries, b: &TimeSeries) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::GridMismatch(format!("{} has {} samples, {} has {}", a.label(), a.len(), b.label(), b.len())));
    }
    for (i, (&ta, &tb)) in a.times.iter().zip(&b.times).enumerate() {
        if (ta - tb).abs() > 1e-12 * ta.abs().max(tb.abs()).max(1.0) {
            return Err(Error::GridMismatch(format!("sample {i}: t = {ta} vs {tb}")));
        }
    }
    Ok(())
}

/// Compares `a` against the reference `b` on `window` (the whole grid when
/// `None`). Deviations are normalized by the span of `b`.
pub fn compare(a: &TimeSeries, b: &TimeSeries, window: Option<(f64, f64)>) -> Result<ComparisonReport> {
    same_grid(a, b)?;
    if a.is_empty() {
        return Err(Error::EmptySeries);
    }
    let (first, last) = (a.times[0], a.times[a.len() - 1]);
    let window = window.unwrap_or((first, last));
    let slack = 1e-12 * last.abs().max(1.0);
    if !(window.0 <= window.1 && window.0 >= first - slack && window.1 <= last + slack) {
        return Err(Error::GridMismatch(format!(
            "window [{}, {}] is not inside the simulated range [{first}, {last}]",
            window.0, window.1
        )));
    }
    let inside: Vec<usize> = (0..a.len())
        .filter(|&i| a.times[i] >= window.0 - slack && a.times[i] <= window.1 + slack)
        .collect();
    if inside.is_empty() {
        return Err(Error::GridMismatch(format!("no samples in [{}, {}]", window.0, window.1)));
    }
    let pairs = |f: fn(C64) -> f64| inside.iter().map(move |&i| (f(a.values[i]), f(b.values[i])));
    let complex = inside.iter().any(|&i| a.values[i].im != 0.0 || b.values[i].im != 0.0);
    Ok(ComparisonReport {
        window,
        real: Deviation::from_pairs(pairs(|z| z.re)),
        imag: complex.then(|| Deviation::from_pairs(pairs(|z| z.im))),
        residuals: inside.iter().map(|&i| (a.times[i], a.values[i] - b.values[i])).collect(),
    })
}
