//! Signal helpers shared by the acceptance checks.

/// Centered moving average over `width` samples, truncated at the ends.
pub fn running_mean(values: &[f64], width: usize) -> Vec<f64> {
    let half = width / 2;
    (0..values.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(values.len());
            values[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
        })
        .collect()
}

/// Centered moving maximum of `|v - center|` over `width` samples.
pub fn running_envelope(values: &[f64], center: f64, width: usize) -> Vec<f64> {
    let half = width / 2;
    (0..values.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(values.len());
            values[lo..hi].iter().map(|v| (v - center).abs()).fold(0.0, f64::max)
        })
        .collect()
}

/// Index ranges `[half, len - half)` where a centered window of `width` fits.
pub fn full_windows(len: usize, width: usize) -> std::ops::Range<usize> {
    let half = width / 2;
    half.min(len)..len.saturating_sub(half).max(half.min(len))
}
