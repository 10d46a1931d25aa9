//! Conditional phase density `p(φ | Φ₁)` of the TWDP channel.

mod oracle;
mod series;
mod truncation;

use std::f64::consts::PI;

pub use oracle::{phase_pdf_oracle, phase_pdf_term_oracle, rician_phase_pdf};
pub use series::{phase_pdf, phase_pdf_term, PhasePdfSpec, MAX_SPECULAR_RATIO};
pub use truncation::{
    normal_quantile, power_share_pdf, truncation_bounds, truncation_bounds_with, wald_bounds, TruncationBounds,
    TruncationRule, DEFAULT_ALPHA_PCT,
};

/// Default number of points in a phase grid.
pub const DEFAULT_GRID_POINTS: usize = 2001;

/// `n` uniformly spaced phases covering `(−π, π]`, ending at `π`.
pub fn phase_grid(n: usize) -> Vec<f64> {
    let step = 2.0 * PI / n as f64;
    (1..=n)
        .map(|i| if i == n { PI } else { -PI + step * i as f64 })
        .collect()
}

/// Local maxima of a periodic sampled function.
///
/// A run of equal samples higher than both of its neighbours counts as one
/// maximum, reported at its first index; this keeps a peak that falls between
/// two symmetric grid points from being missed. A constant input has none.
pub fn circular_local_maxima(values: &[f64]) -> Vec<usize> {
    let n = values.len();
    if n < 3 {
        return Vec::new();
    }
    // Start scanning right after a change of value so no run is split.
    let Some(start) = (0..n).find(|&i| values[i] != values[(i + n - 1) % n]) else {
        return Vec::new();
    };
    let mut runs: Vec<(usize, f64)> = Vec::new();
    for k in 0..n {
        let i = (start + k) % n;
        if runs.last().is_none_or(|&(_, v)| v != values[i]) {
            runs.push((i, values[i]));
        }
    }
    let r = runs.len();
    (0..r)
        .filter(|&j| {
            let v = runs[j].1;
            v > runs[(j + r - 1) % r].1 && v > runs[(j + 1) % r].1
        })
        .map(|j| runs[j].0)
        .collect()
}
