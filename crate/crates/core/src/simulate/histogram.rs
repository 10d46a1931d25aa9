use std::f64::consts::PI;

use serde::Serialize;

/// Right-open uniform bins over `(−π, π]` with integer counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Histogram {
    counts: Vec<u64>,
    total: u64,
}

// 5-point Gauss–Legendre on [-1, 1].
const GL_X: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GL_W: [f64; 5] = [
    0.236_926_885_056_189,
    0.478_628_670_499_366,
    0.568_888_888_888_889,
    0.478_628_670_499_366,
    0.236_926_885_056_189,
];

impl Histogram {
    pub fn new(n_bins: usize) -> Self {
        assert!(n_bins >= 2, "histogram needs at least two bins");
        Self {
            counts: vec![0; n_bins],
            total: 0,
        }
    }

    pub fn n_bins(&self) -> usize {
        self.counts.len()
    }

    pub fn width(&self) -> f64 {
        2.0 * PI / self.n_bins() as f64
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn left_edge(&self, i: usize) -> f64 {
        -PI + self.width() * i as f64
    }

    pub fn right_edge(&self, i: usize) -> f64 {
        if i + 1 == self.n_bins() {
            PI
        } else {
            self.left_edge(i + 1)
        }
    }

    pub fn center(&self, i: usize) -> f64 {
        0.5 * (self.left_edge(i) + self.right_edge(i))
    }

    /// Bin holding `phi`, which must already lie in `(−π, π]`.
    pub fn bin_of(&self, phi: f64) -> usize {
        let i = ((phi + PI) / self.width()).floor();
        (i.max(0.0) as usize).min(self.n_bins() - 1)
    }

    pub fn add(&mut self, phi: f64) {
        let i = self.bin_of(phi);
        self.counts[i] += 1;
        self.total += 1;
    }

    /// Adds the counts of `other`, which must have the same binning.
    pub fn merge(&mut self, other: &Histogram) {
        assert_eq!(self.n_bins(), other.n_bins());
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.total += other.total;
    }

    /// Counts divided by `total × width`.
    pub fn densities(&self) -> Vec<f64> {
        let norm = if self.total == 0 {
            0.0
        } else {
            1.0 / (self.total as f64 * self.width())
        };
        self.counts.iter().map(|&c| c as f64 * norm).collect()
    }

    /// Average of `f` over every bin (5-point Gauss–Legendre).
    pub fn bin_averages<F: Fn(f64) -> f64>(&self, f: F) -> Vec<f64> {
        (0..self.n_bins())
            .map(|i| {
                let (a, b) = (self.left_edge(i), self.right_edge(i));
                let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
                0.5 * GL_X.iter().zip(&GL_W).map(|(x, w)| w * f(c + h * x)).sum::<f64>()
            })
            .collect()
    }

    /// `max_i |density_i − reference_i|`.
    pub fn max_abs_deviation(&self, reference: &[f64]) -> f64 {
        self.densities()
            .iter()
            .zip(reference)
            .map(|(d, r)| (d - r).abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binning_and_normalization() {
        let mut h = Histogram::new(4);
        for phi in [-PI + 1e-9, -0.1, 0.0, 0.1, PI, PI / 2.0] {
            h.add(phi);
        }
        assert_eq!(h.counts(), &[1, 1, 2, 2]);
        let integral: f64 = h.densities().iter().map(|d| d * h.width()).sum();
        assert!((integral - 1.0).abs() < 1e-12);
        assert_eq!(h.right_edge(3), PI);
    }

    #[test]
    fn bin_average_of_linear_function_is_center_value() {
        let h = Histogram::new(16);
        let avg = h.bin_averages(|x| 3.0 * x + 1.0);
        for (i, a) in avg.iter().enumerate() {
            assert!((a - (3.0 * h.center(i) + 1.0)).abs() < 1e-12);
        }
    }
}
