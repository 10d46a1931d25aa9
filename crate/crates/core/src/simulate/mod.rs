//! Stochastic generators for the received phase.
//!
//! [`mc_phase_samples`] draws independent channel snapshots directly from the
//! signal model; [`geo_phase_histogram`] runs a moving-receiver geometry with
//! a sum-of-sinusoids diffuse process. Both use one ChaCha stream per work
//! unit (chunk or realization) derived from a single seed, and combine
//! integer counts in a fixed order, so results do not depend on the
//! [`crate::Execution`] policy.

mod geo;
mod histogram;
mod mc;

use serde::Serialize;

pub use geo::{
    geo_phase_histogram, geo_realization, ClarkeDiffuse, FadingRealization, GeoSimConfig, PhaseReference,
    SpecularRotation, DEFAULT_GEO_SEED,
};
pub use histogram::Histogram;
pub use mc::{mc_phase_samples, McConfig, McPhaseResult, DEFAULT_SEED};

pub(crate) use mc::map_chunks;

/// Circular mean direction and circular variance `1 − R̄`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CircularStats {
    pub mean: f64,
    pub variance: f64,
}

impl CircularStats {
    pub(crate) fn accumulator() -> CircularAccumulator {
        CircularAccumulator::default()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct CircularAccumulator {
    cos: f64,
    sin: f64,
    n: u64,
}

impl CircularAccumulator {
    pub(crate) fn add(&mut self, phi: f64) {
        let (s, c) = phi.sin_cos();
        self.cos += c;
        self.sin += s;
        self.n += 1;
    }

    pub(crate) fn merge(&mut self, other: &Self) {
        self.cos += other.cos;
        self.sin += other.sin;
        self.n += other.n;
    }

    pub(crate) fn finish(&self) -> CircularStats {
        if self.n == 0 {
            return CircularStats {
                mean: 0.0,
                variance: 1.0,
            };
        }
        let r = self.cos.hypot(self.sin) / self.n as f64;
        CircularStats {
            mean: self.sin.atan2(self.cos),
            variance: 1.0 - r,
        }
    }
}
