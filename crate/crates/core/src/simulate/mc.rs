use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::{CircularStats, Histogram};
use crate::{ChannelParams, Error, Execution, Result};

/// Samples per independently seeded RNG stream.
const CHUNK: usize = 1 << 16;

/// Default seed for the Monte Carlo sampler.
pub const DEFAULT_SEED: u64 = 0x7477_6470;

/// Direct Monte Carlo sampling of the received phase.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McConfig {
    pub params: ChannelParams,
    pub n_samples: u64,
    pub seed: u64,
    pub n_bins: usize,
}

impl McConfig {
    pub fn new(params: ChannelParams) -> Self {
        Self {
            params,
            n_samples: 10_000_000,
            seed: DEFAULT_SEED,
            n_bins: 256,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::Config("n_samples must be at least 1".into()));
        }
        if self.n_bins < 2 {
            return Err(Error::Config("n_bins must be at least 2".into()));
        }
        Ok(())
    }

    fn n_chunks(&self) -> usize {
        self.n_samples.div_ceil(CHUNK as u64) as usize
    }
}

/// Histogram and circular summary of a Monte Carlo run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McPhaseResult {
    pub histogram: Histogram,
    pub stats: CircularStats,
}

/// Draws `ρ = V₁e^{jΦ₁} + V₂e^{jφ₂} + n` with `φ₂` uniform and `n` circular
/// Gaussian of power `2σ²`, and bins `arg ρ`.
pub fn mc_phase_samples(cfg: &McConfig, exec: Execution) -> Result<McPhaseResult> {
    cfg.validate()?;
    let parts = map_chunks(cfg, exec, |phases| {
        let mut h = Histogram::new(cfg.n_bins);
        let mut st = CircularStats::accumulator();
        for phi in phases {
            h.add(phi);
            st.add(phi);
        }
        (h, st)
    });
    let mut histogram = Histogram::new(cfg.n_bins);
    let mut stats = CircularStats::accumulator();
    for (h, s) in &parts {
        histogram.merge(h);
        stats.merge(s);
    }
    Ok(McPhaseResult {
        histogram,
        stats: stats.finish(),
    })
}

/// Runs `f` on the phase stream of every chunk and returns the results in
/// chunk order.
pub(crate) fn map_chunks<R, F>(cfg: &McConfig, exec: Execution, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(&mut dyn Iterator<Item = f64>) -> R + Sync + Send,
{
    let n_chunks = cfg.n_chunks();
    exec.map_indexed(n_chunks, |c| {
        let start = c as u64 * CHUNK as u64;
        let len = (cfg.n_samples - start).min(CHUNK as u64) as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(c as u64);
        let mut it = PhaseSampler::new(&cfg.params, rng).take(len);
        f(&mut it)
    })
}

struct PhaseSampler {
    los: Complex64,
    v2: f64,
    sigma: f64,
    rng: ChaCha8Rng,
}

impl PhaseSampler {
    fn new(p: &ChannelParams, rng: ChaCha8Rng) -> Self {
        Self {
            los: Complex64::from_polar(p.v1(), p.phi1()),
            v2: p.v2(),
            sigma: p.sigma2().sqrt(),
            rng,
        }
    }
}

impl Iterator for PhaseSampler {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let phi2 = PI - 2.0 * PI * self.rng.random::<f64>();
        let nr: f64 = self.rng.sample(StandardNormal);
        let ni: f64 = self.rng.sample(StandardNormal);
        let rho = self.los + Complex64::from_polar(self.v2, phi2) + Complex64::new(nr, ni) * self.sigma;
        Some(rho.arg())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(k: f64, g: f64, n: u64) -> McConfig {
        McConfig {
            n_samples: n,
            n_bins: 64,
            ..McConfig::new(ChannelParams::from_normalized(k, g, 1.0, 0.0).unwrap())
        }
    }

    #[test]
    fn policies_are_bit_identical() {
        let c = cfg(10.0, 0.7, 300_001);
        let a = mc_phase_samples(&c, Execution::Sequential).unwrap();
        let b = mc_phase_samples(&c, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.histogram.total(), 300_001);
    }

    #[test]
    fn seed_changes_output() {
        let mut c = cfg(3.0, 0.5, 100_000);
        let a = mc_phase_samples(&c, Execution::Parallel).unwrap();
        c.seed += 1;
        let b = mc_phase_samples(&c, Execution::Parallel).unwrap();
        assert_ne!(a.histogram, b.histogram);
    }

    #[test]
    fn huge_k_concentrates_at_reference() {
        let p = ChannelParams::new(1.0, 0.0, 1e-8, 0.3).unwrap();
        let c = McConfig {
            n_samples: 10_000,
            ..McConfig::new(p)
        };
        let r = mc_phase_samples(&c, Execution::Parallel).unwrap();
        let bin = r.histogram.bin_of(0.3);
        assert_eq!(r.histogram.counts()[bin], 10_000);
    }

    #[test]
    fn config_validation() {
        let mut c = cfg(1.0, 0.0, 0);
        assert!(c.validate().is_err());
        c.n_samples = 10;
        c.n_bins = 1;
        assert!(c.validate().is_err());
    }
}
