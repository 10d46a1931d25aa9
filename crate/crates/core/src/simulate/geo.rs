use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::Histogram;
use crate::{wrap_phase, ChannelParams, Error, Execution, Result};

/// Default seed for the geometric simulator.
pub const DEFAULT_GEO_SEED: u64 = 0x0074_7764_7067_656f;

/// Phase reference used when binning the received phase.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum PhaseReference {
    /// Raw `arg ρ(t)`; the slow LoS drift stays in the samples.
    #[default]
    Fixed,
    /// `arg ρ(t)` measured against the instantaneous LoS phase, as a receiver
    /// locked to the stronger ray would see it.
    TrackLos,
}

/// Two-ray geometry with a moving receiver plus Clarke diffuse scattering.
///
/// The receiver moves along the x axis at constant speed; its trajectory is
/// centred on `x = 0` at mid-run. The transmitter and a reflecting line sit
/// at fixed positions; the reflected path length comes from the image of the
/// transmitter across that line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GeoSimConfig {
    pub tx_position: [f64; 2],
    pub reflector_position: [f64; 2],
    pub reflector_angle_deg: f64,
    pub rx_velocity: f64,
    pub doppler_max_hz: f64,
    pub sample_time_s: f64,
    pub duration_s: f64,
    pub n_realizations: usize,
    pub n_scatter_sinusoids: usize,
    pub params: ChannelParams,
    pub seed: u64,
    pub n_bins: usize,
    pub phase_reference: PhaseReference,
}

impl Default for GeoSimConfig {
    fn default() -> Self {
        Self {
            tx_position: [0.0, 5.0],
            reflector_position: [3.6633, -4.0613],
            reflector_angle_deg: 25.0244,
            rx_velocity: 10.0,
            doppler_max_hz: 1000.0,
            sample_time_s: 1e-5,
            duration_s: 7.5e-3,
            n_realizations: 200,
            n_scatter_sinusoids: 64,
            params: ChannelParams::from_normalized(10.0, 0.7, 1.0, 0.0).expect("valid defaults"),
            seed: DEFAULT_GEO_SEED,
            n_bins: 256,
            phase_reference: PhaseReference::Fixed,
        }
    }
}

/// One simulated complex envelope.
#[derive(Clone, Debug, PartialEq)]
pub struct FadingRealization {
    pub samples: Vec<Complex64>,
    pub sample_time_s: f64,
}

impl FadingRealization {
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.samples.len()).map(|k| k as f64 * self.sample_time_s)
    }
}

/// Total phase travel of the two specular rays over one run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpecularRotation {
    pub los_degrees: f64,
    pub reflected_turns: f64,
}

impl GeoSimConfig {
    pub fn n_samples(&self) -> Result<usize> {
        let ratio = self.duration_s / self.sample_time_s;
        let n = ratio.round();
        if !ratio.is_finite() || (ratio - n).abs() > 1e-6 * n.max(1.0) || n < 2.0 {
            return Err(Error::Config(format!(
                "duration_s / sample_time_s = {ratio} is not an integer >= 2"
            )));
        }
        Ok(n as usize)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = self.tx_position.iter().chain(&self.reflector_position).all(|v| v.is_finite())
            && self.reflector_angle_deg.is_finite();
        if !finite {
            return Err(Error::Config("positions and angles must be finite".into()));
        }
        if !(self.sample_time_s > 0.0) || !(self.duration_s > 0.0) {
            return Err(Error::Config("sample_time_s and duration_s must be positive".into()));
        }
        if !(self.rx_velocity > 0.0 && self.rx_velocity.is_finite()) {
            return Err(Error::Config("rx_velocity must be positive".into()));
        }
        if !(self.doppler_max_hz > 0.0 && self.doppler_max_hz.is_finite()) {
            return Err(Error::Config("doppler_max_hz must be positive".into()));
        }
        if self.n_realizations == 0 || self.n_scatter_sinusoids == 0 {
            return Err(Error::Config("n_realizations and n_scatter_sinusoids must be >= 1".into()));
        }
        if self.n_bins < 2 {
            return Err(Error::Config("n_bins must be at least 2".into()));
        }
        self.n_samples()?;
        self.geometry()?;
        Ok(())
    }

    /// Receiver wavelength implied by `f_d = v / λ`.
    pub fn wavelength(&self) -> f64 {
        self.rx_velocity / self.doppler_max_hz
    }

    fn geometry(&self) -> Result<Geometry> {
        let n = self.n_samples()?;
        let t_mid = 0.5 * (n - 1) as f64 * self.sample_time_s;
        let theta = self.reflector_angle_deg.to_radians();
        let dir = [theta.cos(), theta.sin()];
        let p = self.reflector_position;
        let tx = self.tx_position;
        // Signed distance from the reflector line, along its left normal.
        let normal = [-dir[1], dir[0]];
        let side = |q: [f64; 2]| (q[0] - p[0]) * normal[0] + (q[1] - p[1]) * normal[1];
        let d_tx = side(tx);
        if d_tx == 0.0 {
            return Err(Error::Config("transmitter lies on the reflector line".into()));
        }
        let image = [tx[0] - 2.0 * d_tx * normal[0], tx[1] - 2.0 * d_tx * normal[1]];
        let rx_at = |t: f64| [self.rx_velocity * (t - t_mid), 0.0];
        for k in [0, n - 1] {
            let d = side(rx_at(k as f64 * self.sample_time_s));
            if d == 0.0 || d.signum() != d_tx.signum() {
                return Err(Error::Config(
                    "receiver trajectory crosses the reflector plane".into(),
                ));
            }
        }
        let dist = |a: [f64; 2], b: [f64; 2]| (a[0] - b[0]).hypot(a[1] - b[1]);
        let mut los = Vec::with_capacity(n);
        let mut refl = Vec::with_capacity(n);
        for k in 0..n {
            let rx = rx_at(k as f64 * self.sample_time_s);
            los.push(dist(tx, rx));
            refl.push(dist(image, rx));
        }
        let mean_los = los.iter().sum::<f64>() / n as f64;
        let wavenumber = 2.0 * PI / self.wavelength();
        Ok(Geometry {
            // LoS phase relative to its run average, so Φ₁ is the mean phase.
            los_phase: los.iter().map(|l| -wavenumber * (l - mean_los)).collect(),
            refl_phase: refl.iter().map(|l| -wavenumber * l).collect(),
        })
    }

    /// Phase travel of both specular rays, from the path-length geometry.
    pub fn specular_rotation(&self) -> Result<SpecularRotation> {
        self.validate()?;
        let g = self.geometry()?;
        let travel = |v: &[f64]| v.windows(2).map(|w| (w[1] - w[0]).abs()).sum::<f64>();
        Ok(SpecularRotation {
            los_degrees: travel(&g.los_phase).to_degrees(),
            reflected_turns: travel(&g.refl_phase) / (2.0 * PI),
        })
    }
}

struct Geometry {
    los_phase: Vec<f64>,
    refl_phase: Vec<f64>,
}

/// Sum-of-sinusoids Rayleigh process with isotropic scattering.
///
/// ```text
/// X(t) = √(2/M) Σₙ e^{jψₙ} cos(ω_d t cos αₙ + ϕ),   αₙ = (2πn − π + θ) / (4M)
/// ```
///
/// with `θ`, `ϕ` and every `ψₙ` uniform on `[−π, π)`, giving `E|X|² = 1`.
#[derive(Clone, Debug)]
pub struct ClarkeDiffuse {
    omega_d: f64,
    offset: f64,
    cos_alpha: Vec<f64>,
    weights: Vec<Complex64>,
}

impl ClarkeDiffuse {
    pub fn draw<R: Rng>(rng: &mut R, n_sinusoids: usize, doppler_max_hz: f64) -> Self {
        let m = n_sinusoids as f64;
        let mut uniform = || PI * (2.0 * rng.random::<f64>() - 1.0);
        let theta = uniform();
        let offset = uniform();
        let amp = (2.0 / m).sqrt();
        let cos_alpha = (1..=n_sinusoids)
            .map(|n| ((2.0 * PI * n as f64 - PI + theta) / (4.0 * m)).cos())
            .collect();
        let weights = (0..n_sinusoids).map(|_| Complex64::from_polar(amp, uniform())).collect();
        Self {
            omega_d: 2.0 * PI * doppler_max_hz,
            offset,
            cos_alpha,
            weights,
        }
    }

    pub fn sample(&self, t: f64) -> Complex64 {
        self.cos_alpha
            .iter()
            .zip(&self.weights)
            .map(|(ca, w)| w * (self.omega_d * t * ca + self.offset).cos())
            .sum()
    }
}

fn realization_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Complex envelope of realization `realization_index`.
pub fn geo_realization(cfg: &GeoSimConfig, realization_index: usize) -> Result<FadingRealization> {
    cfg.validate()?;
    let g = cfg.geometry()?;
    Ok(realize(cfg, &g, realization_index))
}

fn realize(cfg: &GeoSimConfig, g: &Geometry, index: usize) -> FadingRealization {
    let p = &cfg.params;
    let mut rng = realization_rng(cfg.seed, index);
    let phi2_0 = PI * (2.0 * rng.random::<f64>() - 1.0);
    let diffuse = ClarkeDiffuse::draw(&mut rng, cfg.n_scatter_sinusoids, cfg.doppler_max_hz);
    let diffuse_scale = (2.0 * p.sigma2()).sqrt();
    let samples = (0..g.los_phase.len())
        .map(|k| {
            let t = k as f64 * cfg.sample_time_s;
            let los = Complex64::from_polar(p.v1(), p.phi1() + g.los_phase[k]);
            let refl = Complex64::from_polar(p.v2(), phi2_0 + g.refl_phase[k]);
            let scatter = if diffuse_scale > 0.0 {
                diffuse.sample(t) * diffuse_scale
            } else {
                Complex64::new(0.0, 0.0)
            };
            los + refl + scatter
        })
        .collect();
    FadingRealization {
        samples,
        sample_time_s: cfg.sample_time_s,
    }
}

/// Phase histogram over every sample of every realization.
pub fn geo_phase_histogram(cfg: &GeoSimConfig, exec: Execution) -> Result<Histogram> {
    cfg.validate()?;
    let g = cfg.geometry()?;
    let parts = exec.map_indexed(cfg.n_realizations, |i| {
        let r = realize(cfg, &g, i);
        let mut h = Histogram::new(cfg.n_bins);
        for (k, s) in r.samples.iter().enumerate() {
            let phi = match cfg.phase_reference {
                PhaseReference::Fixed => s.arg(),
                PhaseReference::TrackLos => wrap_phase(s.arg() - g.los_phase[k]),
            };
            h.add(phi);
        }
        h
    });
    let mut total = Histogram::new(cfg.n_bins);
    for h in &parts {
        total.merge(h);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        let c = GeoSimConfig::default();
        c.validate().unwrap();
        assert_eq!(c.n_samples().unwrap(), 750);
        assert!((c.wavelength() - 0.01).abs() < 1e-15);
    }

    #[test]
    fn pure_los_has_constant_envelope() {
        let c = GeoSimConfig {
            params: ChannelParams::without_diffuse(1.3, 0.0, 0.2).unwrap(),
            ..GeoSimConfig::default()
        };
        let r = geo_realization(&c, 3).unwrap();
        assert!(r.samples.iter().all(|s| (s.norm() - 1.3).abs() < 1e-12));
    }

    #[test]
    fn two_ray_support_is_bounded() {
        let c = GeoSimConfig {
            params: ChannelParams::without_diffuse(1.0, 0.6, 0.0).unwrap(),
            n_realizations: 20,
            phase_reference: PhaseReference::TrackLos,
            ..GeoSimConfig::default()
        };
        let h = geo_phase_histogram(&c, Execution::Parallel).unwrap();
        let bound = 0.6f64.asin();
        for (i, &n) in h.counts().iter().enumerate() {
            if n > 0 {
                assert!(h.right_edge(i) > -bound - 1e-12 && h.left_edge(i) < bound + 1e-12);
            }
        }
    }

    #[test]
    fn crossing_the_reflector_is_rejected() {
        let c = GeoSimConfig {
            duration_s: 4.0,
            sample_time_s: 1e-3,
            ..GeoSimConfig::default()
        };
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        let c = GeoSimConfig {
            duration_s: 1.5e-5,
            ..GeoSimConfig::default()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn realizations_are_reproducible_and_distinct() {
        let c = GeoSimConfig::default();
        assert_eq!(geo_realization(&c, 7).unwrap(), geo_realization(&c, 7).unwrap());
        assert_ne!(geo_realization(&c, 7).unwrap(), geo_realization(&c, 8).unwrap());
    }
}
