use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use twdp_core::phase::PhasePdfSpec;
use twdp_core::simulate::{
    geo_phase_histogram, geo_realization, mc_phase_samples, ClarkeDiffuse, GeoSimConfig, Histogram, McConfig,
};
use twdp_core::{ChannelParams, Execution};

fn chi_square_uniform_p_value(h: &Histogram) -> f64 {
    let expected = h.total() as f64 / h.n_bins() as f64;
    let stat: f64 = h.counts().iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let dist = ChiSquared::new((h.n_bins() - 1) as f64).unwrap();
    1.0 - dist.cdf(stat)
}

#[test]
fn rayleigh_monte_carlo_is_uniform() {
    let cfg = McConfig::new(ChannelParams::from_normalized(0.0, 0.0, 1.0, 0.0).unwrap());
    let r = mc_phase_samples(&cfg, Execution::Parallel).unwrap();
    assert_eq!(r.histogram.total(), 10_000_000);
    let p = chi_square_uniform_p_value(&r.histogram);
    assert!(p > 0.001, "p = {p}");
    let integral: f64 = r.histogram.densities().iter().sum::<f64>() * r.histogram.width();
    assert!((integral - 1.0).abs() < 1e-12);
}

#[test]
fn diffuse_process_is_isotropic() {
    // One sample per independently drawn process, at a spread of times.
    let mut h = Histogram::new(64);
    for i in 0..1_000_000u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0x15_0707);
        rng.set_stream(i);
        let d = ClarkeDiffuse::draw(&mut rng, 16, 1000.0);
        h.add(d.sample((i % 750) as f64 * 1e-5).arg());
    }
    let p = chi_square_uniform_p_value(&h);
    assert!(p > 0.001, "p = {p}");
}

#[test]
fn diffuse_power_calibration() {
    let mut power = 0.0;
    let mut n = 0usize;
    for i in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0xca1b);
        rng.set_stream(i);
        let d = ClarkeDiffuse::draw(&mut rng, 64, 1000.0);
        // 2 s at 10 µs: 2000 Doppler periods per run.
        for k in 0..200_000 {
            power += d.sample(k as f64 * 1e-5).norm_sqr();
            n += 1;
        }
    }
    let mean = power / n as f64;
    assert!((mean - 1.0).abs() < 0.01, "mean power {mean}");

    // Scaled inside the simulator to 2σ².
    let cfg = GeoSimConfig {
        params: ChannelParams::new(0.0, 0.0, 0.35, 0.0).unwrap(),
        n_realizations: 400,
        ..GeoSimConfig::default()
    };
    let total: f64 = (0..cfg.n_realizations)
        .map(|i| geo_realization(&cfg, i).unwrap().samples.iter().map(|s| s.norm_sqr()).sum::<f64>())
        .sum();
    let mean = total / (cfg.n_realizations * cfg.n_samples().unwrap()) as f64;
    assert!((mean / 0.7 - 1.0).abs() < 0.05, "mean power {mean}");
}

#[test]
fn simulators_are_reproducible_across_policies() {
    let cfg = GeoSimConfig {
        n_realizations: 40,
        ..GeoSimConfig::default()
    };
    let a = geo_phase_histogram(&cfg, Execution::Sequential).unwrap();
    let b = geo_phase_histogram(&cfg, Execution::Parallel).unwrap();
    assert_eq!(a, b);
    let c = geo_phase_histogram(&GeoSimConfig { seed: 1, ..cfg }, Execution::Parallel).unwrap();
    assert_ne!(a, c);
}

#[test]
fn rotation_measures() {
    let rot = GeoSimConfig::default().specular_rotation().unwrap();
    assert!((rot.los_degrees - 10.1).abs() < 0.1, "{rot:?}");
    assert!((rot.reflected_turns - 4.085).abs() < 0.01, "{rot:?}");
}

/// Per-bin standard error of the geometric histogram from batch means.
fn geo_batches(cfg: &GeoSimConfig, batches: usize) -> (Vec<f64>, Vec<f64>) {
    let per = cfg.n_realizations / batches;
    let dens: Vec<Vec<f64>> = (0..batches)
        .map(|b| {
            let c = GeoSimConfig {
                n_realizations: per,
                seed: cfg.seed.wrapping_add(b as u64 * 0x9e37_79b9),
                ..*cfg
            };
            geo_phase_histogram(&c, Execution::Parallel).unwrap().densities()
        })
        .collect();
    let n_bins = cfg.n_bins;
    let bf = batches as f64;
    let mean: Vec<f64> = (0..n_bins).map(|i| dens.iter().map(|d| d[i]).sum::<f64>() / bf).collect();
    let se: Vec<f64> = (0..n_bins)
        .map(|i| {
            let var = dens.iter().map(|d| (d[i] - mean[i]).powi(2)).sum::<f64>() / (bf - 1.0);
            (var / bf).sqrt()
        })
        .collect();
    (mean, se)
}

#[test]
fn monte_carlo_and_geometric_simulators_agree() {
    let params = ChannelParams::from_normalized(10.0, 0.7, 1.0, 0.0).unwrap();
    let geo = GeoSimConfig {
        n_realizations: 1600,
        n_bins: 64,
        params,
        ..GeoSimConfig::default()
    };
    let (geo_mean, geo_se) = geo_batches(&geo, 16);
    let mc = McConfig {
        n_samples: 2_000_000,
        n_bins: 64,
        ..McConfig::new(params)
    };
    let h = mc_phase_samples(&mc, Execution::Parallel).unwrap().histogram;
    let w = h.width();
    let mc_dens = h.densities();
    let worst_z = (0..64)
        .map(|i| {
            let mc_se = (mc_dens[i] / (mc.n_samples as f64 * w)).sqrt();
            let se = (geo_se[i].powi(2) + mc_se.powi(2)).sqrt().max(1e-6);
            (geo_mean[i] - mc_dens[i]).abs() / se
        })
        .fold(0.0, f64::max);
    assert!(worst_z < 5.0, "max |z| = {worst_z}");
}

#[test]
fn geometric_deviation_shrinks_as_inverse_square_root() {
    let cfg = GeoSimConfig::default();
    let spec = PhasePdfSpec::new(cfg.params, 99.9999).unwrap();
    let analytic = Histogram::new(cfg.n_bins).bin_averages(|phi| spec.density(phi).unwrap());
    let mean_dev = |n: usize| {
        (0..6u64)
            .map(|s| {
                let c = GeoSimConfig {
                    n_realizations: n,
                    seed: 1000 + s,
                    ..cfg
                };
                geo_phase_histogram(&c, Execution::Parallel).unwrap().max_abs_deviation(&analytic)
            })
            .sum::<f64>()
            / 6.0
    };
    let (d200, d800) = (mean_dev(200), mean_dev(800));
    let ratio = d200 / d800;
    // Quadrupling the realizations halves the deviation.
    assert!((1.5..2.7).contains(&ratio), "{d200} / {d800} = {ratio}");
}

#[test]
fn envelope_power_matches_omega() {
    let cfg = GeoSimConfig::default();
    let total: f64 = (0..cfg.n_realizations)
        .map(|i| geo_realization(&cfg, i).unwrap().samples.iter().map(|s| s.norm_sqr()).sum::<f64>())
        .sum();
    let mean = total / (cfg.n_realizations * cfg.n_samples().unwrap()) as f64;
    assert!((mean - 1.0).abs() < 0.05, "mean power {mean}");
}
