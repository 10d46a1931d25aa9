use twdp_core::perf::{binomial_sigma, pe_curve, pe_monte_carlo, pe_mpsk, DEFAULT_QUAD_TOL, PE_ALPHA_PCT};
use twdp_core::simulate::McConfig;
use twdp_core::{ChannelParams, Execution};

fn k_grid() -> Vec<f64> {
    (1..=20).map(f64::from).collect()
}

#[test]
fn bpsk_improves_with_k_while_higher_orders_barely_move() {
    let ks = k_grid();
    let bpsk = pe_curve(0.4, 1.0, 2, &ks, PE_ALPHA_PCT, DEFAULT_QUAD_TOL, Execution::Parallel).unwrap();
    assert!(bpsk.pe_values.windows(2).all(|w| w[1] < w[0]));
    let psk8 = pe_curve(0.4, 1.0, 8, &ks, PE_ALPHA_PCT, DEFAULT_QUAD_TOL, Execution::Parallel).unwrap();
    let span = |v: &[f64]| v[0] / v[v.len() - 1];
    // 8-PSK stays high and changes by a small factor; BPSK drops by decades.
    assert!(psk8.pe_values.iter().all(|&p| p > 0.25));
    assert!(span(&psk8.pe_values) < 3.0);
    assert!(span(&bpsk.pe_values) > 1000.0);
}

#[test]
fn equal_specular_rays_keep_a_high_floor() {
    let c = pe_curve(1.0, 1.0, 2, &[1.0, 20.0], PE_ALPHA_PCT, DEFAULT_QUAD_TOL, Execution::Parallel).unwrap();
    assert!(c.pe_values[1] > 0.1 * c.pe_values[0]);
}

#[test]
fn rician_tail_at_large_k() {
    let p = ChannelParams::from_normalized(50.0, 0.0, 1.0, 0.0).unwrap();
    assert!(pe_mpsk(&p, 2, DEFAULT_QUAD_TOL).unwrap() < 1e-6);
}

#[test]
fn order_and_range() {
    for (k, g) in [(0.5, 0.0), (4.0, 0.8), (12.0, 0.3)] {
        let p = ChannelParams::from_normalized(k, g, 1.0, 0.0).unwrap();
        let v: Vec<f64> = [2, 4, 8, 16, 32].iter().map(|&m| pe_mpsk(&p, m, DEFAULT_QUAD_TOL).unwrap()).collect();
        assert!(v.iter().all(|p| (0.0..=1.0).contains(p)));
        assert!(v.windows(2).all(|w| w[1] >= w[0]));
    }
}

#[test]
fn monte_carlo_rician_agreement() {
    let p = ChannelParams::from_normalized(5.0, 0.0, 1.0, 0.0).unwrap();
    let cfg = McConfig {
        n_samples: 2_000_000,
        seed: 77,
        ..McConfig::new(p)
    };
    let q = twdp_core::perf::pe_rician_oracle(5.0, 2, DEFAULT_QUAD_TOL).unwrap();
    let mc = pe_monte_carlo(&cfg, 2, Execution::Parallel).unwrap();
    assert!((mc - q).abs() <= 3.0 * binomial_sigma(q, cfg.n_samples));
}
