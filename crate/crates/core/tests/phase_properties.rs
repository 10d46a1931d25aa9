use std::f64::consts::PI;

use proptest::prelude::*;

use twdp_core::closed_form::phase_pdf_closed;
use twdp_core::phase::{
    phase_grid, phase_pdf_oracle, phase_pdf_term, phase_pdf_term_oracle, truncation_bounds, wald_bounds,
    PhasePdfSpec, DEFAULT_GRID_POINTS,
};
use twdp_core::quad::{integrate_with_breaks, QuadOptions};
use twdp_core::specfun::{phi3_envelope, SeriesControl};
use twdp_core::{wrap_phase, ChannelParams, Execution};

const KS: [f64; 5] = [0.0, 1.0, 5.0, 10.0, 15.0];
const GAMMAS: [f64; 4] = [0.0, 0.3, 0.7, 1.0];

fn params(k: f64, g: f64) -> ChannelParams {
    ChannelParams::from_normalized(k, g, 1.0, 0.0).unwrap()
}

#[test]
fn normalization_within_truncation_budget() {
    for alpha in [99.9, 99.9999] {
        for k in KS {
            for g in GAMMAS {
                let spec = PhasePdfSpec::new(params(k, g), alpha).unwrap();
                let r = integrate_with_breaks(
                    |phi| spec.density(phi).unwrap(),
                    &[-PI, -PI / 2.0, 0.0, PI / 2.0, PI],
                    QuadOptions::abs(1e-11),
                )
                .unwrap();
                let budget = 1.0 - alpha / 100.0 + 1e-6;
                assert!((r.value - 1.0).abs() <= budget, "K={k} G={g} alpha={alpha}: {}", r.value);
                // The truncated mixture integrates to the retained Poisson mass.
                assert!((r.value - spec.weight_sum()).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn even_symmetry_and_nonnegativity() {
    let grid = phase_grid(DEFAULT_GRID_POINTS);
    for k in KS {
        for g in GAMMAS {
            let spec = PhasePdfSpec::new(params(k, g), 99.9).unwrap();
            let v = spec.density_grid(&grid, Execution::Parallel).unwrap();
            assert!(v.iter().all(|&x| x >= 0.0));
            for &phi in grid.iter().step_by(7) {
                let d = (spec.density(phi).unwrap() - spec.density(-phi).unwrap()).abs();
                assert!(d <= 1e-12, "K={k} G={g} phi={phi}");
            }
        }
    }
}

#[test]
fn shift_equivariance_is_exact() {
    let base = params(7.0, 0.6);
    let spec0 = PhasePdfSpec::new(base, 99.9).unwrap();
    for phi1 in [0.4, -2.0, PI] {
        let spec = PhasePdfSpec::new(base.with_phi1(phi1), 99.9).unwrap();
        for &phi in phase_grid(97).iter() {
            assert_eq!(spec.density(phi).unwrap(), spec0.density(wrap_phase(phi - phi1)).unwrap());
        }
    }
}

#[test]
fn oracle_spot_values() {
    let p = params(10.0, 0.7);
    let spec = PhasePdfSpec::new(p, 99.9999).unwrap();
    for phi in [0.0, 0.5, -0.5, 1.5, -1.5, 2.5, -2.5, PI] {
        let d = (spec.density(phi).unwrap() - phase_pdf_oracle(&p, phi, 1e-11).unwrap()).abs();
        assert!(d <= 1e-6, "phi={phi}: {d}");
    }
}

#[test]
fn single_term_against_nakagami_quadrature() {
    let p = params(10.0, 0.7);
    for m in [0, 2, 7, 15] {
        for phi in [0.0, 1.0, PI / 2.0, 2.2, PI] {
            let a = phase_pdf_term(&p, m, phi).unwrap();
            let b = phase_pdf_term_oracle(&p, m, phi, 1e-12).unwrap();
            assert!((a - b).abs() <= 1e-10, "m={m} phi={phi}: {a} vs {b}");
        }
    }
}

#[test]
fn wald_interval_undercovers_at_moderate_nu() {
    // ν = 4: the normal-approximation interval keeps less than its target.
    let w = wald_bounds(4.0, 99.9).unwrap();
    assert_eq!((w.m_min, w.m_max), (0, 11));
    assert!(w.retained_power(4.0) < 0.999);
    let c = truncation_bounds(4.0, 99.9).unwrap();
    assert_eq!((c.m_min, c.m_max), (0, 12));
    assert!(c.retained_power(4.0) >= 0.999);
}

#[test]
fn weights_are_finite_and_sub_stochastic() {
    for k in [0.0, 30.0, 60.0, 200.0] {
        let spec = PhasePdfSpec::new(params(k, 1.0), 99.9).unwrap();
        let s = spec.weight_sum();
        assert!(s > 0.0 && s <= 1.0 + 1e-15);
        assert!(spec.weights().iter().all(|w| w.is_finite() && *w >= 0.0));
    }
}

#[test]
fn closed_form_symmetry_and_envelope() {
    let ctl = SeriesControl::default();
    for (k, g) in [(3.0, 0.5), (8.0, 1.0)] {
        let p = params(k, g);
        for phi in [0.3, 1.1, 2.7] {
            let a = phase_pdf_closed(&p, phi, &ctl).unwrap().total();
            let b = phase_pdf_closed(&p, -phi, &ctl).unwrap().total();
            assert!((a - b).abs() < 1e-12);
            assert!(a >= 0.0);
        }
        let a = p.specular_ratio();
        let nu = p.nu();
        let v = twdp_core::specfun::humbert_phi3(1.0, 2.0, a, a * nu, &ctl).unwrap();
        assert!(v <= phi3_envelope(1.0, 2.0, a, a * nu));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn random_parameters_give_valid_density(k in 0.0f64..40.0, g in 0.0f64..=1.0, phi in -PI..PI) {
        let spec = PhasePdfSpec::new(params(k, g), 99.9).unwrap();
        let v = spec.density(phi).unwrap();
        prop_assert!(v >= 0.0 && v.is_finite());
        prop_assert!((v - spec.density(-phi).unwrap()).abs() <= 1e-12);
    }
}
