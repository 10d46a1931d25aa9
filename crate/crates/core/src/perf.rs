//! Phase-synchronization error probability of M-PSK.
//!
//! `P_e = 2 ∫_{π/M}^{π} p(φ) dφ` is the probability that the received phase,
//! measured from the stronger specular ray, leaves the correct decision
//! sector. Additive noise at the detector is not included.

use std::cell::RefCell;
use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::phase::{rician_phase_pdf, PhasePdfSpec};
use crate::quad::{integrate_with_breaks, QuadOptions};
use crate::simulate::{map_chunks, McConfig};
use crate::{wrap_phase, ChannelParams, Error, Execution, Result};

/// Retained-power target used for error-probability integrals.
///
/// Truncating at 99.9% can drop up to 1e-3 of probability mass, which is far
/// coarser than the error probabilities of interest.
pub const PE_ALPHA_PCT: f64 = 99.9999;

/// Default absolute quadrature tolerance.
pub const DEFAULT_QUAD_TOL: f64 = 1e-11;

/// Error probability against `K` at fixed `Γ`, `Ω` and modulation order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeCurve {
    pub gamma: f64,
    pub omega: f64,
    pub m_order: u32,
    pub alpha_pct: f64,
    pub k_grid: Vec<f64>,
    pub pe_values: Vec<f64>,
}

fn check_order(m_order: u32) -> Result<()> {
    if m_order < 2 {
        return Err(Error::domain(format!("modulation order must be >= 2, got {m_order}")));
    }
    Ok(())
}

/// `P_e` for M-PSK over the truncated-series density at [`PE_ALPHA_PCT`].
pub fn pe_mpsk(params: &ChannelParams, m_order: u32, quad_tol: f64) -> Result<f64> {
    check_order(m_order)?;
    if params.phi1() != 0.0 {
        return Err(Error::domain("error probability is defined for Phi1 = 0"));
    }
    let spec = PhasePdfSpec::new(*params, PE_ALPHA_PCT)?;
    pe_mpsk_spec(&spec, m_order, quad_tol)
}

/// `P_e` for M-PSK over a prepared density evaluator.
pub fn pe_mpsk_spec(spec: &PhasePdfSpec, m_order: u32, quad_tol: f64) -> Result<f64> {
    check_order(m_order)?;
    let phi1 = spec.params().phi1();
    pe_quadrature(|phi| spec.density(wrap_phase(phi + phi1)), m_order, quad_tol)
}

/// `P_e` from the Rician phase density; the reference for `Γ = 0`.
pub fn pe_rician_oracle(k: f64, m_order: u32, quad_tol: f64) -> Result<f64> {
    check_order(m_order)?;
    if !(k >= 0.0) || !k.is_finite() {
        return Err(Error::domain(format!("K must be finite and >= 0, got {k}")));
    }
    pe_quadrature(|phi| Ok(rician_phase_pdf(k, phi)), m_order, quad_tol)
}

fn pe_quadrature<F: Fn(f64) -> Result<f64>>(pdf: F, m_order: u32, quad_tol: f64) -> Result<f64> {
    if !(quad_tol > 0.0) || !quad_tol.is_finite() {
        return Err(Error::domain(format!("quad_tol must be positive, got {quad_tol}")));
    }
    let lo = PI / m_order as f64;
    let mut breaks = vec![lo];
    if lo < FRAC_PI_2 {
        breaks.push(FRAC_PI_2);
    }
    breaks.push(PI);
    let failure = RefCell::new(None);
    let integrand = |phi: f64| match pdf(phi) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    // Half the budget each for the integral and the doubling.
    let r = integrate_with_breaks(integrand, &breaks, QuadOptions::abs(quad_tol / 4.0))?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    clamp_probability(2.0 * r.value, quad_tol)
}

fn clamp_probability(p: f64, tol: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else if p < 0.0 && p > -tol {
        Ok(0.0)
    } else if p > 1.0 && p < 1.0 + tol {
        Ok(1.0)
    } else {
        Err(Error::no_convergence("error probability outside [0, 1]", p))
    }
}

/// `P_e` at every `K` of an ascending grid, with the density truncated at
/// `alpha_pct` percent retained power.
pub fn pe_curve(
    gamma: f64,
    omega: f64,
    m_order: u32,
    k_grid: &[f64],
    alpha_pct: f64,
    quad_tol: f64,
    exec: Execution,
) -> Result<PeCurve> {
    check_order(m_order)?;
    if k_grid.is_empty() || k_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("K grid must be non-empty and strictly ascending"));
    }
    let pe_values = exec.try_map_slice(k_grid, |&k| {
        let p = ChannelParams::from_normalized(k, gamma, omega, 0.0)?;
        pe_mpsk_spec(&PhasePdfSpec::new(p, alpha_pct)?, m_order, quad_tol)
    })?;
    Ok(PeCurve {
        gamma,
        omega,
        m_order,
        alpha_pct,
        k_grid: k_grid.to_vec(),
        pe_values,
    })
}

/// Fraction of Monte Carlo phases with `|φ − Φ₁| > π/M`.
pub fn pe_monte_carlo(cfg: &McConfig, m_order: u32, exec: Execution) -> Result<f64> {
    check_order(m_order)?;
    cfg.validate()?;
    let half_sector = PI / m_order as f64;
    let phi1 = cfg.params.phi1();
    let errors: u64 = map_chunks(cfg, exec, |phases| {
        phases.filter(|&p| wrap_phase(p - phi1).abs() > half_sector).count() as u64
    })
    .into_iter()
    .sum();
    Ok(errors as f64 / cfg.n_samples as f64)
}

/// Standard deviation of a binomial proportion.
pub fn binomial_sigma(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}
