//! Truncated Poisson–Nakagami series for the conditional phase density.
//!
//! With `a = V₁²/(2σ²)`, `ψ = φ − Φ₁`, `x = a sin²ψ` and `y = a cos²ψ`, the
//! density conditioned on mixture index `m` is
//!
//! ```text
//! 2π p(φ|m) = Q(m+1, a)
//!           + √a cosψ · Σ_{j=0}^{m} Po(m−j; x) Γ(j+½)/j!
//!           + 2 cos²ψ · a^{m+1} e^{−a} / m! · Φ₁(1, −m, 3/2; cos²ψ, y)
//! ```
//!
//! The middle sum is the finite Tricomi function `U(½, m+3/2, x)` times
//! `√x e^{−x}`, written so that the `1/tan|ψ|` factor of the integral form has
//! already cancelled; every term is smooth in `ψ`, including at `0`, `±π/2`
//! and `π`. The Humbert factor uses the positive expansion of
//! [`crate::specfun::humbert_phi1_terminating`].

use std::f64::consts::PI;

use super::truncation::{truncation_bounds_with, TruncationBounds, TruncationRule};
use crate::specfun::{
    kummer_m1_scaled_table, ln_factorial, ln_poisson_pmf, phi1_terminating_scaled, reg_gamma_q, SeriesControl,
};
use crate::{wrap_phase, ChannelParams, Error, Execution, Result};

/// Weights below this are flushed to zero.
const WEIGHT_FLOOR: f64 = 1e-300;

/// Largest `V₁²/(2σ²)` the evaluator accepts.
pub const MAX_SPECULAR_RATIO: f64 = 700.0;

/// Immutable evaluator for `p(φ | Φ₁)` at one parameter set.
#[derive(Clone, Debug)]
pub struct PhasePdfSpec {
    params: ChannelParams,
    bounds: TruncationBounds,
    /// Poisson weights for `m = m_min..=m_max`.
    weights: Vec<f64>,
    /// `Q(m+1, a)` for the same range.
    upper_gamma: Vec<f64>,
    a: f64,
    ctl: SeriesControl,
}

impl PhasePdfSpec {
    /// Evaluator keeping `alpha_pct` percent of the power (covering rule).
    pub fn new(params: ChannelParams, alpha_pct: f64) -> Result<Self> {
        Self::with_rule(params, alpha_pct, TruncationRule::default())
    }

    pub fn with_rule(params: ChannelParams, alpha_pct: f64, rule: TruncationRule) -> Result<Self> {
        params.require_diffuse()?;
        let a = params.specular_ratio();
        if a > MAX_SPECULAR_RATIO {
            return Err(Error::domain(format!(
                "V1^2/(2 sigma^2) = {a} exceeds the supported {MAX_SPECULAR_RATIO}"
            )));
        }
        let nu = params.nu();
        let bounds = truncation_bounds_with(nu, alpha_pct, rule)?;
        let weights = (bounds.m_min..=bounds.m_max)
            .map(|m| {
                let w = ln_poisson_pmf(m, nu).exp();
                if w < WEIGHT_FLOOR {
                    0.0
                } else {
                    w
                }
            })
            .collect();
        let upper_gamma = (bounds.m_min..=bounds.m_max)
            .map(|m| reg_gamma_q(m as f64 + 1.0, a))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            params,
            bounds,
            weights,
            upper_gamma,
            a,
            ctl: SeriesControl::default(),
        })
    }

    pub fn params(&self) -> &ChannelParams {
        &self.params
    }

    pub fn bounds(&self) -> TruncationBounds {
        self.bounds
    }

    /// Poisson weights `p(m)` for `m = m_min..=m_max`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `p(φ | Φ₁)`.
    pub fn density(&self, phi: f64) -> Result<f64> {
        let psi = wrap_phase(phi - self.params.phi1());
        let mut total = 0.0;
        let m_min = self.bounds.m_min;
        for_each_term(self.a, psi, m_min, self.bounds.m_max, &self.upper_gamma, &self.ctl, |m, t| {
            total += self.weights[m - m_min] * t;
        })?;
        // The terms are nonnegative in exact arithmetic; clip rounding residue.
        Ok(total.max(0.0))
    }

    /// Densities at every point of `phis`, in order.
    pub fn density_grid(&self, phis: &[f64], exec: Execution) -> Result<Vec<f64>> {
        exec.try_map_slice(phis, |&p| self.density(p))
    }
}

/// Truncated-series density; same as [`PhasePdfSpec::density`].
pub fn phase_pdf(spec: &PhasePdfSpec, phi: f64) -> Result<f64> {
    spec.density(phi)
}

/// `p(φ | m)`: the phase density given the Rician envelope is Nakagami with
/// shape `m + 1`.
pub fn phase_pdf_term(params: &ChannelParams, m: usize, phi: f64) -> Result<f64> {
    params.require_diffuse()?;
    let a = params.specular_ratio();
    if a > MAX_SPECULAR_RATIO {
        return Err(Error::domain(format!(
            "V1^2/(2 sigma^2) = {a} exceeds the supported {MAX_SPECULAR_RATIO}"
        )));
    }
    let q = [reg_gamma_q(m as f64 + 1.0, a)?];
    let psi = wrap_phase(phi - params.phi1());
    let mut out = 0.0;
    for_each_term(a, psi, m, m, &q, &SeriesControl::default(), |_, t| out = t)?;
    Ok(out.max(0.0))
}

/// Calls `visit(m, p(φ|m))` for `m = m_lo..=m_hi`; `upper_gamma[i]` holds
/// `Q(m_lo + i + 1, a)`.
fn for_each_term<F: FnMut(usize, f64)>(
    a: f64,
    psi: f64,
    m_lo: usize,
    m_hi: usize,
    upper_gamma: &[f64],
    ctl: &SeriesControl,
    mut visit: F,
) -> Result<()> {
    let inv_2pi = 0.5 / PI;
    if a == 0.0 {
        for (i, m) in (m_lo..=m_hi).enumerate() {
            visit(m, upper_gamma[i] * inv_2pi);
        }
        return Ok(());
    }
    let (sin, cos) = psi.sin_cos();
    let s2 = sin * sin;
    let c2 = cos * cos;
    let x = a * s2;
    let y = a * c2;
    let sqrt_a = a.sqrt();
    let ln_a = a.ln();

    let kummer = kummer_m1_scaled_table(y, m_hi, ctl)?;
    // Po(i; x) for i = 0..=m_hi
    let poisson: Vec<f64> = (0..=m_hi).map(|i| ln_poisson_pmf(i, x).exp()).collect();
    // Γ(j + ½) / j!
    let mut half_ratio = Vec::with_capacity(m_hi + 1);
    let mut g = PI.sqrt();
    for j in 0..=m_hi {
        half_ratio.push(g);
        g *= (j as f64 + 0.5) / (j as f64 + 1.0);
    }

    for (i, m) in (m_lo..=m_hi).enumerate() {
        let tricomi: f64 = (0..=m).map(|j| poisson[m - j] * half_ratio[j]).sum();
        let middle = sqrt_a * cos * tricomi;
        let humbert = if c2 == 0.0 {
            0.0
        } else {
            let scaled = phi1_terminating_scaled(m, c2, s2, &kummer);
            if scaled > 0.0 {
                let ln_pref = (m as f64 + 1.0) * ln_a - ln_factorial(m) - x;
                2.0 * c2 * (ln_pref + scaled.ln()).exp()
            } else {
                0.0
            }
        };
        visit(m, (upper_gamma[i] + middle + humbert) * inv_2pi);
    }
    Ok(())
}
