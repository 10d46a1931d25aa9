//! Quadrature references that bypass the mixture series.

use std::f64::consts::PI;

use libm::erfc;

use crate::quad::{integrate_with_breaks, QuadOptions};
use crate::specfun::{i0_scaled, ln_factorial};
use crate::{wrap_phase, ChannelParams, Error, Result};

/// Envelope support is cut where the Gaussian factor drops below `e^{-98}`.
const TAIL_SIGMAS: f64 = 14.0;

/// `p(φ | Φ₁)` by integrating the conditional density `p(φ | r)` of the
/// two-phasor geometry against the exact Rician envelope density of
/// `V₂ e^{jθ} + n`.
///
/// `tol` is the absolute accuracy requested from the quadrature.
pub fn phase_pdf_oracle(params: &ChannelParams, phi: f64, tol: f64) -> Result<f64> {
    params.require_diffuse()?;
    check_tol(tol)?;
    let sigma2 = params.sigma2();
    let sigma = sigma2.sqrt();
    let v2 = params.v2();
    // p(r)/r with the Bessel factor kept in scaled form.
    let rice_over_r = |r: f64| {
        let d = r - v2;
        (-(d * d) / (2.0 * sigma2)).exp() * i0_scaled(r * v2 / sigma2) / sigma2
    };
    let r_hi = v2 + TAIL_SIGMAS * sigma;
    let psi = wrap_phase(phi - params.phi1());
    conditional_integral(params.v1(), psi, rice_over_r, v2, r_hi, tol)
}

/// `p(φ | m)` by quadrature against the Nakagami density of shape `m + 1`
/// and spread `2σ²(m+1)`.
pub fn phase_pdf_term_oracle(params: &ChannelParams, m: usize, phi: f64, tol: f64) -> Result<f64> {
    params.require_diffuse()?;
    check_tol(tol)?;
    let s = 2.0 * params.sigma2();
    let mf = m as f64;
    let ln_norm = std::f64::consts::LN_2 - ln_factorial(m) - (mf + 1.0) * s.ln();
    let nakagami_over_r = |r: f64| {
        if r == 0.0 {
            return if m == 0 { ln_norm.exp() } else { 0.0 };
        }
        (ln_norm + 2.0 * mf * r.ln() - r * r / s).exp()
    };
    let peak = (s * mf.max(0.5)).sqrt();
    let r_hi = (s * (mf + 1.0)).sqrt() + TAIL_SIGMAS * (s / 2.0).sqrt();
    let psi = wrap_phase(phi - params.phi1());
    conditional_integral(params.v1(), psi, nakagami_over_r, peak, r_hi, tol)
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::domain(format!("oracle tolerance must be positive, got {tol}")));
    }
    Ok(())
}

/// `∫ p(ψ | r) p(r) dr` for the phase `ψ` of `v1 + r e^{jθ}`, θ uniform.
///
/// `g(r) = p(r)/r`. Below `r = v1` only `|ψ| < π/2` is reachable, with
/// density `v1 cosψ / (π √(r² − v1² sin²ψ))`; above it the density is
/// `1/(2π) + v1 cosψ / (2π √(r² − v1² sin²ψ))`. Substituting
/// `r = √(v1² sin²ψ + u²)` removes the inverse square root at the lower end.
fn conditional_integral<G: Fn(f64) -> f64>(
    v1: f64,
    psi: f64,
    g: G,
    r_peak: f64,
    r_hi: f64,
    tol: f64,
) -> Result<f64> {
    let inv_2pi = 0.5 / PI;
    let r_hi = r_hi.max(v1);
    let opts = QuadOptions {
        abs_tol: tol / 4.0,
        rel_tol: 0.0,
        max_intervals: 20_000,
    };
    let (sin, cos) = psi.sin_cos();
    let c = v1 * sin.abs();
    let u_of = |r: f64| (r * r - c * c).max(0.0).sqrt();
    let r_of = |u: f64| (c * c + u * u).sqrt();

    // Uniform part above v1.
    let mut breaks = vec![v1];
    if r_peak > v1 && r_peak < r_hi {
        breaks.push(r_peak);
    }
    breaks.push(r_hi);
    let uniform = integrate_with_breaks(|r| r * g(r), &breaks, opts)?.value * inv_2pi;

    if v1 == 0.0 || cos == 0.0 {
        return Ok(uniform);
    }

    let u_split = v1 * cos.abs();
    let u_peak = if r_peak > c { Some(u_of(r_peak)) } else { None };
    let with_peak = |lo: f64, hi: f64| {
        let mut b = vec![lo];
        if let Some(p) = u_peak {
            if p > lo && p < hi {
                b.push(p);
            }
        }
        b.push(hi);
        b
    };

    let mut total = uniform;
    if cos > 0.0 {
        let inner = integrate_with_breaks(|u| g(r_of(u)), &with_peak(0.0, u_split), opts)?.value;
        total += v1 * cos / PI * inner;
    }
    let u_hi = u_of(r_hi);
    if u_hi > u_split {
        let outer = integrate_with_breaks(|u| g(r_of(u)), &with_peak(u_split, u_hi), opts)?.value;
        total += v1 * cos * inv_2pi * outer;
    }
    Ok(total)
}

/// Rician phase density
/// `e^{−k}/(2π) + √(k/π) cosφ e^{−k sin²φ} (1 + erf(√k cosφ)) / 2`.
pub fn rician_phase_pdf(k: f64, phi: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    let rk = k.sqrt();
    (-k).exp() / (2.0 * PI) + (k / PI).sqrt() * c * (-k * s * s).exp() * erfc(-rk * c) / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate;

    fn params(k: f64, g: f64) -> ChannelParams {
        ChannelParams::from_normalized(k, g, 1.0, 0.0).unwrap()
    }

    #[test]
    fn rician_closed_form_properties() {
        assert!((rician_phase_pdf(0.0, 1.0) - 0.5 / PI).abs() < 1e-16);
        for &k in &[0.5, 2.0, 10.0] {
            let r = integrate(|p| rician_phase_pdf(k, p), -PI, PI, QuadOptions::default()).unwrap();
            assert!((r.value - 1.0).abs() < 1e-12);
        }
        assert!(rician_phase_pdf(10.0, 0.0) > rician_phase_pdf(2.0, 0.0));
    }

    #[test]
    fn oracle_reduces_to_rician_and_uniform() {
        let v = phase_pdf_oracle(&params(5.0, 0.0), 0.5, 1e-12).unwrap();
        assert!((v - rician_phase_pdf(5.0, 0.5)).abs() < 1e-9);
        let v = phase_pdf_oracle(&params(0.0, 0.0), 2.0, 1e-12).unwrap();
        assert!((v - 0.5 / PI).abs() < 1e-10);
    }

    #[test]
    fn oracle_normalizes() {
        let p = params(10.0, 0.7);
        let r = integrate(|phi| phase_pdf_oracle(&p, phi, 1e-11).unwrap(), -PI, PI, QuadOptions::abs(1e-9)).unwrap();
        assert!((r.value - 1.0).abs() < 1e-8, "{}", r.value);
    }

    #[test]
    fn term_oracle_first_term_is_rician() {
        let p = params(5.0, 0.0);
        for &phi in &[0.0, 1.0, 2.5] {
            let v = phase_pdf_term_oracle(&p, 0, phi, 1e-12).unwrap();
            assert!((v - rician_phase_pdf(5.0, phi)).abs() < 1e-9);
        }
    }
}
