use super::gamma::{ln_factorial, ln_gamma_pos};
use super::SeriesControl;
use crate::quad::{integrate_to_infinity, QuadOptions};
use crate::{Error, Result};

/// Tricomi confluent hypergeometric function `U(a, b, z)` for `a > 0`, `z > 0`.
///
/// When `b − a − 1 = m` is a nonnegative integer (the orders used by the
/// phase density: `U(1/2, m + 3/2, ·)` and `U(1, m + 2, ·)`) the integral
/// representation collapses to the positive finite sum
///
/// ```text
/// U(a, a + m + 1, z) = z^{-a} Σ_{j=0}^{m} C(m, j) (a)_j z^{-j}
/// ```
///
/// which is evaluated in log space. Other orders fall back to
/// [`tricomi_u_quadrature`].
pub fn tricomi_u(a: f64, b: f64, z: f64, ctl: &SeriesControl) -> Result<f64> {
    ctl.validate()?;
    check_args(a, z)?;
    let m = b - a - 1.0;
    if m >= 0.0 && (m - m.round()).abs() < 1e-12 && (m.round() as usize) < ctl.max_terms {
        return Ok(finite_sum(a, m.round() as usize, z));
    }
    tricomi_u_quadrature(a, b, z, ctl.rel_tol.max(1e-13))
}

fn check_args(a: f64, z: f64) -> Result<()> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain(format!("tricomi_u needs z > 0, got {z}")));
    }
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain(format!("tricomi_u needs a > 0, got {a}")));
    }
    Ok(())
}

fn finite_sum(a: f64, m: usize, z: f64) -> f64 {
    let ln_z = z.ln();
    let ln_gamma_a = ln_gamma_pos(a);
    let logs: Vec<f64> = (0..=m)
        .map(|j| {
            let ln_binom = ln_factorial(m) - ln_factorial(j) - ln_factorial(m - j);
            ln_binom + ln_gamma_pos(a + j as f64) - ln_gamma_a - (a + j as f64) * ln_z
        })
        .collect();
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = logs.iter().map(|l| (l - top).exp()).sum();
    top.exp() * s
}

/// `U(a, b, z)` from its integral representation
///
/// ```text
/// U(a, b, z) = 1/Γ(a) ∫₀^∞ e^{-zt} t^{a-1} (1+t)^{b-a-1} dt
/// ```
///
/// by adaptive Gauss–Kronrod quadrature. For `a < 1` the substitution
/// `t = s^{1/a}` removes the endpoint singularity.
pub fn tricomi_u_quadrature(a: f64, b: f64, z: f64, rel_tol: f64) -> Result<f64> {
    check_args(a, z)?;
    let p = b - a - 1.0;
    let log_integrand = |t: f64| -z * t + (a - 1.0) * t.ln() + p * t.ln_1p();
    // scale by the integrand at its approximate peak to stay in range
    let t_peak = {
        // root of -z + (a-1)/t + p/(1+t) = 0
        let qa = z;
        let qb = z - (a - 1.0) - p;
        let qc = -(a - 1.0);
        let disc = (qb * qb - 4.0 * qa * qc).max(0.0);
        ((-qb + disc.sqrt()) / (2.0 * qa)).max(1e-3)
    };
    let shift = log_integrand(t_peak);
    let opts = QuadOptions {
        abs_tol: 0.0,
        rel_tol,
        max_intervals: 4000,
    };
    let (integral, log_norm) = if a < 1.0 {
        let inv_a = 1.0 / a;
        let g = |s: f64| {
            if s == 0.0 {
                return (-shift).exp();
            }
            let t = s.powf(inv_a);
            (-z * t + p * t.ln_1p() - shift).exp()
        };
        (integrate_to_infinity(g, 0.0, opts)?.value, ln_gamma_pos(a + 1.0))
    } else {
        let g = |t: f64| {
            if t == 0.0 {
                return if a == 1.0 { (-shift).exp() } else { 0.0 };
            }
            (log_integrand(t) - shift).exp()
        };
        (integrate_to_infinity(g, 0.0, opts)?.value, ln_gamma_pos(a))
    };
    Ok(integral * (shift - log_norm).exp())
}
