//! Closed-form conditional phase density.
//!
//! Summing the mixture series over all `m` in closed form gives, with
//! `a = V₁²/(2σ²)`, `ν = V₂²/(2σ²)` and `ψ = φ − Φ₁`,
//!
//! ```text
//! 2π p(φ) = 1 − a e^{−a−ν} Φ₃(1, 2; a, aν)
//!         + √π √a cosψ e^{−a sin²ψ − ν} Φ₃(½, 1; ν, aν sin²ψ)
//!         + 2 a cos²ψ e^{−a−ν} F(−aν cos²ψ, a cos²ψ, aν)
//! ```
//!
//! where `F` is [`triple_f3_instance`]. The expression is a cross-check for
//! the series evaluator, not a production path: the triple series alternates
//! in its first argument and loses precision as `K` grows.

use std::f64::consts::PI;

use serde::Serialize;

use crate::specfun::{humbert_phi3, triple_f3_instance, SeriesControl};
use crate::{wrap_phase, ChannelParams, Error, Result};

/// Largest `K` accepted by [`phase_pdf_closed`].
pub const DEFAULT_K_CAP: f64 = 20.0;

/// The three lines of the closed form, each already divided by `2π`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClosedFormTerms {
    pub uniform_term: f64,
    pub cos_term: f64,
    pub triple_term: f64,
}

impl ClosedFormTerms {
    pub fn total(&self) -> f64 {
        self.uniform_term + self.cos_term + self.triple_term
    }
}

/// Closed-form `p(φ | Φ₁)` for `K <= 20`.
pub fn phase_pdf_closed(params: &ChannelParams, phi: f64, ctl: &SeriesControl) -> Result<ClosedFormTerms> {
    phase_pdf_closed_with_cap(params, phi, ctl, DEFAULT_K_CAP)
}

/// Closed-form `p(φ | Φ₁)` with an explicit bound on `K`.
pub fn phase_pdf_closed_with_cap(
    params: &ChannelParams,
    phi: f64,
    ctl: &SeriesControl,
    k_cap: f64,
) -> Result<ClosedFormTerms> {
    params.require_diffuse()?;
    // K recomputed from (V1, V2, σ²) may exceed a round input by an ulp or two.
    if params.k() > k_cap * (1.0 + 1e-12) {
        return Err(Error::domain(format!(
            "closed form limited to K <= {k_cap}, got K = {}",
            params.k()
        )));
    }
    let inv_2pi = 0.5 / PI;
    let a = params.specular_ratio();
    let nu = params.nu();
    if a == 0.0 {
        return Ok(ClosedFormTerms {
            uniform_term: inv_2pi,
            cos_term: 0.0,
            triple_term: 0.0,
        });
    }
    let psi = wrap_phase(phi - params.phi1());
    let (sin, cos) = psi.sin_cos();
    let s2 = sin * sin;
    let c2 = cos * cos;

    let phi3_a = humbert_phi3(1.0, 2.0, a, a * nu, ctl).map_err(|e| context(e, "uniform term"))?;
    let uniform_term = inv_2pi * (1.0 - a * (-a - nu).exp() * phi3_a);

    let phi3_b = humbert_phi3(0.5, 1.0, nu, a * nu * s2, ctl).map_err(|e| context(e, "cosine term"))?;
    let cos_term = inv_2pi * PI.sqrt() * a.sqrt() * cos * (-a * s2 - nu).exp() * phi3_b;

    let triple_term = if c2 == 0.0 {
        0.0
    } else {
        let f = triple_f3_instance(-a * nu * c2, a * c2, a * nu, ctl).map_err(|e| context(e, "triple term"))?;
        inv_2pi * 2.0 * a * c2 * (-a - nu).exp() * f
    };
    Ok(ClosedFormTerms {
        uniform_term,
        cos_term,
        triple_term,
    })
}

fn context(e: Error, term: &str) -> Error {
    match e {
        Error::NonConvergence { what, estimate } => Error::NonConvergence {
            what: format!("closed form {term}: {what}"),
            estimate,
        },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::rician_phase_pdf;

    fn params(k: f64, g: f64) -> ChannelParams {
        ChannelParams::from_normalized(k, g, 1.0, 0.0).unwrap()
    }

    #[test]
    fn rayleigh_terms() {
        let t = phase_pdf_closed(&params(0.0, 0.0), 1.0, &SeriesControl::default()).unwrap();
        assert_eq!(t.uniform_term, 0.5 / PI);
        assert_eq!(t.cos_term, 0.0);
        assert_eq!(t.triple_term, 0.0);
    }

    #[test]
    fn rician_reduction() {
        let t = phase_pdf_closed(&params(5.0, 0.0), 0.8, &SeriesControl::default()).unwrap();
        assert!((t.total() - rician_phase_pdf(5.0, 0.8)).abs() < 1e-8);
    }

    #[test]
    fn cap_and_error_context() {
        assert!(phase_pdf_closed(&params(25.0, 0.5), 0.0, &SeriesControl::default()).is_err());
        assert!(phase_pdf_closed_with_cap(&params(25.0, 0.0), 0.0, &SeriesControl::default(), 30.0).is_ok());
        let tight = SeriesControl { rel_tol: 1e-14, max_terms: 3 };
        match phase_pdf_closed(&params(5.0, 1.0), 0.3, &tight).unwrap_err() {
            Error::NonConvergence { what, .. } => assert!(what.starts_with("closed form")),
            e => panic!("unexpected {e:?}"),
        }
    }
}
