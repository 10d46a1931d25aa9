//! TWDP channel parameterization.
//!
//! A channel is described physically by the two specular amplitudes `v1 >= v2`,
//! the diffuse half-power `sigma2` and the phase `phi1` of the stronger ray.
//! The normalized description uses
//!
//! ```text
//! K     = (v1² + v2²) / (2σ²)
//! Γ     = v2 / v1              (0 when v1 = 0)
//! Ω     = v1² + v2² + 2σ²
//! ```

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Wraps an angle into `(-π, π]`.
pub fn wrap_phase(x: f64) -> f64 {
    if x > -PI && x <= PI {
        return x;
    }
    let two_pi = 2.0 * PI;
    let mut y = x.rem_euclid(two_pi);
    if y > PI {
        y -= two_pi;
    }
    if y <= -PI {
        y += two_pi;
    }
    y
}

/// Normalized `(K, Γ, Ω)` coordinates plus the specular reference phase.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizedParams {
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "Gamma")]
    pub gamma: f64,
    #[serde(rename = "Omega")]
    pub omega: f64,
    #[serde(rename = "Phi1", default)]
    pub phi1: f64,
}

/// TWDP parameter set in physical units.
///
/// Construction enforces `0 <= v2 <= v1`, `sigma2 > 0` and wraps `phi1` into
/// `(-π, π]`. A channel without diffuse power can only be built through
/// [`ChannelParams::without_diffuse`]; such a value is accepted by the
/// simulators but rejected by the analytic phase densities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChannelParams {
    v1: f64,
    v2: f64,
    sigma2: f64,
    phi1: f64,
}

impl ChannelParams {
    pub fn new(v1: f64, v2: f64, sigma2: f64, phi1: f64) -> Result<Self> {
        check_finite(&[("v1", v1), ("v2", v2), ("sigma2", sigma2), ("phi1", phi1)])?;
        if v2 < 0.0 || v1 < 0.0 {
            return Err(Error::domain("specular amplitudes must be nonnegative"));
        }
        if v2 > v1 {
            return Err(Error::domain(format!(
                "weaker specular amplitude v2={v2} exceeds v1={v1}"
            )));
        }
        if sigma2 <= 0.0 {
            return Err(Error::domain(format!(
                "diffuse half-power sigma2={sigma2} must be positive"
            )));
        }
        Ok(Self {
            v1,
            v2,
            sigma2,
            phi1: wrap_phase(phi1),
        })
    }

    /// Two-ray channel with no diffuse component (simulation only).
    pub fn without_diffuse(v1: f64, v2: f64, phi1: f64) -> Result<Self> {
        check_finite(&[("v1", v1), ("v2", v2), ("phi1", phi1)])?;
        if v2 < 0.0 || v2 > v1 {
            return Err(Error::domain(format!(
                "need 0 <= v2 <= v1, got v1={v1}, v2={v2}"
            )));
        }
        Ok(Self {
            v1,
            v2,
            sigma2: 0.0,
            phi1: wrap_phase(phi1),
        })
    }

    pub fn from_normalized(k: f64, gamma: f64, omega: f64, phi1: f64) -> Result<Self> {
        check_finite(&[("K", k), ("Gamma", gamma), ("Omega", omega), ("Phi1", phi1)])?;
        if k < 0.0 {
            return Err(Error::domain(format!("K={k} must be nonnegative")));
        }
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::domain(format!("Gamma={gamma} must lie in [0, 1]")));
        }
        if omega <= 0.0 {
            return Err(Error::domain(format!("Omega={omega} must be positive")));
        }
        let two_sigma2 = omega / (1.0 + k);
        let v1_sq = two_sigma2 * k / (1.0 + gamma * gamma);
        let v1 = v1_sq.sqrt();
        let v2 = gamma * v1;
        Self::new(v1, v2, 0.5 * two_sigma2, phi1)
    }

    pub fn to_normalized(&self) -> NormalizedParams {
        NormalizedParams {
            k: self.k(),
            gamma: self.gamma(),
            omega: self.omega(),
            phi1: self.phi1,
        }
    }

    pub fn v1(&self) -> f64 {
        self.v1
    }

    pub fn v2(&self) -> f64 {
        self.v2
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn phi1(&self) -> f64 {
        self.phi1
    }

    /// Same channel with another reference phase.
    pub fn with_phi1(mut self, phi1: f64) -> Self {
        self.phi1 = wrap_phase(phi1);
        self
    }

    pub fn has_diffuse(&self) -> bool {
        self.sigma2 > 0.0
    }

    pub fn k(&self) -> f64 {
        if self.sigma2 == 0.0 {
            return f64::INFINITY;
        }
        (self.v1 * self.v1 + self.v2 * self.v2) / (2.0 * self.sigma2)
    }

    pub fn gamma(&self) -> f64 {
        if self.v1 == 0.0 {
            0.0
        } else {
            self.v2 / self.v1
        }
    }

    pub fn omega(&self) -> f64 {
        self.v1 * self.v1 + self.v2 * self.v2 + 2.0 * self.sigma2
    }

    /// `ν = v2² / (2σ²)`, the Poisson mean of the envelope mixture.
    pub fn nu(&self) -> f64 {
        self.v2 * self.v2 / (2.0 * self.sigma2)
    }

    /// `v1² / (2σ²)`, the power ratio of the reference ray to the diffuse part.
    pub fn specular_ratio(&self) -> f64 {
        self.v1 * self.v1 / (2.0 * self.sigma2)
    }

    pub(crate) fn require_diffuse(&self) -> Result<()> {
        if self.has_diffuse() {
            Ok(())
        } else {
            Err(Error::domain(
                "phase density requires a diffuse component (sigma2 > 0)",
            ))
        }
    }
}

fn check_finite(vals: &[(&str, f64)]) -> Result<()> {
    for (name, v) in vals {
        if !v.is_finite() {
            return Err(Error::domain(format!("{name} must be finite, got {v}")));
        }
    }
    Ok(())
}

#[derive(Deserialize)]
struct PhysicalRepr {
    v1: f64,
    v2: f64,
    sigma2: f64,
    #[serde(default)]
    phi1: f64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ParamsRepr {
    Physical(PhysicalRepr),
    Normalized(NormalizedParams),
}

impl<'de> Deserialize<'de> for ChannelParams {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = ParamsRepr::deserialize(d).map_err(|_| {
            serde::de::Error::custom(
                "expected {\"v1\",\"v2\",\"sigma2\",\"phi1\"} or {\"K\",\"Gamma\",\"Omega\",\"Phi1\"}",
            )
        })?;
        let r = match repr {
            ParamsRepr::Physical(p) => ChannelParams::new(p.v1, p.v2, p.sigma2, p.phi1),
            ParamsRepr::Normalized(n) => ChannelParams::from_normalized(n.k, n.gamma, n.omega, n.phi1),
        };
        r.map_err(serde::de::Error::custom)
    }
}
