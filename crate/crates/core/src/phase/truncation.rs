//! Truncation of the Poisson mixture over the Nakagami index `m`.

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::specfun::ln_poisson_pmf;
use crate::{Error, Result};

/// Default retained-power target in percent.
pub const DEFAULT_ALPHA_PCT: f64 = 99.9;

/// Inclusive index range `[m_min, m_max]` of the retained mixture terms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TruncationBounds {
    pub m_min: usize,
    pub m_max: usize,
    pub alpha_pct: f64,
}

impl TruncationBounds {
    /// Number of retained terms.
    pub fn len(&self) -> usize {
        self.m_max - self.m_min + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, m: usize) -> bool {
        (self.m_min..=self.m_max).contains(&m)
    }

    /// `Σ p_p(m)` over the retained range.
    pub fn retained_power(&self, nu: f64) -> f64 {
        (self.m_min..=self.m_max).map(|m| power_share_pdf(nu, m)).sum()
    }

    /// Poisson probability mass `Σ Po(m; ν)` over the retained range.
    pub fn retained_mass(&self, nu: f64) -> f64 {
        (self.m_min..=self.m_max).map(|m| poisson(m, nu)).sum()
    }
}

/// How the retained index range is chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TruncationRule {
    /// Normal-approximation interval `ν ± Z√ν` only.
    Wald,
    /// The Wald interval, widened one index at a time until both the retained
    /// power share and the retained Poisson mass reach the target.
    #[default]
    Covering,
}

fn poisson(m: usize, nu: f64) -> f64 {
    ln_poisson_pmf(m, nu).exp()
}

fn check_args(nu: f64, alpha_pct: f64) -> Result<()> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::domain(format!("nu must be finite and >= 0, got {nu}")));
    }
    if !(alpha_pct > 0.0 && alpha_pct < 100.0) {
        return Err(Error::domain(format!("alpha_pct must lie in (0, 100), got {alpha_pct}")));
    }
    Ok(())
}

/// Two-sided standard-normal quantile `Z` with `P(|N| <= Z) = alpha_pct/100`.
pub fn normal_quantile(alpha_pct: f64) -> Result<f64> {
    check_args(0.0, alpha_pct)?;
    let n = Normal::standard();
    Ok(n.inverse_cdf(0.5 + alpha_pct / 200.0))
}

/// `m_min = floor(max(0, ν − 1 − Z√ν))`, `m_max = ceil(ν + Z√ν)`.
pub fn wald_bounds(nu: f64, alpha_pct: f64) -> Result<TruncationBounds> {
    check_args(nu, alpha_pct)?;
    if nu == 0.0 {
        return Ok(TruncationBounds { m_min: 0, m_max: 0, alpha_pct });
    }
    let z = normal_quantile(alpha_pct)?;
    let half = z * nu.sqrt();
    let lo = (nu - 1.0 - half).max(0.0).floor();
    let hi = (nu + half).ceil();
    Ok(TruncationBounds {
        m_min: lo as usize,
        m_max: hi as usize,
        alpha_pct,
    })
}

/// Retained range for the production evaluator ([`TruncationRule::Covering`]).
///
/// The Wald interval alone falls short of its target for small and moderate
/// `ν` (at `ν = 4`, 99.9% it keeps about 99.75% of the power), so it is widened
/// toward whichever neighbour carries more power until the target holds for the
/// power share and for the plain Poisson mass.
pub fn truncation_bounds(nu: f64, alpha_pct: f64) -> Result<TruncationBounds> {
    truncation_bounds_with(nu, alpha_pct, TruncationRule::Covering)
}

pub fn truncation_bounds_with(nu: f64, alpha_pct: f64, rule: TruncationRule) -> Result<TruncationBounds> {
    let mut b = wald_bounds(nu, alpha_pct)?;
    if rule == TruncationRule::Wald || nu == 0.0 {
        return Ok(b);
    }
    let target = alpha_pct / 100.0;
    let mut power = b.retained_power(nu);
    let mut mass = b.retained_mass(nu);
    while power < target || mass < target {
        let below = if b.m_min > 0 { power_share_pdf(nu, b.m_min - 1) } else { -1.0 };
        let above = power_share_pdf(nu, b.m_max + 1);
        if below > above {
            b.m_min -= 1;
            power += below;
            mass += poisson(b.m_min, nu);
        } else {
            b.m_max += 1;
            power += above;
            mass += poisson(b.m_max, nu);
        }
    }
    Ok(b)
}

/// Share of the average power carried by mixture index `m`:
/// `ν/(1+ν)·Po(m−1; ν) + 1/(1+ν)·Po(m; ν)`.
pub fn power_share_pdf(nu: f64, m: usize) -> f64 {
    let shifted = if m == 0 { 0.0 } else { poisson(m - 1, nu) };
    (nu * shifted + poisson(m, nu)) / (1.0 + nu)
}
