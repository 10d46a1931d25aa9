//! Special functions behind the phase-density expressions.
//!
//! Most functions come in pairs: a fast stable route used by the evaluators
//! and an independent series or quadrature route used to cross-check it.

mod bessel;
mod gamma;
mod humbert;
mod kummer;
mod summation;
mod tricomi;
mod triple;

pub use bessel::bessel_i0_scaled;
pub(crate) use bessel::i0_scaled;
pub use gamma::{ln_gamma, ln_poisson_pmf, pochhammer, poisson_pmf, reg_gamma_p, reg_gamma_q};
pub use humbert::{humbert_phi1_terminating, humbert_phi3, phi3_envelope};
pub use kummer::kummer_m;
pub use tricomi::{tricomi_u, tricomi_u_quadrature};
pub use triple::triple_f3_instance;

pub(crate) use gamma::ln_factorial;
pub(crate) use humbert::phi1_terminating_scaled;
pub(crate) use kummer::kummer_m1_scaled_table;
pub(crate) use summation::NeumaierSum;

use crate::{Error, Result};

/// Truncation control shared by the series evaluators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesControl {
    /// Stop once new terms fall below `rel_tol` times the running sum.
    pub rel_tol: f64,
    /// Hard cap on the number of terms (or shells) summed per index.
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            rel_tol: 1e-14,
            max_terms: 10_000,
        }
    }
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        let c = Self { rel_tol, max_terms };
        c.validate()?;
        Ok(c)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !self.rel_tol.is_finite() {
            return Err(Error::domain("SeriesControl.rel_tol must be positive"));
        }
        if self.max_terms == 0 {
            return Err(Error::domain("SeriesControl.max_terms must be at least 1"));
        }
        Ok(())
    }
}
