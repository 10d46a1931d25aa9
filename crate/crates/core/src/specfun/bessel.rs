use crate::{Error, Result};

/// Exponentially scaled modified Bessel function `e^{-x} I₀(x)` for `x >= 0`.
///
/// Ascending series below 30, Hankel asymptotic expansion above.
pub fn bessel_i0_scaled(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain(format!("bessel_i0_scaled needs x >= 0, got {x}")));
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    Ok(i0_scaled(x))
}

pub(crate) fn i0_scaled(x: f64) -> f64 {
    if x < 30.0 {
        let q = 0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        loop {
            term *= q / (k * k);
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
            k += 1.0;
        }
        sum * (-x).exp()
    } else {
        // a_k = ((2k-1)!!)² / (k! 8^k)
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 0.0;
        loop {
            let next = term * (2.0 * k + 1.0) * (2.0 * k + 1.0) / (8.0 * (k + 1.0) * x);
            if next >= term || next < 1e-17 * sum {
                break;
            }
            sum += next;
            term = next;
            k += 1.0;
        }
        sum / (2.0 * std::f64::consts::PI * x).sqrt()
    }
}
