use super::SeriesControl;
use crate::{Error, Result};

/// Largest argument accepted by the ascending series (keeps `e^z` finite).
pub(crate) const MAX_KUMMER_ARG: f64 = 700.0;

/// Kummer confluent hypergeometric function `M(a, b, z) = ₁F₁(a; b; z)`.
///
/// Direct ascending series for `z >= 0`; negative arguments go through
/// Kummer's transformation `M(a, b, z) = e^z M(b − a, b, −z)`.
pub fn kummer_m(a: f64, b: f64, z: f64, ctl: &SeriesControl) -> Result<f64> {
    ctl.validate()?;
    if b <= 0.0 && b == b.floor() {
        return Err(Error::domain(format!("kummer_m: b={b} is a nonpositive integer")));
    }
    if !z.is_finite() || z.abs() > MAX_KUMMER_ARG {
        return Err(Error::domain(format!(
            "kummer_m: |z|={} outside the series range (<= {MAX_KUMMER_ARG})",
            z.abs()
        )));
    }
    if z < 0.0 {
        return Ok(z.exp() * ascending(b - a, b, -z, ctl)?);
    }
    ascending(a, b, z, ctl)
}

fn ascending(a: f64, b: f64, z: f64, ctl: &SeriesControl) -> Result<f64> {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for n in 0..ctl.max_terms {
        let nf = n as f64;
        let ratio = (a + nf) * z / ((b + nf) * (nf + 1.0));
        term *= ratio;
        sum += term;
        if term == 0.0 || (term.abs() <= ctl.rel_tol * sum.abs() && ratio.abs() < 1.0) {
            return Ok(sum);
        }
    }
    Err(Error::no_convergence("kummer_m ascending series", sum))
}

/// `e^{-y} M(1, j + 3/2, y)` for `j = 0..=jmax`.
///
/// The top entry comes from the ascending series; the rest follow from the
/// contiguous relation `M(1, c, y) = 1 + (y/c) M(1, c + 1, y)`, which only adds
/// positive quantities on the way down.
pub(crate) fn kummer_m1_scaled_table(y: f64, jmax: usize, ctl: &SeriesControl) -> Result<Vec<f64>> {
    if !(y >= 0.0) || y > MAX_KUMMER_ARG {
        return Err(Error::domain(format!("Kummer argument {y} outside [0, {MAX_KUMMER_ARG}]")));
    }
    let scale = (-y).exp();
    let c_top = jmax as f64 + 1.5;
    let mut term = scale;
    let mut sum = scale;
    let mut converged = false;
    for n in 0..ctl.max_terms {
        let nf = n as f64;
        let ratio = y / (c_top + nf);
        term *= ratio;
        sum += term;
        if term <= ctl.rel_tol * sum && ratio < 1.0 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::no_convergence("scaled Kummer series", sum));
    }
    let mut out = vec![0.0; jmax + 1];
    out[jmax] = sum;
    for j in (0..jmax).rev() {
        let c = j as f64 + 1.5;
        out[j] = scale + (y / c) * out[j + 1];
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn ctl() -> SeriesControl {
        SeriesControl::default()
    }

    #[test]
    fn elementary_reductions() {
        for &z in &[0.0, 0.3, 2.0, 11.0, 45.0] {
            // M(a, a, z) = e^z
            assert_relative_eq!(kummer_m(2.3, 2.3, z, &ctl()).unwrap(), f64::exp(z), max_relative = 1e-14);
            // M(1, 2, z) = (e^z − 1)/z
            if z > 0.0 {
                assert_relative_eq!(kummer_m(1.0, 2.0, z, &ctl()).unwrap(), z.exp_m1() / z, max_relative = 1e-14);
            }
        }
        // M(1, 3/2, z) = √π e^z erf(√z) / (2√z)
        for &z in &[0.5f64, 4.0, 20.0] {
            let expect = PI.sqrt() * z.exp() * libm::erf(z.sqrt()) / (2.0 * z.sqrt());
            assert_relative_eq!(kummer_m(1.0, 1.5, z, &ctl()).unwrap(), expect, max_relative = 1e-13);
        }
    }

    #[test]
    fn negative_argument_and_polynomial() {
        // M(-2, 1, z) = 1 − 2z + z²/2 (Laguerre)
        let z: f64 = 1.7;
        assert_relative_eq!(kummer_m(-2.0, 1.0, z, &ctl()).unwrap(), 1.0 - 2.0 * z + z * z / 2.0, max_relative = 1e-14);
        assert_relative_eq!(kummer_m(1.0, 1.0, -3.0, &ctl()).unwrap(), (-3.0f64).exp(), max_relative = 1e-14);
    }

    #[test]
    fn domain_checks() {
        assert!(kummer_m(1.0, -2.0, 1.0, &ctl()).is_err());
        assert!(kummer_m(1.0, 2.0, 800.0, &ctl()).is_err());
        let tight = SeriesControl { rel_tol: 1e-14, max_terms: 3 };
        assert!(kummer_m(1.0, 1.5, 30.0, &tight).unwrap_err().is_numeric());
    }

    #[test]
    fn scaled_table_matches_direct_series() {
        for &y in &[0.0, 0.2, 5.0, 30.0, 60.0] {
            let t = kummer_m1_scaled_table(y, 40, &ctl()).unwrap();
            for j in [0usize, 1, 7, 25, 40] {
                let direct = kummer_m(1.0, j as f64 + 1.5, y, &ctl()).unwrap() * (-y).exp();
                assert_relative_eq!(t[j], direct, max_relative = 1e-13);
            }
        }
    }
}
