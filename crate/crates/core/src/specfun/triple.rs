//! The triple confluent series appearing in the closed-form phase density.

use super::gamma::{ln_factorial, ln_gamma_pos};
use super::kummer::{kummer_m, MAX_KUMMER_ARG};
use super::{NeumaierSum, SeriesControl};
use crate::{Error, Result};

/// Largest tolerated ratio between the biggest summand and the result before
/// the alternating outer sum is declared numerically meaningless.
const MAX_CANCELLATION: f64 = 1e10;

/// `F(x, y, z) = Σ_{k,n,l} (1)_{k+n} / ((3/2)_{k+n} (1)_{k+l}) · x^k y^n z^l / (k! n! l!)`.
///
/// For fixed `k` the inner sums factor into a Kummer function and a Bessel-type
/// `₀F₁`, so the evaluation runs a single outer sum in `k`:
///
/// ```text
/// F = Σ_k x^k / k! · [k! / (3/2)_k · M(1+k, 3/2+k, y)] · [₀F₁(; k+1; z) / k!]
/// ```
///
/// Both brackets are positive for `y, z >= 0`; only `x^k` may alternate.
pub fn triple_f3_instance(x: f64, y: f64, z: f64, ctl: &SeriesControl) -> Result<f64> {
    ctl.validate()?;
    if !x.is_finite() || !(y >= 0.0) || !(z >= 0.0) || y > MAX_KUMMER_ARG || !z.is_finite() {
        return Err(Error::domain(format!(
            "triple_f3_instance needs finite x, 0 <= y <= {MAX_KUMMER_ARG}, z >= 0 (x={x}, y={y}, z={z})"
        )));
    }
    let ln_x = x.abs().ln();
    let ln_gamma_3_2 = ln_gamma_pos(1.5);

    let mut sum = NeumaierSum::default();
    let mut biggest = 0.0f64;
    let mut quiet = 0;
    for k in 0..ctl.max_terms {
        if k > 0 && x == 0.0 {
            return Ok(sum.value());
        }
        let kf = k as f64;
        // ln k! − ln (3/2)_k
        let ln_a_pref = ln_factorial(k) - (ln_gamma_pos(1.5 + kf) - ln_gamma_3_2);
        let m = kummer_m(1.0 + kf, 1.5 + kf, y, ctl)?;
        let ln_b = hyp0f1(kf + 1.0, z, ctl)?.ln() - ln_factorial(k);
        let mut ln_t = ln_a_pref + m.ln() + ln_b - ln_factorial(k);
        if k > 0 {
            ln_t += kf * ln_x;
        }
        let sign = if k % 2 == 1 && x < 0.0 { -1.0 } else { 1.0 };
        let t = sign * ln_t.exp();
        if !t.is_finite() {
            return Err(Error::no_convergence("triple_f3_instance (overflow)", sum.value()));
        }
        sum.add(t);
        biggest = biggest.max(t.abs());
        let total = sum.value();
        // Terms decrease monotonically once k exceeds |x|.
        if kf > x.abs() && t.abs() <= ctl.rel_tol * total.abs() {
            quiet += 1;
            if quiet >= 2 {
                if biggest > MAX_CANCELLATION * total.abs() {
                    return Err(Error::no_convergence("triple_f3_instance (cancellation)", total));
                }
                return Ok(total);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::no_convergence("triple_f3_instance", sum.value()))
}

/// `₀F₁(; b; z) = Σ_l z^l / ((b)_l l!)` for `z >= 0`, `b > 0`.
fn hyp0f1(b: f64, z: f64, ctl: &SeriesControl) -> Result<f64> {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for l in 0..ctl.max_terms {
        let lf = l as f64;
        let ratio = z / ((b + lf) * (lf + 1.0));
        term *= ratio;
        sum += term;
        if term <= ctl.rel_tol * sum && ratio < 1.0 {
            return Ok(sum);
        }
    }
    Err(Error::no_convergence("0F1 series", sum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::pochhammer;
    use approx::assert_relative_eq;

    fn ctl() -> SeriesControl {
        SeriesControl::default()
    }

    fn brute(x: f64, y: f64, z: f64, n: usize) -> f64 {
        let mut s = 0.0;
        for k in 0..n {
            for m in 0..n {
                for l in 0..n {
                    let num = pochhammer(1.0, k + m) * x.powi(k as i32) * y.powi(m as i32) * z.powi(l as i32);
                    let den = pochhammer(1.5, k + m)
                        * pochhammer(1.0, k + l)
                        * (ln_factorial(k) + ln_factorial(m) + ln_factorial(l)).exp();
                    s += num / den;
                }
            }
        }
        s
    }

    #[test]
    fn against_brute_force_triple_sum() {
        for &(x, y, z) in &[
            (0.0, 0.0, 0.0),
            (0.3, 0.2, 0.5),
            (-0.8, 1.1, 0.9),
            (-2.0, 1.5, 3.0),
            (-4.0, 2.0, 4.0),
            (1.5, 0.4, 2.5),
        ] {
            let v = triple_f3_instance(x, y, z, &ctl()).unwrap();
            assert_relative_eq!(v, brute(x, y, z, 45), max_relative = 1e-12);
        }
    }

    #[test]
    fn reduces_to_kummer_and_bessel() {
        // x = 0: M(1, 3/2, y) · ₀F₁(; 1; z) = M(1, 3/2, y) · I₀(2√z)
        let (y, z) = (2.5f64, 6.0f64);
        let i0 = crate::specfun::bessel_i0_scaled(2.0 * z.sqrt()).unwrap() * (2.0 * z.sqrt()).exp();
        let m = kummer_m(1.0, 1.5, y, &ctl()).unwrap();
        assert_relative_eq!(triple_f3_instance(0.0, y, z, &ctl()).unwrap(), m * i0, max_relative = 1e-13);
    }

    #[test]
    fn domain_and_budget() {
        assert!(triple_f3_instance(0.1, -1.0, 1.0, &ctl()).is_err());
        assert!(triple_f3_instance(0.1, 1.0, -1.0, &ctl()).is_err());
        let tight = SeriesControl { rel_tol: 1e-14, max_terms: 2 };
        assert!(triple_f3_instance(-5.0, 1.0, 1.0, &tight).unwrap_err().is_numeric());
    }
}
