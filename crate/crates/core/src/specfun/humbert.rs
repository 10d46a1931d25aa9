//! Humbert confluent hypergeometric series.

use super::gamma::{ln_factorial, LnFactorialTable, LnPochhammerTable};
use super::kummer::{kummer_m1_scaled_table, MAX_KUMMER_ARG};
use super::{NeumaierSum, SeriesControl};
use crate::{Error, Result};

/// `Φ₁(1, −m, 3/2; x, y)` for a nonnegative integer `m`, `x ∈ [0, 1]`, `y >= 0`.
///
/// The defining double series
///
/// ```text
/// Σ_{k=0}^{m} (1)_k (−m)_k / ((3/2)_k k!) x^k M(1+k, 3/2+k, y)
/// ```
///
/// alternates in `k` and loses roughly `m·log10(2y)` digits for `x` near 1.
/// The evaluation instead expands `(1 − xu)^m = ((1−x) + x(1−u))^m` inside the
/// Euler integral, which gives the all-positive form
///
/// ```text
/// Φ₁ = ½ Σ_{j=0}^{m} C(m, j) (1−x)^{m−j} x^j M(1, j + 3/2, y) / (j + ½)
/// ```
pub fn humbert_phi1_terminating(m: usize, x: f64, y: f64, ctl: &SeriesControl) -> Result<f64> {
    ctl.validate()?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("humbert_phi1_terminating needs x in [0,1], got {x}")));
    }
    if !(y >= 0.0) || y > MAX_KUMMER_ARG {
        return Err(Error::domain(format!(
            "humbert_phi1_terminating needs 0 <= y <= {MAX_KUMMER_ARG}, got {y}"
        )));
    }
    let table = kummer_m1_scaled_table(y, m, ctl)?;
    Ok(phi1_terminating_scaled(m, x, 1.0 - x, &table) * y.exp())
}

/// `e^{-y} Φ₁(1, −m, 3/2; x, y)` given `e^{-y} M(1, j+3/2, y)` for `j <= m`.
///
/// `one_minus_x` is passed separately so callers holding `sin²` and `cos²`
/// keep full precision near the ends of the interval.
pub(crate) fn phi1_terminating_scaled(m: usize, x: f64, one_minus_x: f64, kummer_scaled: &[f64]) -> f64 {
    debug_assert!(kummer_scaled.len() > m);
    let ln_x = x.ln();
    let ln_1mx = one_minus_x.ln();
    let ln_m = ln_factorial(m);
    let mut acc = NeumaierSum::default();
    for (j, &mj) in kummer_scaled.iter().enumerate().take(m + 1) {
        let k = m - j;
        // binomial pmf with 0^0 = 1
        let mut ln_w = ln_m - ln_factorial(j) - ln_factorial(k);
        if j > 0 {
            ln_w += j as f64 * ln_x;
        }
        if k > 0 {
            ln_w += k as f64 * ln_1mx;
        }
        if ln_w == f64::NEG_INFINITY {
            continue;
        }
        acc.add(ln_w.exp() * mj / (j as f64 + 0.5));
    }
    0.5 * acc.value()
}

/// Humbert function `Φ₃(b, c; w, z) = Σ_{m,n} (b)_m w^m z^n / ((c)_{m+n} m! n!)`.
///
/// Summed over anti-diagonal shells `m + n = N`; stops after two consecutive
/// shells whose absolute contribution is below `rel_tol` of the running sum
/// and no larger than the shell before.
pub fn humbert_phi3(b: f64, c: f64, w: f64, z: f64, ctl: &SeriesControl) -> Result<f64> {
    ctl.validate()?;
    if c <= 0.0 && c == c.floor() {
        return Err(Error::domain(format!("humbert_phi3: c={c} is a nonpositive integer")));
    }
    if !(z >= 0.0) || !z.is_finite() || !w.is_finite() || !b.is_finite() {
        return Err(Error::domain(format!("humbert_phi3 needs finite w and z >= 0 (w={w}, z={z})")));
    }
    let ln_w = w.abs().ln();
    let sign_w = w.signum();
    let ln_z = z.ln();
    let mut poch_b = LnPochhammerTable::new(b);
    let mut poch_c = LnPochhammerTable::new(c);
    let mut fact = LnFactorialTable::new();

    let mut sum = NeumaierSum::default();
    let mut quiet_shells = 0;
    let mut prev_shell_abs = f64::INFINITY;
    for shell in 0..ctl.max_terms {
        poch_b.ensure(shell);
        poch_c.ensure(shell);
        fact.ensure(shell);
        let mut shell_sum = NeumaierSum::default();
        let mut shell_abs = 0.0;
        for m in 0..=shell {
            let n = shell - m;
            if (m > 0 && w == 0.0) || (n > 0 && z == 0.0) {
                continue;
            }
            let sign = poch_b.sign(m) * poch_c.sign(shell) * if m % 2 == 1 { sign_w } else { 1.0 };
            if sign == 0.0 {
                continue;
            }
            let mut ln_t = poch_b.ln_abs(m) - poch_c.ln_abs(shell) - fact.get(m) - fact.get(n);
            if m > 0 {
                ln_t += m as f64 * ln_w;
            }
            if n > 0 {
                ln_t += n as f64 * ln_z;
            }
            let t = sign * ln_t.exp();
            shell_sum.add(t);
            shell_abs += t.abs();
        }
        sum.add(shell_sum.value());
        let total = sum.value();
        if !total.is_finite() {
            return Err(Error::no_convergence("humbert_phi3 (overflow)", total));
        }
        if shell > 0 && shell_abs <= ctl.rel_tol * total.abs() && shell_abs <= prev_shell_abs {
            quiet_shells += 1;
            if quiet_shells >= 2 {
                return Ok(total);
            }
        } else {
            quiet_shells = 0;
        }
        prev_shell_abs = shell_abs;
    }
    Err(Error::no_convergence("humbert_phi3", sum.value()))
}

/// Upper envelope `exp(2√|z| + 2|w| + |b w|/|c|)` on `|Φ₃(b, c; w, z)|`.
pub fn phi3_envelope(b: f64, c: f64, w: f64, z: f64) -> f64 {
    (2.0 * z.abs().sqrt() + 2.0 * w.abs() + (b * w).abs() / c.abs()).exp()
}
