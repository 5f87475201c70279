//! Complex Γ by upward recurrence into the Stirling region and reflection for
//! `Re s < 1/2`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::bernoulli::even_values;
use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
/// Stirling is applied once `Re z` reaches this value.
const STIRLING_SHIFT: f64 = 12.0;
const STIRLING_TERMS: usize = 12;
/// Largest `|Im s|` and `|Re s|` accepted before reporting a precision error.
const MAX_IMAG: f64 = 2_000.0;
const MAX_REAL: f64 = 170.0;

fn is_nonpositive_integer(s: Complex64) -> bool {
    s.im == 0.0 && s.re <= 0.0 && s.re == s.re.round()
}

fn check_region(s: Complex64) -> Result<()> {
    if !(s.re.is_finite() && s.im.is_finite()) || s.im.abs() > MAX_IMAG || s.re.abs() > MAX_REAL {
        return Err(Error::Precision(format!(
            "gamma argument {s} outside the supported region"
        )));
    }
    Ok(())
}

/// Stirling series for `log Γ(z)`, `Re z ≥ STIRLING_SHIFT`.
fn ln_gamma_stirling(z: Complex64) -> Complex64 {
    let b = even_values();
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut pow = inv;
    let mut series = Complex64::new(0.0, 0.0);
    for j in 1..=STIRLING_TERMS {
        let coeff = b[j - 1] / ((2 * j) as f64 * (2 * j - 1) as f64);
        series += pow * coeff;
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + LN_SQRT_2PI + series
}

/// `log Γ(s)` for `Re s ≥ 1/2`, principal branch (continuous, real on the
/// positive axis).
fn ln_gamma_right(s: Complex64) -> Complex64 {
    let mut z = s;
    let mut shift_log = Complex64::new(0.0, 0.0);
    while z.re < STIRLING_SHIFT {
        shift_log += z.ln();
        z += 1.0;
    }
    ln_gamma_stirling(z) - shift_log
}

/// `sin(π s)` with argument reduction on the real part.
fn sin_pi(s: Complex64) -> Complex64 {
    let r = s.re - 2.0 * (s.re / 2.0).floor();
    let (sr, cr) = if r == 0.0 {
        (0.0, 1.0)
    } else if r == 0.5 {
        (1.0, 0.0)
    } else if r == 1.0 {
        (0.0, -1.0)
    } else if r == 1.5 {
        (-1.0, 0.0)
    } else {
        (PI * r).sin_cos()
    };
    let y = PI * s.im;
    Complex64::new(sr * y.cosh(), cr * y.sinh())
}

/// `Γ(s)` for complex `s`.
pub fn gamma_complex(s: Complex64) -> Result<Complex64> {
    check_region(s)?;
    if is_nonpositive_integer(s) {
        return Err(Error::pole(s));
    }
    if s.re < 0.5 {
        let denom = sin_pi(s) * ln_gamma_right(1.0 - s).exp();
        return Ok(PI / denom);
    }
    Ok(ln_gamma_right(s).exp())
}

/// `1/Γ(s)`, entire; zero at the non-positive integers.
pub fn rgamma(s: Complex64) -> Result<Complex64> {
    check_region(s)?;
    if is_nonpositive_integer(s) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if s.re < 0.5 {
        return Ok(sin_pi(s) * ln_gamma_right(1.0 - s).exp() / PI);
    }
    Ok((-ln_gamma_right(s)).exp())
}

/// A logarithm of `Γ(s)`: the principal branch for `Re s ≥ 1/2`, and
/// `log π − log sin(πs) − log Γ(1−s)` (some branch) otherwise. Its exponential
/// is always `Γ(s)`.
pub fn ln_gamma(s: Complex64) -> Result<Complex64> {
    check_region(s)?;
    if is_nonpositive_integer(s) {
        return Err(Error::pole(s));
    }
    if s.re < 0.5 {
        return Ok(PI.ln() - sin_pi(s).ln() - ln_gamma_right(1.0 - s));
    }
    Ok(ln_gamma_right(s))
}

/// Real `Γ(x)`.
pub fn gamma_real(x: f64) -> Result<f64> {
    Ok(gamma_complex(Complex64::new(x, 0.0))?.re)
}
