//! Kummer's confluent hypergeometric function `₁F₁(a; b; z)`.
//!
//! The ascending series is summed in double-double arithmetic. For `Re z < 0`
//! the Kummer transformation `₁F₁(a;b;z) = e^z ₁F₁(b−a;b;−z)` is applied first
//! so the summed series has no sign alternation in its dominant terms.

use num_complex::Complex64;

use super::dd::{CDd, Dd};
use super::PrecisionPolicy;
use crate::error::{Error, Result};

/// Largest `|z|` accepted.
const MAX_ABS_Z: f64 = 600.0;

fn check(b: Complex64, z: Complex64) -> Result<()> {
    if b.im == 0.0 && b.re <= 0.0 && b.re == b.re.round() {
        return Err(Error::Domain(format!(
            "1F1 lower parameter b = {} is a non-positive integer",
            b.re
        )));
    }
    if !(z.re.is_finite() && z.im.is_finite()) || z.norm() > MAX_ABS_Z {
        return Err(Error::Precision(format!("1F1 argument {z} out of range")));
    }
    Ok(())
}

fn cdd_add_real(z: Complex64, n: f64) -> CDd {
    CDd {
        re: Dd::from_f64(z.re) + Dd::from_f64(n),
        im: Dd::from_f64(z.im),
    }
}

/// Ascending series `Σ (a)_n/(b)_n z^n/n!` in double-double; stops after three
/// consecutive terms below `tol·|sum|` once the term ratio has dropped below 1/2.
fn series(a: Complex64, b: Complex64, z: Complex64, policy: &PrecisionPolicy) -> Result<Complex64> {
    let zd = CDd::from_c64(z);
    let mut term = CDd::from_c64(Complex64::new(1.0, 0.0));
    let mut sum = term;
    let mut small_run = 0;
    for n in 0..policy.max_terms {
        let nf = n as f64;
        let num = cdd_add_real(a, nf) * zd;
        let den = cdd_add_real(b, nf) * CDd::from_c64(Complex64::new(nf + 1.0, 0.0));
        let ratio = num / den;
        term = term * ratio;
        sum = sum + term;
        let shrinking = ratio.norm() < 0.5;
        if term.norm() <= policy.target_abs_tol * sum.norm() && shrinking {
            small_run += 1;
            if small_run >= 3 {
                return Ok(sum.to_c64());
            }
        } else {
            small_run = 0;
        }
        if term.norm() == 0.0 && shrinking {
            return Ok(sum.to_c64());
        }
    }
    Err(Error::Precision(format!(
        "1F1({a}; {b}; {z}) did not converge within {} terms",
        policy.max_terms
    )))
}

/// `₁F₁(a; b; z)` with the default precision policy.
pub fn kummer_1f1(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    kummer_1f1_with(a, b, z, &PrecisionPolicy::default())
}

/// `₁F₁(a; b; z)`, transforming to `−z` when `Re z < 0`.
pub fn kummer_1f1_with(a: Complex64, b: Complex64, z: Complex64, policy: &PrecisionPolicy) -> Result<Complex64> {
    if z.re < 0.0 {
        kummer_1f1_transformed(a, b, z, policy)
    } else {
        kummer_1f1_direct(a, b, z, policy)
    }
}

/// The ascending series evaluated at `z` itself.
pub fn kummer_1f1_direct(a: Complex64, b: Complex64, z: Complex64, policy: &PrecisionPolicy) -> Result<Complex64> {
    check(b, z)?;
    if z == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    series(a, b, z, policy)
}

/// `e^z · ₁F₁(b − a; b; −z)`.
pub fn kummer_1f1_transformed(a: Complex64, b: Complex64, z: Complex64, policy: &PrecisionPolicy) -> Result<Complex64> {
    check(b, z)?;
    if z == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok(z.exp() * series(b - a, b, -z, policy)?)
}
