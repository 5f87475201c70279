//! Dirichlet L-functions: values, derivatives, tails, the completed function
//! and the functional equation.
//!
//! `L(s, χ) = q^{−s} Σ_{r=1}^{q} χ(r) ζ(s, r/q)` is used for `0 ≤ Re s < 12`.
//! Further right the series is summed directly up to `n < q` and the rest is
//! folded into Hurwitz values with `α ≥ 1`; left of the imaginary axis
//! primitive characters go through the functional equation.

mod zeros;

pub use zeros::{find_zeros, zero_count_argument_principle, Provenance, ZeroCount, ZeroList};
pub(crate) use zeros::{refine_zero, validate_zero, SIMPLICITY_THRESHOLD, ZERO_TOLERANCE};

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{euler_phi, DirichletCharacter};
use crate::error::{Error, Result};
use crate::special::hurwitz::{full_value, regular_part};
use crate::special::{gamma_complex, ln_gamma, rgamma};

/// Largest modulus accepted by the L-function routines.
pub const MAX_L_MODULUS: u64 = 10_000;
/// From this real part on, the Hurwitz decomposition with `α = r/q ≤ 1` is
/// replaced by direct summation plus a shifted Hurwitz tail.
const DIRECT_RE: f64 = 12.0;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn check_modulus(chi: &DirichletCharacter) -> Result<()> {
    if chi.modulus() > MAX_L_MODULUS {
        return Err(Error::InvalidArgument(format!(
            "modulus {} exceeds {MAX_L_MODULUS}",
            chi.modulus()
        )));
    }
    Ok(())
}

fn check_pole(chi: &DirichletCharacter, s: Complex64) -> Result<()> {
    if chi.is_principal() && s == one() {
        return Err(Error::pole(s));
    }
    Ok(())
}

fn i_pow(a: u8) -> Complex64 {
    if a == 1 {
        Complex64::new(0.0, 1.0)
    } else {
        one()
    }
}

/// `q^{−s} Σ χ(r) ζ(s, r/q)` and its derivative, with the pole of principal
/// characters added back analytically.
fn hurwitz_route(chi: &DirichletCharacter, s: Complex64, want_ds: bool) -> Result<(Complex64, Complex64)> {
    let q = chi.modulus();
    let qf = q as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut dsum = Complex64::new(0.0, 0.0);
    for r in 1..=q {
        let c = chi.value_u(r);
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let reg = regular_part(s, r as f64 / qf, want_ds)?;
        sum += c * reg.value;
        dsum += c * reg.ds;
    }
    if chi.is_principal() {
        let u = s - 1.0;
        let w = euler_phi(q) as f64;
        sum += w / u;
        dsum -= w / (u * u);
    }
    let qs = (-s * qf.ln()).exp();
    let value = qs * sum;
    let ds = -qf.ln() * value + qs * dsum;
    Ok((value, ds))
}

/// `Σ_{n ≥ m} χ(n) n^{−s}` and its `s`-derivative (`m ≥ 1`).
fn tail_with_derivative(
    chi: &DirichletCharacter,
    s: Complex64,
    m: u64,
    want_ds: bool,
) -> Result<(Complex64, Complex64)> {
    check_modulus(chi)?;
    if m == 0 {
        return Err(Error::InvalidArgument("tail must start at n ≥ 1".into()));
    }
    let q = chi.modulus();
    let qf = q as f64;
    let start = m.max(q);
    let mut value = Complex64::new(0.0, 0.0);
    let mut ds = Complex64::new(0.0, 0.0);
    for n in m..start {
        let c = chi.value_u(n);
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let lg = (n as f64).ln();
        let t = c * (-s * lg).exp();
        value += t;
        ds -= t * lg;
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut dsum = Complex64::new(0.0, 0.0);
    let at_pole = s == one();
    if at_pole && chi.is_principal() {
        return Err(Error::pole(s));
    }
    for r in start..start + q {
        let c = chi.value_u(r);
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let alpha = r as f64 / qf;
        // At s = 1 the pole terms of a non-principal character cancel.
        let h = if at_pole {
            regular_part(s, alpha, want_ds)?
        } else {
            full_value(s, alpha, want_ds)?
        };
        sum += c * h.value;
        dsum += c * h.ds;
    }
    let qs = (-s * qf.ln()).exp();
    let shifted = qs * sum;
    value += shifted;
    ds += -qf.ln() * shifted + qs * dsum;
    Ok((value, ds))
}

/// `Σ_{n ≥ m} χ(n) n^{−s}` (analytically continued).
pub fn l_tail(chi: &DirichletCharacter, s: Complex64, m: u64) -> Result<Complex64> {
    Ok(tail_with_derivative(chi, s, m, false)?.0)
}

/// `L(s, χ)`.
pub fn l_value(chi: &DirichletCharacter, s: Complex64) -> Result<Complex64> {
    check_modulus(chi)?;
    check_pole(chi, s)?;
    if s.re < 0.0 && chi.is_primitive() {
        return functional_equation_value(chi, s);
    }
    if s.re >= DIRECT_RE {
        return l_tail(chi, s, 1);
    }
    Ok(hurwitz_route(chi, s, false)?.0)
}

/// `L(s, χ)` from `L(1 − s, χ̄)`; `χ` primitive.
fn functional_equation_value(chi: &DirichletCharacter, s: Complex64) -> Result<Complex64> {
    let a = chi.parity() as f64;
    let q = chi.modulus() as f64;
    let eps = chi.epsilon_factor()?;
    let dual = l_value(&chi.conjugate(), 1.0 - s)?;
    let factor = ((0.5 - s) * (q / PI).ln()).exp() * gamma_complex((1.0 - s + a) / 2.0)? * rgamma((s + a) / 2.0)?;
    Ok(eps * factor * dual)
}

/// `L′(s, χ) = −log q · L(s, χ) + q^{−s} Σ χ(r) ζ′(s, r/q)`.
pub fn l_derivative(chi: &DirichletCharacter, s: Complex64) -> Result<Complex64> {
    check_modulus(chi)?;
    check_pole(chi, s)?;
    if s.re >= DIRECT_RE {
        return Ok(tail_with_derivative(chi, s, 1, true)?.1);
    }
    Ok(hurwitz_route(chi, s, true)?.1)
}

/// `1/L(s, χ)`, taken as 0 at the pole of a principal character.
pub fn l_inverse(chi: &DirichletCharacter, s: Complex64) -> Result<Complex64> {
    if chi.is_principal() && s == one() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let v = l_value(chi, s)?;
    if v == Complex64::new(0.0, 0.0) {
        return Err(Error::pole(s));
    }
    Ok(v.inv())
}

/// `L′(−a, χ)` from `a! q^a G(χ) / (2^{a+1} π^a i^a) · L(1 + a, χ̄)`.
pub fn l_prime_trivial_zero(chi: &DirichletCharacter) -> Result<Complex64> {
    if !chi.is_primitive() || chi.modulus() == 1 {
        return Err(Error::Domain(format!(
            "closed form for L'(-a) needs a primitive character of conductor > 1; got modulus {} conductor {}",
            chi.modulus(),
            chi.conductor()
        )));
    }
    let a = chi.parity();
    let af = a as f64;
    let q = chi.modulus() as f64;
    let l = l_value(&chi.conjugate(), Complex64::new(1.0 + af, 0.0))?;
    let coeff = q.powi(a as i32) * chi.gauss_sum() / (2f64.powi(a as i32 + 1) * PI.powi(a as i32) * i_pow(a));
    Ok(coeff * l)
}

/// `Λ(s, χ) = (q/π)^{(s+a)/2} Γ((s+a)/2) L(s, χ)` at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompletedLambda {
    pub s: Complex64,
    pub value: Complex64,
    pub character: (u64, u64),
}

fn gamma_factor(chi: &DirichletCharacter, s: Complex64) -> Result<Complex64> {
    let a = chi.parity() as f64;
    let q = chi.modulus() as f64;
    let w = (s + a) / 2.0;
    Ok((w * (q / PI).ln()).exp() * gamma_complex(w)?)
}

/// `Λ(s, χ)`.
pub fn completed_lambda(chi: &DirichletCharacter, s: Complex64) -> Result<CompletedLambda> {
    let value = gamma_factor(chi, s)? * l_value(chi, s)?;
    Ok(CompletedLambda {
        s,
        value,
        character: chi.label(),
    })
}

/// Unit-modulus phase of `Λ(s, χ)` together with `L(s, χ)`; finite wherever
/// `L` is, even where `Γ` over- or underflows.
pub(crate) fn lambda_phase(chi: &DirichletCharacter, s: Complex64) -> Result<(Complex64, Complex64)> {
    let a = chi.parity() as f64;
    let q = chi.modulus() as f64;
    let w = (s + a) / 2.0;
    let lg = ln_gamma(w)?;
    let theta = w.im * (q / PI).ln() + lg.im;
    let l = l_value(chi, s)?;
    Ok((Complex64::from_polar(1.0, theta), l))
}

/// `|Λ(s,χ) − ε(χ) (q/π)^{(1−s+a)/2} Γ((1−s+a)/2) L(1−s, χ̄)| / |Λ(s,χ)|`
/// with `ε(χ) = G(χ)/(i^a √q)`.
pub fn functional_equation_residual(chi: &DirichletCharacter, s: Complex64) -> Result<f64> {
    let eps = chi.epsilon_factor()?;
    let lhs = completed_lambda(chi, s)?.value;
    let rhs = eps * gamma_factor(chi, 1.0 - s)? * l_value(&chi.conjugate(), 1.0 - s)?;
    Ok((lhs - rhs).norm() / lhs.norm())
}
