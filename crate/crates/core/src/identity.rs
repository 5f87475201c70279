//! The explicit formula linking the twisted Möbius series to a ₁F₁ sum and a
//! sum over the non-trivial zeros of `L(s, χ)`:
//!
//! ```text
//! Σ χ(n)μ(n) n^{−k} e^{−πx²/(qn²)}
//!     = i^a √q / G(χ) · (q/(πx²))^{(k+a)/2} (π/q)^{a+1/2} Γ((k+a)/2)/Γ(a+1/2)
//!       · Σ χ̄(n)μ(n) n^{−1−a} ₁F₁((k+a)/2; a+1/2; −π/(qn²x²))
//!     + ½ Σ_ρ Γ((k−ρ)/2)/L′(ρ, χ) · (q/(πx²))^{(k−ρ)/2}
//! ```
//!
//! together with its odd-character `k = 2` specialization, the `q = 1` case,
//! the Mellin transform of the Riesz series and the Mellin–Barnes integral
//! behind the ₁F₁ terms.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{mobius_upto, DirichletCharacter};
use crate::error::{Error, Result};
use crate::lfunc::{find_zeros, l_derivative, l_inverse, ZeroList, SIMPLICITY_THRESHOLD};
use crate::quad::integrate;
use crate::riesz::{direct_cutoff, p_series_direct, RieszParams, RieszSeries};
use crate::special::{gamma_complex, gamma_real, kummer_1f1, rgamma};

/// Zero height used when the caller does not supply a zero list.
pub const DEFAULT_ZERO_HEIGHT: f64 = 50.0;
/// Residual accepted for the identity and its specializations.
pub const IDENTITY_TOLERANCE: f64 = 1e-8;
/// Hyper-sum error estimate above which a warning is attached.
pub const HYPER_TAIL_WARNING: f64 = 1e-9;
/// Factor on the last zero term used as the zero-sum tail bound.
const ZERO_TAIL_FACTOR: f64 = 10.0;
/// Taylor terms of ₁F₁ summed analytically against `1/L(1+a+2j, χ̄)`.
const TAYLOR_TERMS: usize = 3;
const MAX_HYPER_TERMS: usize = 10_000_000;
/// Per-panel absolute target for the quadratures.
const PANEL_TOL: f64 = 1e-10;
const J_HALF_WIDTH: f64 = 60.0;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `X_{n,q} = q(nx)²/π`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XnqScale {
    pub n: u64,
    pub q: u64,
    pub x: f64,
    pub value: f64,
}

impl XnqScale {
    pub fn new(n: u64, q: u64, x: f64) -> Result<Self> {
        if n == 0 || q == 0 || !(x > 0.0) || !x.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "X_(n,q) needs n, q >= 1 and x > 0; got n={n}, q={q}, x={x}"
            )));
        }
        let nx = n as f64 * x;
        Ok(XnqScale {
            n,
            q,
            x,
            value: q as f64 * nx * nx / PI,
        })
    }
}

fn check_args(chi: &DirichletCharacter, k: f64, x: f64) -> Result<()> {
    if !chi.is_primitive() {
        return Err(Error::Domain(format!(
            "the identity needs a primitive character; ({}, {}) has conductor {}",
            chi.modulus(),
            chi.conrey_index(),
            chi.conductor()
        )));
    }
    if !(k >= 1.0) || !k.is_finite() {
        return Err(Error::Domain(format!("k = {k}; the identity needs k >= 1")));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidArgument(format!("x = {x} must be positive")));
    }
    Ok(())
}

/// Left side: `P_{k,2,χ}(πx²/q)`.
pub fn identity_lhs(chi: &DirichletCharacter, k: f64, x: f64) -> Result<Complex64> {
    Ok(lhs_with_tail(chi, k, x)?.0)
}

fn lhs_with_tail(chi: &DirichletCharacter, k: f64, x: f64) -> Result<(Complex64, f64)> {
    check_args(chi, k, x)?;
    let arg = PI * x * x / chi.modulus() as f64;
    let v = p_series_direct(chi, RieszParams::new(k, 2.0, arg)?)?;
    Ok((v.value, v.tail_bound))
}

/// The ₁F₁ block with an estimate of its truncation and rounding error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperSum {
    pub value: Complex64,
    pub error_estimate: f64,
    pub terms: usize,
}

/// `Σ_n χ(n)μ(n) n^{−1−a} ₁F₁(A; B; −z/n²)`.
///
/// The first [`TAYLOR_TERMS`] Taylor terms of ₁F₁ are summed over all `n`
/// through `1/L(1+a+2j, χ)`; the remainder is `O(n^{−1−a−2J})` and is summed
/// directly, so the conditionally convergent `a = 0` case needs no averaging.
fn mobius_hyper_sum(chi: &DirichletCharacter, a: u8, big_a: f64, big_b: f64, z: f64) -> Result<HyperSum> {
    let af = a as f64;
    let mut coef = Vec::with_capacity(TAYLOR_TERMS + 1);
    let mut cj = 1.0;
    for j in 0..=TAYLOR_TERMS {
        coef.push(cj);
        let jf = j as f64;
        cj *= (big_a + jf) / ((big_b + jf) * (jf + 1.0));
    }
    let mut analytic = Complex64::new(0.0, 0.0);
    let mut rounding = 0.0;
    let mut zj = 1.0;
    for (j, &cj) in coef.iter().take(TAYLOR_TERMS).enumerate() {
        let inv = l_inverse(chi, c(1.0 + af + 2.0 * j as f64))?;
        let t = inv * (cj * zj);
        analytic += t;
        rounding += 4e-16 * t.norm().max(cj * zj.abs());
        zj *= -z;
    }
    // Σ_{n>N} |c_J| (z/n²)^J n^{−1−a} ≤ |c_J| z^J N^{−a−2J}/(a+2J)
    let p = af + 2.0 * TAYLOR_TERMS as f64;
    let lead = 1.1 * coef[TAYLOR_TERMS].abs() * z.powi(TAYLOR_TERMS as i32);
    let target = 1e-17;
    let n_max = ((lead / (p * target)).powf(1.0 / p).ceil() as usize).clamp(100, MAX_HYPER_TERMS);
    let truncation = lead * (n_max as f64).powf(-p) / p;
    let mu = mobius_upto(n_max);
    let mut direct = Complex64::new(0.0, 0.0);
    for n in 1..=n_max {
        let m = mu.get(n);
        if m == 0 {
            continue;
        }
        let ch = chi.value_u(n as u64);
        if ch == Complex64::new(0.0, 0.0) {
            continue;
        }
        let nf = n as f64;
        let w = z / (nf * nf);
        let r = taylor_remainder(big_a, big_b, w, &coef)?;
        direct += ch * (m as f64 * nf.powf(-1.0 - af)) * r;
    }
    Ok(HyperSum {
        value: analytic + direct,
        error_estimate: truncation + rounding,
        terms: n_max,
    })
}

/// `₁F₁(A; B; −w) − Σ_{j<J} c_j (−w)^j`.
fn taylor_remainder(big_a: f64, big_b: f64, w: f64, coef: &[f64]) -> Result<Complex64> {
    let jj = TAYLOR_TERMS;
    if w <= 0.5 {
        let mut t = coef[jj] * (-w).powi(jj as i32);
        let mut sum = t;
        for j in jj..jj + 200 {
            let jf = j as f64;
            t *= -w * (big_a + jf) / ((big_b + jf) * (jf + 1.0));
            sum += t;
            if t.abs() <= 1e-17 * sum.abs() {
                return Ok(c(sum));
            }
        }
        return Err(Error::Precision(format!("₁F₁ remainder did not converge at w = {w}")));
    }
    let full = kummer_1f1(c(big_a), c(big_b), c(-w))?;
    let poly: f64 = coef[..jj]
        .iter()
        .enumerate()
        .map(|(j, cj)| cj * (-w).powi(j as i32))
        .sum();
    Ok(full - poly)
}

/// Parity `a ∈ {0, 1}`.
fn parity(chi: &DirichletCharacter) -> u8 {
    chi.parity()
}

/// First block of the right side, prefactor included.
pub fn rhs_hyper_sum(chi: &DirichletCharacter, k: f64, x: f64) -> Result<HyperSum> {
    check_args(chi, k, x)?;
    let a = parity(chi);
    let af = a as f64;
    let q = chi.modulus() as f64;
    let big_a = 0.5 * (k + af);
    let big_b = af + 0.5;
    let ia = if a == 1 { Complex64::new(0.0, 1.0) } else { c(1.0) };
    let prefactor = ia * q.sqrt() / chi.gauss_sum()
        * ((q / (PI * x * x)).powf(big_a) * (PI / q).powf(big_b) * gamma_real(big_a)? / gamma_real(big_b)?);
    let inner = mobius_hyper_sum(&chi.conjugate(), a, big_a, big_b, PI / (q * x * x))?;
    Ok(HyperSum {
        value: prefactor * inner.value,
        error_estimate: prefactor.norm() * inner.error_estimate,
        terms: inner.terms,
    })
}

/// One term of the zero sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroTerm {
    pub rho: Complex64,
    pub value: Complex64,
    pub abs: f64,
}

/// The sum over zeros, in order of increasing `|γ|`, with its tail bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSum {
    pub value: Complex64,
    pub tail_bound: f64,
    pub terms: Vec<ZeroTerm>,
}

fn check_zero_list(chi: &DirichletCharacter, zeros: &ZeroList) -> Result<()> {
    if zeros.character != chi.label() {
        return Err(Error::InvalidArgument(format!(
            "zero list belongs to character {:?}, not {:?}",
            zeros.character,
            chi.label()
        )));
    }
    if !zeros.complete {
        return Err(Error::MissingZeros(format!(
            "zero list for {:?} up to T = {} is not certified complete; run find_zeros for this character",
            zeros.character, zeros.height
        )));
    }
    zeros.check_shape(chi.is_real())
}

/// `Σ_ρ f(ρ)/L′(ρ, χ)` over the listed zeros in order of increasing `|γ|`,
/// rejecting near-multiple zeros.
fn zero_terms<F>(chi: &DirichletCharacter, zeros: &ZeroList, mut weight: F) -> Result<Vec<ZeroTerm>>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    check_zero_list(chi, zeros)?;
    let mut gammas = zeros.gammas.clone();
    gammas.sort_by(|a, b| a.abs().total_cmp(&b.abs()).then(a.total_cmp(b)));
    let mut out = Vec::with_capacity(gammas.len());
    for g in gammas {
        let rho = Complex64::new(0.5, g);
        let d = l_derivative(chi, rho)?;
        if d.norm() <= SIMPLICITY_THRESHOLD {
            return Err(Error::SimplicityViolation {
                gamma: g,
                derivative_abs: d.norm(),
            });
        }
        let value = weight(rho)? / d;
        out.push(ZeroTerm {
            rho,
            value,
            abs: value.norm(),
        });
    }
    Ok(out)
}

fn summed(terms: Vec<ZeroTerm>, empty_bound: f64) -> ZeroSum {
    let value = terms.iter().map(|t| t.value).sum();
    let tail_bound = terms.last().map_or(empty_bound, |t| ZERO_TAIL_FACTOR * t.abs);
    ZeroSum {
        value,
        tail_bound,
        terms,
    }
}

/// `½ Σ_ρ Γ((k−ρ)/2)/L′(ρ, χ) · (q/(πx²))^{(k−ρ)/2}`.
///
/// The tail bound is ten times the last term, or for an empty list ten times
/// the Γ envelope `½|Γ((k−1/2−iT)/2)| (q/(πx²))^{(k−1/2)/2}` at the list
/// height.
pub fn rhs_zero_sum(chi: &DirichletCharacter, k: f64, x: f64, zeros: &ZeroList) -> Result<ZeroSum> {
    check_args(chi, k, x)?;
    let base = chi.modulus() as f64 / (PI * x * x);
    let ln_base = base.ln();
    let terms = zero_terms(chi, zeros, |rho| {
        let e = (c(k) - rho) * 0.5;
        Ok(gamma_complex(e)? * (e * ln_base).exp() * 0.5)
    })?;
    let edge = Complex64::new(0.5 * (k - 0.5), -0.5 * zeros.height);
    let empty = ZERO_TAIL_FACTOR * 0.5 * gamma_complex(edge)?.norm() * base.powf(edge.re);
    Ok(summed(terms, empty))
}

/// Both sides of the identity at one `(χ, k, x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub character: (u64, u64),
    pub k: f64,
    pub x: f64,
    pub lhs: Complex64,
    pub rhs_hyper: Complex64,
    pub rhs_zero_sum: Complex64,
    pub rhs_total: Complex64,
    pub residual: f64,
    pub zero_height_used: f64,
    pub zero_sum_tail_bound: f64,
    pub hyper_error_estimate: f64,
    pub lhs_tail_bound: f64,
    pub zero_terms: Vec<ZeroTerm>,
    pub warnings: Vec<String>,
}

impl IdentityReport {
    /// Sum of the reported truncation bounds.
    pub fn combined_bound(&self) -> f64 {
        self.zero_sum_tail_bound + self.hyper_error_estimate + self.lhs_tail_bound
    }

    /// `max(1e−8, 3 × combined bound)`.
    pub fn tolerance(&self) -> f64 {
        IDENTITY_TOLERANCE.max(3.0 * self.combined_bound())
    }

    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance()
    }
}

/// Verifies the identity with zeros found up to height `T`.
pub fn verify_identity(chi: &DirichletCharacter, k: f64, x: f64, height: f64) -> Result<IdentityReport> {
    check_args(chi, k, x)?;
    let zeros = find_zeros(chi, height)?;
    if !zeros.complete {
        return Err(Error::MissingZeros(format!(
            "zeros of L(s, {:?}) up to T = {height} could not be certified complete",
            chi.label()
        )));
    }
    verify_identity_with_zeros(chi, k, x, &zeros)
}

/// Verifies the identity against a given zero list.
pub fn verify_identity_with_zeros(
    chi: &DirichletCharacter,
    k: f64,
    x: f64,
    zeros: &ZeroList,
) -> Result<IdentityReport> {
    check_args(chi, k, x)?;
    let (lhs, lhs_tail) = lhs_with_tail(chi, k, x)?;
    let hyper = rhs_hyper_sum(chi, k, x)?;
    let zs = rhs_zero_sum(chi, k, x, zeros)?;
    let mut warnings = zeros.warnings.clone();
    if hyper.error_estimate > HYPER_TAIL_WARNING {
        warnings.push(format!(
            "₁F₁ sum error estimate {:e} exceeds {HYPER_TAIL_WARNING:e}",
            hyper.error_estimate
        ));
    }
    let rhs_total = hyper.value + zs.value;
    Ok(IdentityReport {
        character: chi.label(),
        k,
        x,
        lhs,
        rhs_hyper: hyper.value,
        rhs_zero_sum: zs.value,
        rhs_total,
        residual: (lhs - rhs_total).norm(),
        zero_height_used: zeros.height,
        zero_sum_tail_bound: zs.tail_bound,
        hyper_error_estimate: hyper.error_estimate,
        lhs_tail_bound: lhs_tail,
        zero_terms: zs.terms,
        warnings,
    })
}

/// The `q = 1` form
/// `Σ μ(n)n^{−k}e^{−X/n²} = Γ(k/2)X^{−k/2} Σ μ(n)/n ₁F₁(k/2; 1/2; −π²/(n²X))
/// + ½ Σ_ρ Γ((k−ρ)/2)/ζ′(ρ) X^{−(k−ρ)/2}`, assembled on its own; returns
/// `|lhs − rhs|`.
pub fn zeta_identity_residual(k: f64, big_x: f64, zeros: &ZeroList) -> Result<f64> {
    let zeta = DirichletCharacter::trivial();
    check_args(&zeta, k, 1.0)?;
    if !(big_x > 0.0) || !big_x.is_finite() {
        return Err(Error::InvalidArgument(format!("X = {big_x} must be positive")));
    }
    let lhs = p_series_direct(&zeta, RieszParams::new(k, 2.0, big_x)?)?.value;
    let inner = mobius_hyper_sum(&zeta, 0, 0.5 * k, 0.5, PI * PI / big_x)?;
    let hyper = inner.value * (gamma_real(0.5 * k)? * big_x.powf(-0.5 * k));
    let ln_x = big_x.ln();
    let terms = zero_terms(&zeta, zeros, |rho| {
        let e = (c(k) - rho) * 0.5;
        Ok(gamma_complex(e)? * (-e * ln_x).exp() * 0.5)
    })?;
    let zero_sum: Complex64 = terms.iter().map(|t| t.value).sum();
    Ok((lhs - hyper - zero_sum).norm())
}

/// One side of the odd-character `k = 2` specialization:
/// `α^{3/2} g (P_χ(α) − q/(4πα²) Σ_ρ Γ(1−ρ/2)/L′(ρ,χ) (π/q)^{ρ/2} α^ρ)`.
fn dixit_side(chi: &DirichletCharacter, alpha: f64, g: Complex64, zeros: &ZeroList) -> Result<Complex64> {
    let q = chi.modulus() as f64;
    let p = identity_lhs(chi, 2.0, alpha)?;
    let ln_w = (PI / q).sqrt().ln() + alpha.ln();
    let terms = zero_terms(chi, zeros, |rho| {
        Ok(gamma_complex(c(1.0) - rho * 0.5)? * (rho * ln_w).exp())
    })?;
    let zs: Complex64 = terms.iter().map(|t| t.value).sum();
    Ok(g * alpha.powf(1.5) * (p - zs * (q / (4.0 * PI * alpha * alpha))))
}

/// Odd-character `k = 2` specialization at `α`, `β = 1/α`, with zeros found
/// up to [`DEFAULT_ZERO_HEIGHT`].
pub fn dixit_specialization_residual(chi: &DirichletCharacter, alpha: f64) -> Result<f64> {
    check_dixit(chi, alpha)?;
    let zc = find_zeros(chi, DEFAULT_ZERO_HEIGHT)?;
    let zb = if chi.is_real() {
        zc.clone()
    } else {
        find_zeros(&chi.conjugate(), DEFAULT_ZERO_HEIGHT)?
    };
    dixit_specialization_residual_with_zeros(chi, alpha, &zc, &zb)
}

fn check_dixit(chi: &DirichletCharacter, alpha: f64) -> Result<()> {
    check_args(chi, 2.0, 1.0)?;
    if chi.parity() != 1 {
        return Err(Error::Domain("the k = 2 specialization needs an odd character".into()));
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidArgument(format!("alpha = {alpha} must be positive")));
    }
    Ok(())
}

/// As [`dixit_specialization_residual`] with explicit zero lists for `χ` and
/// `χ̄`. The `β` side carries `i√q/√G(χ)`, the branch of `√G(χ̄)` for which
/// the two sides agree.
pub fn dixit_specialization_residual_with_zeros(
    chi: &DirichletCharacter,
    alpha: f64,
    zeros: &ZeroList,
    conj_zeros: &ZeroList,
) -> Result<f64> {
    check_dixit(chi, alpha)?;
    let q = chi.modulus() as f64;
    let sqrt_g = chi.gauss_sum().sqrt();
    let sqrt_g_conj = Complex64::new(0.0, q.sqrt()) / sqrt_g;
    let left = dixit_side(chi, alpha, sqrt_g, zeros)?;
    let right = dixit_side(&chi.conjugate(), 1.0 / alpha, sqrt_g_conj, conj_zeros)?;
    Ok((left - right).norm())
}

/// Quadrature against closed form for the Mellin transform of `P_{k,ℓ,χ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MellinCheck {
    pub quadrature: Complex64,
    pub closed_form: Complex64,
    pub relative_deviation: f64,
    /// Estimated size of the integral beyond the last panel.
    pub tail_estimate: f64,
    pub x_max: f64,
}

const MELLIN_MAX_TERMS: usize = 2_000_000;

/// `∫₀^∞ x^{−s−1} P(x) dx` against `Γ(−s)/L(ℓs+k, χ)` on
/// `(1−k)/ℓ < Re s < 1`, `s ≠ 0`.
///
/// The integral is taken in `u = log x` as
/// `∫_{−∞}^0 e^{−su}(P − P(0)) du + ∫_0^∞ e^{−su} P du − P(0)/s`, which
/// continues the transform across `Re s = 0`. Near `0` the difference
/// `P − P(0)` comes from the power series without the constant term. The
/// upper range grows a unit of `u` at a time until the tail, estimated from
/// the envelope `|P(x)| x^{(k−1/2)/ℓ}` on the last unit, is below `10⁻⁹`
/// of the closed form.
pub fn mellin_check(chi: &DirichletCharacter, k: f64, ell: f64, s: Complex64) -> Result<MellinCheck> {
    RieszParams::new(k, ell, 1.0)?;
    if s == Complex64::new(0.0, 0.0) {
        return Err(Error::pole(s));
    }
    let lower = (1.0 - k) / ell;
    if !(s.re > lower && s.re < 1.0) {
        return Err(Error::InvalidArgument(format!("Re s = {} outside ({lower}, 1)", s.re)));
    }
    if s.im.abs() > 30.0 {
        return Err(Error::InvalidArgument(format!(
            "|Im s| = {} too large for the quadrature",
            s.im.abs()
        )));
    }
    let closed = gamma_complex(-s)? * l_inverse(chi, c(ell * s.re + k) + Complex64::new(0.0, ell * s.im))?;
    let target = 1e-9 * closed.norm().max(1e-300);

    let max_x = (MELLIN_MAX_TERMS as f64 / 100.0).powf(ell);
    let u_cap = max_x.ln().floor();
    let series = RieszSeries::new(chi, k, ell, direct_cutoff(ell, max_x))?;
    let p0 = series_inverse_l(&series, 0)?;

    // x ≤ 1: P(x) − P(0) = Σ_{m≥1} (−x)^m/m! /L(k+ℓm)
    let near = |u: f64| -> Result<Complex64> {
        let x = u.exp();
        let mut sum = Complex64::new(0.0, 0.0);
        let mut coef = 1.0;
        for m in 1..200 {
            coef *= -x / m as f64;
            let t = series_inverse_l(&series, m)? * coef;
            sum += t;
            if t.norm() < 1e-18 * sum.norm() {
                break;
            }
        }
        Ok((-s * u).exp() * sum)
    };
    let u_min = (1e-13f64).ln() / (1.0 - s.re);
    let mut total = integrate(near, u_min, 0.0, PANEL_TOL, 10_000)?.value;

    let decay = s.re + (k - 0.5) / ell;
    let mut u0 = 0.0;
    let tail;
    loop {
        let mut envelope = 0f64;
        let far = |u: f64| -> Result<Complex64> {
            let x = u.exp();
            let p = series.eval(x, direct_cutoff(ell, x))?.value;
            envelope = envelope.max(p.norm() * x.powf((k - 0.5) / ell));
            Ok((-s * u).exp() * p)
        };
        total += integrate(far, u0, u0 + 1.0, PANEL_TOL, 10_000)?.value;
        u0 += 1.0;
        let est = envelope * (-decay * u0).exp() / decay;
        if est <= target || u0 + 1.0 > u_cap {
            tail = est;
            break;
        }
    }
    total -= p0 / s;
    Ok(MellinCheck {
        quadrature: total,
        closed_form: closed,
        relative_deviation: (total - closed).norm() / closed.norm(),
        tail_estimate: tail,
        x_max: u0.exp(),
    })
}

fn series_inverse_l(series: &RieszSeries, m: usize) -> Result<Complex64> {
    series.inverse_l_at(m)
}

/// Mellin–Barnes integral against its ₁F₁ closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JIntegral {
    pub quadrature: Complex64,
    pub closed_form: Complex64,
    pub difference: f64,
}

/// `(1/2πi)∫_{(d₁)} Γ(s)Γ((k+a)/2−s)/Γ((1+a−k)/2+s) X^{−s} ds` over
/// `|Im s| ≤ 60` against `Γ((k+a)/2)/(X^{(k+a)/2}Γ(a+1/2)) ₁F₁((k+a)/2; a+1/2; −1/X)`.
pub fn j_integral_oracle(scale: XnqScale, k: f64, a: u8, d1: f64) -> Result<JIntegral> {
    if a > 1 {
        return Err(Error::InvalidArgument(format!("a = {a} must be 0 or 1")));
    }
    if !(k >= 1.0) || !k.is_finite() {
        return Err(Error::Domain(format!("k = {k}; needs k >= 1")));
    }
    if !(d1 > 0.0 && d1 < 0.5 * k) {
        return Err(Error::InvalidContour(format!("d1 = {d1} must lie in (0, {})", 0.5 * k)));
    }
    let af = a as f64;
    let big_a = 0.5 * (k + af);
    let shift = 0.5 * (1.0 + af - k);
    let ln_x = scale.value.ln();
    let f = |t: f64| -> Result<Complex64> {
        let s = Complex64::new(d1, t);
        Ok(gamma_complex(s)? * gamma_complex(c(big_a) - s)? * rgamma(c(shift) + s)? * (-s * ln_x).exp())
    };
    let q = integrate(f, -J_HALF_WIDTH, J_HALF_WIDTH, PANEL_TOL, 10_000)?;
    let quadrature = q.value / (2.0 * PI);
    let closed_form = kummer_1f1(c(big_a), c(af + 0.5), c(-1.0 / scale.value))?
        * (gamma_real(big_a)? / (gamma_real(af + 0.5)? * scale.value.powf(big_a)));
    Ok(JIntegral {
        quadrature,
        closed_form,
        difference: (quadrature - closed_form).norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi(q: u64, m: u64) -> DirichletCharacter {
        DirichletCharacter::from_conrey(q, m).unwrap()
    }

    #[test]
    fn xnq_scale() {
        let s = XnqScale::new(2, 4, 0.5).unwrap();
        assert!((s.value - 4.0 / PI).abs() < 1e-15);
        assert!(XnqScale::new(1, 4, 0.0).is_err());
    }

    #[test]
    fn lhs_small_x_limit() {
        let v = identity_lhs(&chi(4, 3), 2.0, 1e-5).unwrap();
        let catalan = 0.915_965_594_177_219_015_05;
        assert!((v - 1.0 / catalan).norm() < 1e-8);
    }

    #[test]
    fn hyper_first_term_is_exponential() {
        // A = B at k = a + 1: ₁F₁(A; A; −w) = e^{−w}.
        let coef = [1.0, 1.0, 0.5, 1.0 / 6.0];
        for &w in &[0.01, 0.3, 0.7, 3.0] {
            let r = taylor_remainder(1.5, 1.5, w, &coef).unwrap();
            let exact = (-w).exp() - 1.0 + w - 0.5 * w * w;
            assert!((r.re - exact).abs() < 1e-15, "{w}");
        }
    }

    #[test]
    fn hyper_sum_against_plain_sum() {
        // χ mod 4, k = 2, x = 1: ₁F₁(3/2; 3/2; −w) = e^{−w}, so the inner sum
        // is Σ χ(n)μ(n)/n² e^{−π/(4n²)}. Beyond N the factor e^{−w} is 1 to
        // within N^{−2}, so the tail is 1/G − Σ_{n≤N} χ(n)μ(n)/n² with
        // G = Catalan's constant.
        let c4 = chi(4, 3);
        let hs = mobius_hyper_sum(&c4, 1, 1.5, 1.5, PI / 4.0).unwrap();
        let catalan = 0.915_965_594_177_219_015_05;
        let big_n = 200_000usize;
        let mu = crate::arith::mobius_sieve(big_n).unwrap();
        let (mut plain, mut bare) = (0.0, 0.0);
        for n in (1..=big_n).rev() {
            let nf = n as f64;
            let t = c4.value_u(n as u64).re * mu.get(n) as f64 / (nf * nf);
            plain += t * (-PI / (4.0 * nf * nf)).exp();
            bare += t;
        }
        let oracle = plain + (1.0 / catalan - bare);
        assert!((hs.value.re - oracle).abs() < 1e-12, "{} {}", hs.value.re, oracle);
    }

    #[test]
    fn hyper_sum_large_x_limit() {
        // ₁F₁ → 1 as its argument → 0, leaving 1/L(1+a, χ̄).
        let c4 = chi(4, 3);
        let hs = mobius_hyper_sum(&c4, 1, 1.5, 1.5, 1e-12).unwrap();
        let inv = l_inverse(&c4, c(2.0)).unwrap();
        assert!((hs.value - inv).norm() < 1e-11);
    }

    #[test]
    fn j_integral_examples() {
        let j = j_integral_oracle(
            XnqScale {
                n: 1,
                q: 1,
                x: 1.0,
                value: 10.0,
            },
            2.0,
            1,
            0.5,
        )
        .unwrap();
        assert!(j.difference <= 1e-8, "{}", j.difference);
        let j = j_integral_oracle(
            XnqScale {
                n: 1,
                q: 1,
                x: 1.0,
                value: 5.0,
            },
            2.0,
            0,
            0.5,
        )
        .unwrap();
        assert!(j.difference <= 1e-8, "{}", j.difference);
        assert!(matches!(
            j_integral_oracle(XnqScale::new(1, 4, 1.0).unwrap(), 2.0, 1, 1.0),
            Err(Error::InvalidContour(_))
        ));
    }

    #[test]
    fn j_closed_form_large_x() {
        let j = j_integral_oracle(
            XnqScale {
                n: 1,
                q: 1,
                x: 1.0,
                value: 1e6,
            },
            2.0,
            1,
            0.5,
        )
        .unwrap();
        let lead = gamma_real(1.5).unwrap() / (gamma_real(1.5).unwrap() * 1e9);
        assert!((j.closed_form.re - lead).abs() < 1e-14);
    }

    #[test]
    fn identity_mod4() {
        let c4 = chi(4, 3);
        let zeros = find_zeros(&c4, DEFAULT_ZERO_HEIGHT).unwrap();
        let r = verify_identity_with_zeros(&c4, 2.0, 1.0, &zeros).unwrap();
        assert!(r.residual <= 1e-8, "{r:?}");
        assert!(r.passed());
        assert!((r.rhs_total - r.rhs_hyper - r.rhs_zero_sum).norm() <= 1e-15);
        assert!(r.rhs_zero_sum.im.abs() <= 1e-12);
    }

    #[test]
    fn identity_mod3() {
        let c3 = chi(3, 2);
        let r = verify_identity(&c3, 1.5, 0.5, DEFAULT_ZERO_HEIGHT).unwrap();
        assert!(r.residual <= 1e-8, "{r:?}");
    }

    #[test]
    fn zero_sum_gamma_decay() {
        let c4 = chi(4, 3);
        let zeros = find_zeros(&c4, DEFAULT_ZERO_HEIGHT).unwrap();
        let zs = rhs_zero_sum(&c4, 2.0, 1.0, &zeros).unwrap();
        let t1 = zs.terms.iter().find(|t| (t.rho.im - 6.02).abs() < 0.01).unwrap();
        let t2 = zs.terms.iter().find(|t| (t.rho.im - 10.24).abs() < 0.01).unwrap();
        let d1 = l_derivative(&c4, t1.rho).unwrap().norm();
        let d2 = l_derivative(&c4, t2.rho).unwrap().norm();
        // Stirling: |Γ(σ + it/2)| ≈ √(2π) (t/2)^{σ−1/2} e^{−πt/4}
        let sigma = 0.5 * (2.0 - 0.5);
        let (g1, g2) = (t1.rho.im, t2.rho.im);
        let algebraic = (g2 / g1).powf(sigma - 0.5) * d1 / d2;
        let ratio = t2.abs / t1.abs;
        let envelope = (-PI * (g2 - g1) / 4.0).exp() * algebraic;
        assert!((ratio / envelope - 1.0).abs() < 0.05, "{ratio} {envelope}");
        assert!(t1.abs > t2.abs);
    }

    #[test]
    fn empty_and_paired_zero_sums() {
        let c4 = chi(4, 3);
        let empty = ZeroList {
            character: c4.label(),
            gammas: vec![],
            height: 5.0,
            provenance: crate::lfunc::Provenance::Computed,
            complete: true,
            warnings: vec![],
        };
        let zs = rhs_zero_sum(&c4, 2.0, 1.0, &empty).unwrap();
        assert_eq!(zs.value, Complex64::new(0.0, 0.0));
        assert!(zs.tail_bound > 0.0);
        let zeros = find_zeros(&c4, 12.0).unwrap();
        let zs = rhs_zero_sum(&c4, 2.0, 1.0, &zeros).unwrap();
        assert!(zs.value.im.abs() <= 1e-12);
    }

    #[test]
    fn preconditions() {
        let induced = chi(8, 7);
        assert!(!induced.is_primitive());
        assert!(matches!(identity_lhs(&induced, 2.0, 1.0), Err(Error::Domain(_))));
        let mut incomplete = find_zeros(&chi(4, 3), 10.0).unwrap();
        incomplete.complete = false;
        assert!(matches!(
            rhs_zero_sum(&chi(4, 3), 2.0, 1.0, &incomplete),
            Err(Error::MissingZeros(_))
        ));
        assert!(matches!(
            mellin_check(&chi(4, 3), 2.0, 2.0, Complex64::new(0.0, 0.0)),
            Err(Error::Pole { .. })
        ));
        assert!(matches!(
            dixit_specialization_residual(&chi(5, 4), 1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn dixit_examples() {
        let c4 = chi(4, 3);
        let z = find_zeros(&c4, DEFAULT_ZERO_HEIGHT).unwrap();
        assert!(dixit_specialization_residual_with_zeros(&c4, 1.0, &z, &z).unwrap() <= 1e-12);
        let r = dixit_specialization_residual_with_zeros(&c4, 2.0, &z, &z).unwrap();
        assert!(r <= 1e-8, "{r}");
        let c3 = chi(3, 2);
        let z3 = find_zeros(&c3, DEFAULT_ZERO_HEIGHT).unwrap();
        let r = dixit_specialization_residual_with_zeros(&c3, 0.5, &z3, &z3).unwrap();
        assert!(r <= 1e-8, "{r}");
    }

    #[test]
    fn mellin_examples() {
        let m = mellin_check(&chi(4, 3), 2.0, 2.0, Complex64::new(0.5, 0.0)).unwrap();
        assert!(m.relative_deviation <= 1e-6, "{m:?}");
        let m = mellin_check(&chi(3, 2), 3.0, 1.0, Complex64::new(-0.5, 0.0)).unwrap();
        assert!(m.relative_deviation <= 1e-6, "{m:?}");
    }
}
