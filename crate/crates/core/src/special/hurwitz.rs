//! Hurwitz zeta `ζ(s, α) = Σ_{n≥0} (n+α)^{−s}` and its `s`-derivative by
//! Euler–Maclaurin summation.
//!
//! The pole at `s = 1` is split off: the internal routines return the regular
//! part `ζ(s, α) − 1/(s−1)` (and its derivative) so that combinations whose
//! pole residues cancel, such as `L(s, χ)` for non-principal `χ`, stay finite
//! at `s = 1`.

use num_complex::Complex64;

use super::bernoulli::even_over_factorial;
use super::dd::{pow_neg_accurate, Dd};
use crate::error::{Error, Result};

const MIN_CUT: f64 = 15.0;
const NEG_MIN_CUT: f64 = 4.0;
const NEG_CUT_RATIO: f64 = 0.8;
const EM_TERMS: usize = 12;
const MAX_IMAG: f64 = 10_000.0;
const MIN_REAL: f64 = -10.0;

/// Regular part of `ζ(s, α)` and optionally of `∂ζ/∂s`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Regular {
    pub value: Complex64,
    pub ds: Complex64,
}

fn check(s: Complex64, alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "Hurwitz parameter alpha = {alpha} must be positive"
        )));
    }
    if !(s.re.is_finite() && s.im.is_finite()) || s.im.abs() > MAX_IMAG || s.re < MIN_REAL {
        return Err(Error::Precision(format!(
            "Hurwitz zeta argument {s} outside the supported region"
        )));
    }
    Ok(())
}

/// `φ(u) = ((N+α)^{−u} − 1)/u` with `c = log(N+α)` and `e = (N+α)^{−u}`,
/// and `φ′(u)`.
fn pole_remainder(u: Complex64, c: f64, e: Complex64, want_ds: bool) -> (Complex64, Complex64) {
    let uc = u * c;
    if uc.norm() < 0.5 {
        // φ(u) = Σ_{m≥1} (−c)^m u^{m−1}/m!
        let mut phi = Complex64::new(0.0, 0.0);
        let mut dphi = Complex64::new(0.0, 0.0);
        let mut coef = 1.0; // (−c)^m / m!
        let mut upow = Complex64::new(1.0, 0.0); // u^{m−1}
        let mut upow_prev = Complex64::new(0.0, 0.0); // u^{m−2}
        for m in 1..40 {
            coef *= -c / m as f64;
            phi += upow * coef;
            if want_ds && m >= 2 {
                dphi += upow_prev * (coef * (m - 1) as f64);
            }
            upow_prev = if m == 1 {
                Complex64::new(1.0, 0.0)
            } else {
                upow_prev * u
            };
            upow = upow * u;
            if coef.abs() * upow.norm().max(1e-300) < 1e-18 * phi.norm() && m > 4 {
                break;
            }
        }
        (phi, dphi)
    } else {
        let phi = (e - 1.0) / u;
        let dphi = if want_ds {
            -c * e / u - phi / u
        } else {
            Complex64::new(0.0, 0.0)
        };
        (phi, dphi)
    }
}

/// Number of directly summed terms. Left of the imaginary axis the summed
/// terms grow like `N^{−Re s}` and cancel, so there the cut is a multiple of
/// `|s|` keeping `|s|/(2πN)` near 0.2.
fn cut_off(s: Complex64) -> f64 {
    if s.re >= 0.0 {
        MIN_CUT.max(s.im.abs().ceil())
    } else {
        NEG_MIN_CUT.max((NEG_CUT_RATIO * s.norm()).ceil())
    }
}

/// Euler–Maclaurin evaluation of the regular part for any `α > 0`.
pub(crate) fn regular_part(s: Complex64, alpha: f64, want_ds: bool) -> Result<Regular> {
    euler_maclaurin(s, alpha, want_ds, true)
}

/// `ζ(s, α)` and `∂ζ/∂s` without splitting off the pole, for any `α > 0` and
/// `s ≠ 1`. Preferred when `α` is large and `Re s > 1`, where the regular part
/// nearly cancels the pole term.
pub(crate) fn full_value(s: Complex64, alpha: f64, want_ds: bool) -> Result<Regular> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::pole(s));
    }
    euler_maclaurin(s, alpha, want_ds, false)
}

fn euler_maclaurin(s: Complex64, alpha: f64, want_ds: bool, split: bool) -> Result<Regular> {
    check(s, alpha)?;
    let cut = cut_off(s);
    let n_terms = cut as usize;
    let mut value = Complex64::new(0.0, 0.0);
    let mut ds = Complex64::new(0.0, 0.0);
    let accurate = s.re < 0.0;
    for n in 0..n_terms {
        let lg = (n as f64 + alpha).ln();
        let term = if accurate {
            pow_neg_accurate(Dd::from_f64(n as f64) + Dd::from_f64(alpha), s)
        } else {
            (-s * lg).exp()
        };
        value += term;
        if want_ds {
            ds -= term * lg;
        }
    }
    let big = cut + alpha;
    let c = big.ln();
    // (N+α)^{−s}
    let base = if accurate {
        pow_neg_accurate(Dd::from_f64(cut) + Dd::from_f64(alpha), s)
    } else {
        (-s * c).exp()
    };
    let u = s - 1.0;
    let head = base * big; // (N+α)^{1−s}
    if split {
        let (phi, dphi) = pole_remainder(u, c, head, want_ds);
        value += phi;
        ds += dphi;
    } else {
        value += head / u;
        if want_ds {
            ds -= head * c / u + head / (u * u);
        }
    }

    value += base * 0.5;
    if want_ds {
        ds -= base * (0.5 * c);
    }

    let coeffs = even_over_factorial();
    let inv_big = 1.0 / big;
    let inv_big2 = inv_big * inv_big;
    // P = (s)_{2j−1}, P′ its s-derivative; pw = (N+α)^{−s−2j+1}
    let mut p = s;
    let mut dp = Complex64::new(1.0, 0.0);
    let mut pw = base * inv_big;
    for (j, &b) in coeffs.iter().enumerate().take(EM_TERMS) {
        if pw == Complex64::new(0.0, 0.0) {
            break;
        }
        let term = p * pw * b;
        value += term;
        if want_ds {
            ds += (dp - p * c) * pw * b;
        }
        let j = j as f64 + 1.0;
        // extend (s)_{2j−1} to (s)_{2j+1}
        let f1 = s + (2.0 * j - 1.0);
        let f2 = s + 2.0 * j;
        let f = f1 * f2;
        dp = dp * f + p * (f1 + f2);
        p *= f;
        pw *= inv_big2;
    }
    if !(value.re.is_finite() && value.im.is_finite() && ds.re.is_finite() && ds.im.is_finite()) {
        return Err(Error::Precision(format!(
            "Hurwitz zeta overflow at s = {s}, alpha = {alpha}"
        )));
    }
    Ok(Regular { value, ds })
}

fn check_public(s: Complex64, alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "Hurwitz parameter alpha = {alpha} must lie in (0, 1]"
        )));
    }
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::pole(s));
    }
    Ok(())
}

/// `ζ(s, α)` for `α ∈ (0, 1]`, `s ≠ 1`.
pub fn hurwitz_zeta(s: Complex64, alpha: f64) -> Result<Complex64> {
    check_public(s, alpha)?;
    Ok(regular_part(s, alpha, false)?.value + 1.0 / (s - 1.0))
}

/// `∂ζ(s, α)/∂s` for `α ∈ (0, 1]`, `s ≠ 1`.
pub fn hurwitz_zeta_ds(s: Complex64, alpha: f64) -> Result<Complex64> {
    check_public(s, alpha)?;
    let u = s - 1.0;
    Ok(regular_part(s, alpha, true)?.ds - 1.0 / (u * u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::ln_gamma;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Partial sum to `M` plus the integral tail and half-term correction.
    fn zeta2_oracle() -> f64 {
        let m = 100_000;
        let mut s = 0.0;
        for n in (1..=m).rev() {
            s += 1.0 / (n as f64 * n as f64);
        }
        let m = m as f64;
        s + 1.0 / m - 0.5 / (m * m) + 1.0 / (6.0 * m * m * m)
    }

    #[test]
    fn basel() {
        let v = hurwitz_zeta(c(2.0, 0.0), 1.0).unwrap();
        assert!((v.re - PI * PI / 6.0).abs() < 1e-14);
        assert!((v.re - zeta2_oracle()).abs() < 1e-13);
        assert!(v.im.abs() < 1e-16);
    }

    #[test]
    fn nonpositive_values() {
        let v = hurwitz_zeta(c(0.0, 0.0), 0.5).unwrap();
        assert!(v.norm() < 1e-14);
        let v = hurwitz_zeta(c(0.0, 0.0), 0.3).unwrap();
        assert!((v.re - 0.2).abs() < 1e-13);
        let v = hurwitz_zeta(c(-1.0, 0.0), 1.0).unwrap();
        assert!((v.re + 1.0 / 12.0).abs() < 1e-14);
    }

    #[test]
    fn pole_and_bad_alpha() {
        assert_eq!(hurwitz_zeta(c(1.0, 0.0), 0.5), Err(Error::Pole { re: 1.0, im: 0.0 }));
        assert!(hurwitz_zeta_ds(c(1.0, 0.0), 0.5).is_err());
        assert!(hurwitz_zeta(c(2.0, 0.0), 1.5).is_err());
        assert!(hurwitz_zeta(c(2.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn derivative_at_zero_is_log_gamma() {
        // ζ′(0, α) = log Γ(α) − ½ log 2π
        let v = hurwitz_zeta_ds(c(0.0, 0.0), 1.0).unwrap();
        assert!((v.re + 0.5 * (2.0 * PI).ln()).abs() < 1e-13);
        let a = 0.3;
        let v = hurwitz_zeta_ds(c(0.0, 0.0), a).unwrap();
        let expected = ln_gamma(c(a, 0.0)).unwrap().re - 0.5 * (2.0 * PI).ln();
        assert!((v.re - expected).abs() < 1e-12);
    }

    #[test]
    fn derivative_vs_finite_difference() {
        let h = 1e-5;
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        let mut pts = vec![(c(2.0, 0.0), 1.0)];
        for _ in 0..50 {
            pts.push((
                c(rng.gen_range(-5.0..10.0), rng.gen_range(-80.0..80.0)),
                rng.gen_range(0.05..1.0),
            ));
        }
        for (s, a) in pts {
            let fd = (hurwitz_zeta(s + h, a).unwrap() - hurwitz_zeta(s - h, a).unwrap()) / (2.0 * h);
            let d = hurwitz_zeta_ds(s, a).unwrap();
            assert!((fd - d).norm() <= 1e-7 * d.norm().max(1.0), "s={s} a={a}: {fd} vs {d}");
        }
    }

    #[test]
    fn derivative_linearity() {
        let s = c(2.0, 0.0);
        let h = 1e-5;
        let diff = |s: Complex64| hurwitz_zeta(s, 1.0).unwrap() - hurwitz_zeta(s, 0.5).unwrap();
        let fd = (diff(s + h) - diff(s - h)) / (2.0 * h);
        let d = hurwitz_zeta_ds(s, 1.0).unwrap() - hurwitz_zeta_ds(s, 0.5).unwrap();
        assert!((fd - d).norm() < 1e-8);
        // ζ(s,1/2) = (2^s − 1)ζ(s) so the derivative difference has a closed form.
        let z = hurwitz_zeta(s, 1.0).unwrap();
        let dz = hurwitz_zeta_ds(s, 1.0).unwrap();
        let expected = dz - (4.0 * 2f64.ln() * z + 3.0 * dz);
        assert!((d - expected).norm() < 1e-10);
    }

    #[test]
    fn multiplication_property() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..100 {
            let s = c(rng.gen_range(-5.0..10.0), rng.gen_range(-80.0..80.0));
            if (s - 1.0).norm() < 1e-3 {
                continue;
            }
            let half = hurwitz_zeta(s, 0.5).unwrap();
            let one = hurwitz_zeta(s, 1.0).unwrap();
            let rhs = Complex64::new(2.0, 0.0).powc(s) * one;
            // Relative to the summands: for Re s < 0 the sum is up to 2^{−Re s}
            // times smaller than either of them.
            let scale = half.norm() + one.norm();
            assert!((half + one - rhs).norm() <= 1e-11 * scale, "s = {s}");
        }
    }

    #[test]
    fn regular_part_near_pole() {
        // ζ(s,1) − 1/(s−1) → Euler's constant as s → 1.
        let r = regular_part(c(1.0, 0.0), 1.0, false).unwrap();
        assert!((r.value.re - 0.577_215_664_901_532_9).abs() < 1e-14);
        let r2 = regular_part(c(1.0 + 1e-9, 0.0), 1.0, false).unwrap();
        assert!((r.value - r2.value).norm() < 1e-9);
    }

    #[test]
    fn unsplit_matches_split() {
        for &(s, a) in &[(c(2.5, 3.0), 0.7), (c(0.5, 20.0), 40.0), (c(30.0, -1.0), 1.5)] {
            let full = full_value(s, a, true).unwrap();
            let reg = regular_part(s, a, true).unwrap();
            let u = s - 1.0;
            assert!((full.value - reg.value - 1.0 / u).norm() <= 1e-13 * full.value.norm().max(1.0));
            assert!((full.ds - reg.ds + 1.0 / (u * u)).norm() <= 1e-12 * full.ds.norm().max(1.0));
        }
        // Large α, Re s > 1: the unsplit value keeps full relative accuracy.
        let v = full_value(c(3.0, 0.0), 1e4, false).unwrap();
        let oracle = 1.0 / (2.0 * 1e8) * (1.0 + 1e-4 * 1.0 + 1e-8 / 2.0);
        assert!((v.value.re - oracle).abs() <= 1e-11 * oracle);
    }

    #[test]
    fn shifted_alpha() {
        // ζ(s, α+1) = ζ(s, α) − α^{−s}
        let s = c(0.5, 14.0);
        let a = 0.4;
        let lhs = regular_part(s, a + 1.0, false).unwrap().value;
        let rhs = regular_part(s, a, false).unwrap().value - Complex64::new(a, 0.0).powc(-s);
        assert!((lhs - rhs).norm() < 1e-12);
    }
}
