//! Critical-line zeros: sign changes of the rotated completed function and
//! an argument-principle count over `[−1/2, 3/2] × [−T, T]`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{l_derivative, l_value, lambda_phase};
use crate::arith::DirichletCharacter;
use crate::error::{Error, Result};

/// `|L(1/2 + iγ)|` accepted for a zero.
pub(crate) const ZERO_TOLERANCE: f64 = 1e-8;
/// `|L′(ρ)|` below which a zero is reported as possibly multiple.
pub(crate) const SIMPLICITY_THRESHOLD: f64 = 1e-6;
const GRID_STEP: f64 = 0.05;
const BISECTION_WIDTH: f64 = 1e-11;
const MAX_ZERO_MODULUS: u64 = 100;
const MAX_HEIGHT: f64 = 200.0;
/// Height perturbations tried when a zero sits close to `±T`.
const HEIGHT_OFFSETS: [f64; 5] = [0.0, 0.0025, 0.005, 0.0075, 0.01];
/// `|L(1/2 ± iT)|` below which `T` is considered too close to a zero.
const EDGE_CLEARANCE: f64 = 1e-4;
const CONTOUR_PIECE: f64 = 0.1;
const MIN_PIECE: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Computed,
    Ingested,
}

/// Ordinates `γ` of zeros `1/2 + iγ` with `|γ| ≤ height`, increasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroList {
    pub character: (u64, u64),
    pub gammas: Vec<f64>,
    pub height: f64,
    pub provenance: Provenance,
    /// All zeros with `|γ| ≤ height` are present (certified by the argument
    /// principle).
    pub complete: bool,
    pub warnings: Vec<String>,
}

impl ZeroList {
    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }

    pub fn rhos(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.gammas.iter().map(|&g| Complex64::new(0.5, g))
    }

    /// Checks ordering and, for real characters, symmetry under `γ ↦ −γ`.
    pub fn check_shape(&self, chi_is_real: bool) -> Result<()> {
        if self.gammas.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Validation("ordinates are not strictly increasing".into()));
        }
        if chi_is_real {
            let n = self.gammas.len();
            for i in 0..n {
                if (self.gammas[i] + self.gammas[n - 1 - i]).abs() > 1e-8 {
                    return Err(Error::Validation(format!(
                        "ordinate {} has no mirror image for a real character",
                        self.gammas[i]
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Argument-principle zero count and the height actually used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroCount {
    pub count: i64,
    pub height_used: f64,
}

fn check_character(chi: &DirichletCharacter, height: f64) -> Result<()> {
    if !chi.is_primitive() {
        return Err(Error::Domain(format!(
            "zero search needs a primitive character; modulus {} has conductor {}",
            chi.modulus(),
            chi.conductor()
        )));
    }
    if chi.modulus() > MAX_ZERO_MODULUS {
        return Err(Error::InvalidArgument(format!(
            "zero search supports moduli up to {MAX_ZERO_MODULUS}"
        )));
    }
    if !(height >= 0.0 && height <= MAX_HEIGHT) {
        return Err(Error::InvalidArgument(format!(
            "height {height} outside [0, {MAX_HEIGHT}]"
        )));
    }
    Ok(())
}

/// `ε(χ)^{−1/2}` for the rotation of `Λ(1/2 + it)` onto the real line.
pub(crate) fn rotation(chi: &DirichletCharacter) -> Result<Complex64> {
    Ok(chi.epsilon_factor()?.sqrt().inv())
}

/// `Z(t) = Re[ε^{−1/2} e^{iθ(t)} L(1/2 + it)]`, a positive multiple of
/// `ε^{−1/2} Λ(1/2 + it)`, which is real for every primitive character.
pub(crate) fn rotated_z(chi: &DirichletCharacter, rot: Complex64, t: f64) -> Result<f64> {
    let (phase, l) = lambda_phase(chi, Complex64::new(0.5, t))?;
    Ok((rot * phase * l).re)
}

/// `(|L(ρ)|, |L′(ρ)|)` for `ρ = 1/2 + iγ`.
pub(crate) fn validate_zero(chi: &DirichletCharacter, gamma: f64) -> Result<(f64, f64)> {
    let rho = Complex64::new(0.5, gamma);
    Ok((l_value(chi, rho)?.norm(), l_derivative(chi, rho)?.norm()))
}

/// One refinement of an externally supplied ordinate: if `Z` changes sign
/// on `[γ − δ, γ + δ]` the bracket is bisected to full width, otherwise `γ`
/// is returned unchanged.
pub(crate) fn refine_zero(chi: &DirichletCharacter, gamma: f64, delta: f64) -> Result<f64> {
    let rot = rotation(chi)?;
    let (a, b) = (gamma - delta, gamma + delta);
    let za = rotated_z(chi, rot, a)?;
    let zb = rotated_z(chi, rot, b)?;
    if za == 0.0 {
        return Ok(a);
    }
    if (za > 0.0) != (zb > 0.0) {
        return bisect(chi, rot, a, b, za);
    }
    Ok(gamma)
}

fn bisect(chi: &DirichletCharacter, rot: Complex64, mut a: f64, mut b: f64, mut za: f64) -> Result<f64> {
    while b - a > BISECTION_WIDTH {
        let m = 0.5 * (a + b);
        let zm = rotated_z(chi, rot, m)?;
        if zm == 0.0 {
            return Ok(m);
        }
        if (zm > 0.0) == (za > 0.0) {
            a = m;
            za = zm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Sign changes of `Z` on `[lo, hi]` with the given grid step, refined.
fn scan(chi: &DirichletCharacter, rot: Complex64, lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    let n = ((hi - lo) / step).ceil().max(1.0) as usize;
    let h = (hi - lo) / n as f64;
    let mut out = Vec::new();
    let mut t0 = lo;
    let mut z0 = rotated_z(chi, rot, t0)?;
    for i in 1..=n {
        let t1 = if i == n { hi } else { lo + i as f64 * h };
        let z1 = rotated_z(chi, rot, t1)?;
        if z0 == 0.0 {
            out.push(t0);
        } else if (z0 > 0.0) != (z1 > 0.0) && z1 != 0.0 {
            out.push(bisect(chi, rot, t0, t1, z0)?);
        }
        t0 = t1;
        z0 = z1;
    }
    if z0 == 0.0 {
        out.push(t0);
    }
    Ok(out)
}

/// Zeros of `L(s, χ)` on the critical line with `|γ| ≤ T`.
///
/// The list is marked complete when the number found equals the
/// argument-principle count for the same height. If the 0.05 grid misses
/// zeros, the scan is repeated once on a grid four times finer.
pub fn find_zeros(chi: &DirichletCharacter, height: f64) -> Result<ZeroList> {
    check_character(chi, height)?;
    let rot = rotation(chi)?;
    let certified = zero_count_argument_principle(chi, height)?;
    let h = certified.height_used;
    let real = chi.is_real();
    let mut warnings = Vec::new();

    let mut step = GRID_STEP;
    let mut gammas;
    loop {
        gammas = if real {
            let pos: Vec<f64> = scan(chi, rot, 0.0, h, step)?.into_iter().filter(|&g| g > 0.0).collect();
            let mut all: Vec<f64> = pos.iter().rev().map(|g| -g).collect();
            all.extend(pos);
            all
        } else {
            scan(chi, rot, -h, h, step)?
        };
        if gammas.len() as i64 == certified.count || step < GRID_STEP / 2.0 {
            break;
        }
        warnings.push(format!(
            "grid step {step} found {} zeros, argument principle counts {}; refining",
            gammas.len(),
            certified.count
        ));
        step /= 4.0;
    }

    let mut kept = Vec::with_capacity(gammas.len());
    for g in gammas {
        let (l_abs, dl_abs) = validate_zero(chi, g)?;
        if l_abs > ZERO_TOLERANCE {
            warnings.push(format!("dropped gamma = {g}: |L(rho)| = {l_abs:e}"));
            continue;
        }
        if dl_abs < SIMPLICITY_THRESHOLD {
            warnings.push(format!("suspicious zero gamma = {g}: |L'(rho)| = {dl_abs:e}"));
        }
        kept.push(g);
    }
    let complete = kept.len() as i64 == certified.count;
    if !complete {
        warnings.push(format!(
            "incomplete: {} zeros found, argument principle counts {}",
            kept.len(),
            certified.count
        ));
    }
    Ok(ZeroList {
        character: chi.label(),
        gammas: kept,
        height: h,
        provenance: Provenance::Computed,
        complete,
        warnings,
    })
}

fn unit(chi: &DirichletCharacter, s: Complex64) -> Result<Complex64> {
    let (phase, l) = lambda_phase(chi, s)?;
    let v = phase * l;
    let n = v.norm();
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::Contour(format!("Lambda vanishes or overflows at s = {s}")));
    }
    Ok(v / n)
}

/// Principal argument of `b / a` for unit-modulus `a`, `b`.
fn arg_step(a: Complex64, b: Complex64) -> f64 {
    (b * a.conj()).arg()
}

/// Change of `arg Λ` from `a` to `b`, bisecting until each step turns by
/// less than π/4 and agrees with its two halves.
fn track(chi: &DirichletCharacter, a: Complex64, b: Complex64, ua: Complex64, ub: Complex64) -> Result<f64> {
    let direct = arg_step(ua, ub);
    let m = 0.5 * (a + b);
    let um = unit(chi, m)?;
    let d1 = arg_step(ua, um);
    let d2 = arg_step(um, ub);
    if d1.abs() < PI / 4.0 && d2.abs() < PI / 4.0 && (d1 + d2 - direct).abs() < 1e-9 {
        return Ok(d1 + d2);
    }
    if (b - a).norm() < MIN_PIECE {
        return Err(Error::Contour(format!("argument cannot be resolved near s = {m}")));
    }
    Ok(track(chi, a, m, ua, um)? + track(chi, m, b, um, ub)?)
}

fn winding(chi: &DirichletCharacter, h: f64) -> Result<f64> {
    let corners = [
        Complex64::new(-0.5, -h),
        Complex64::new(1.5, -h),
        Complex64::new(1.5, h),
        Complex64::new(-0.5, h),
    ];
    let mut total = 0.0;
    for i in 0..4 {
        let a = corners[i];
        let b = corners[(i + 1) % 4];
        let pieces = ((b - a).norm() / CONTOUR_PIECE).ceil().max(1.0) as usize;
        let mut z0 = a;
        let mut u0 = unit(chi, z0)?;
        for j in 1..=pieces {
            let z1 = if j == pieces {
                b
            } else {
                a + (b - a) * (j as f64 / pieces as f64)
            };
            let u1 = unit(chi, z1)?;
            total += track(chi, z0, z1, u0, u1)?;
            z0 = z1;
            u0 = u1;
        }
    }
    Ok(total / (2.0 * PI))
}

/// Number of zeros of `Λ(s, χ)` in `[−1/2, 3/2] × [−T, T]`, from the
/// winding of `arg Λ` around the rectangle. For `q = 1` the poles of `Λ` at
/// 0 and 1 are added back. `T` is raised by up to 0.01 when a zero lies too
/// close to `±T`.
pub fn zero_count_argument_principle(chi: &DirichletCharacter, height: f64) -> Result<ZeroCount> {
    check_character(chi, height)?;
    let poles = if chi.modulus() == 1 { 2 } else { 0 };
    let mut last_err = None;
    for off in HEIGHT_OFFSETS {
        let h = height + off;
        if h == 0.0 {
            // Degenerate box: empty for every character except ζ, whose
            // poles at 0 and 1 are not interior either.
            if chi.modulus() == 1 {
                continue;
            }
            return Ok(ZeroCount {
                count: 0,
                height_used: 0.0,
            });
        }
        let near_zero = [h, -h].iter().try_fold(false, |acc, &t| {
            Ok::<bool, Error>(acc || l_value(chi, Complex64::new(0.5, t))?.norm() < EDGE_CLEARANCE)
        })?;
        if near_zero {
            last_err = Some(Error::Contour(format!("a zero lies within reach of height {h}")));
            continue;
        }
        match winding(chi, h) {
            Ok(w) => {
                let r = w.round();
                if (w - r).abs() > 0.05 {
                    last_err = Some(Error::Contour(format!("winding number {w} is not an integer")));
                    continue;
                }
                return Ok(ZeroCount {
                    count: r as i64 + poles,
                    height_used: h,
                });
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::Contour("no admissible height".into())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi(q: u64, m: u64) -> DirichletCharacter {
        DirichletCharacter::from_conrey(q, m).unwrap()
    }

    #[test]
    fn first_zeros_mod_4_and_3() {
        let z = find_zeros(&chi(4, 3), 10.0).unwrap();
        assert!(z.complete);
        assert_eq!(z.len(), 2);
        assert!((z.gammas[1] - 6.0209).abs() < 1e-3);
        assert!((z.gammas[0] + z.gammas[1]).abs() < 1e-12);
        for g in &z.gammas {
            assert!(validate_zero(&chi(4, 3), *g).unwrap().0 <= ZERO_TOLERANCE);
        }
        let z = find_zeros(&chi(3, 2), 10.0).unwrap();
        assert!(z.complete);
        let first = z
            .gammas
            .iter()
            .cloned()
            .filter(|g| *g > 0.0)
            .fold(f64::INFINITY, f64::min);
        assert!((first - 8.0397).abs() < 1e-3);
    }

    #[test]
    fn argument_principle_examples() {
        assert_eq!(zero_count_argument_principle(&chi(4, 3), 5.0).unwrap().count, 0);
        assert_eq!(zero_count_argument_principle(&chi(4, 3), 10.0).unwrap().count, 2);
        let c = zero_count_argument_principle(&chi(3, 2), 30.0).unwrap();
        let z = find_zeros(&chi(3, 2), 30.0).unwrap();
        let positive = z.gammas.iter().filter(|g| **g > 0.0).count() as i64;
        assert_eq!(c.count, 2 * positive);
        assert_eq!(c.count % 2, 0);
    }

    #[test]
    fn complex_character_scans_both_sides() {
        let c = chi(5, 2);
        let z = find_zeros(&c, 20.0).unwrap();
        assert!(z.complete, "{:?}", z.warnings);
        z.check_shape(false).unwrap();
        // zeros of the conjugate character are the reflections
        let zb = find_zeros(&c.conjugate(), 20.0).unwrap();
        assert_eq!(z.len(), zb.len());
        for (a, b) in z.gammas.iter().zip(zb.gammas.iter().rev()) {
            assert!((a + b).abs() < 1e-9);
        }
    }

    #[test]
    fn riemann_zeta_first_zero() {
        let z = find_zeros(&DirichletCharacter::trivial(), 15.0).unwrap();
        assert!(z.complete, "{:?}", z.warnings);
        assert_eq!(z.len(), 2);
        assert!((z.gammas[1] - 14.134_725_141_734_69).abs() < 1e-9);
    }

    #[test]
    fn preconditions() {
        assert!(matches!(find_zeros(&chi(8, 5), 10.0), Err(Error::Domain(_))) || chi(8, 5).is_primitive());
        assert!(matches!(find_zeros(&chi(4, 3), 500.0), Err(Error::InvalidArgument(_))));
        let z = find_zeros(&chi(4, 3), 0.1).unwrap();
        assert!(z.is_empty() && z.complete);
    }
}
