//! Finite diagnostics for the decay criterion: the summatory function
//! `S(x) = Σ_{n≤x} χ(n)μ(n)`, tail sums `T(m; n)`, Abel–Euler partial
//! summation, and the split of `P_{k,ℓ,χ}(x^ℓ)` into `n < m` and `n ≥ m`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{mobius_upto, DirichletCharacter};
use crate::error::{Error, Result};
use crate::riesz::{direct_cutoff, RieszParams, RieszSeries};
use crate::special::dd::CDd;

/// Largest argument of the summatory function.
pub const SIEVE_LIMIT: u64 = 100_000_000;
/// Default `ε` in the `n < m` / `n ≥ m` split.
pub const DEFAULT_SPLIT_EPSILON: f64 = 0.1;

fn check_limit(n: u64) -> Result<()> {
    if n > SIEVE_LIMIT {
        return Err(Error::Resource(format!("{n} exceeds the sieve limit {SIEVE_LIMIT}")));
    }
    Ok(())
}

/// `S(x) = Σ_{1≤n≤x} χ(n)μ(n)`.
pub fn summatory_s(chi: &DirichletCharacter, x: f64) -> Result<Complex64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::InvalidArgument(format!("x = {x} must be non-negative")));
    }
    let n = x.floor() as u64;
    check_limit(n)?;
    if n == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mu = mobius_upto(n as usize);
    let mut s = Complex64::new(0.0, 0.0);
    for j in 1..=n as usize {
        let m = mu.get(j);
        if m != 0 {
            s += chi.value_u(j as u64) * m as f64;
        }
    }
    Ok(s)
}

/// `S` on a grid, with `|S(x)|/x^{1/2+ε}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummatoryTrace {
    pub character: (u64, u64),
    pub epsilon: f64,
    pub x_values: Vec<f64>,
    pub s_values: Vec<Complex64>,
    pub normalized: Vec<f64>,
}

impl SummatoryTrace {
    /// Least-squares slope of `log(normalized)` against `log x` over the
    /// points with `x ≥ 1` and nonzero `S`.
    pub fn normalized_slope(&self) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .x_values
            .iter()
            .zip(&self.normalized)
            .filter(|(x, v)| **x >= 1.0 && **v > 0.0)
            .map(|(x, v)| (x.ln(), v.ln()))
            .collect();
        least_squares_slope(&pts)
    }
}

fn least_squares_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// `S(x)` on an increasing grid in a single pass.
pub fn summatory_trace(chi: &DirichletCharacter, x_values: &[f64], epsilon: f64) -> Result<SummatoryTrace> {
    if x_values.windows(2).any(|w| !(w[1] >= w[0])) || x_values.iter().any(|x| !(*x >= 0.0)) {
        return Err(Error::InvalidArgument(
            "x values must be non-negative and non-decreasing".into(),
        ));
    }
    let top = x_values.last().map_or(0, |x| x.floor() as u64);
    check_limit(top)?;
    let mu = mobius_upto(top.max(1) as usize);
    let mut s = Complex64::new(0.0, 0.0);
    let mut j = 0usize;
    let mut s_values = Vec::with_capacity(x_values.len());
    let mut normalized = Vec::with_capacity(x_values.len());
    for &x in x_values {
        let n = x.floor() as usize;
        while j < n {
            j += 1;
            let m = mu.get(j);
            if m != 0 {
                s += chi.value_u(j as u64) * m as f64;
            }
        }
        s_values.push(s);
        normalized.push(if x > 0.0 { s.norm() / x.powf(0.5 + epsilon) } else { 0.0 });
    }
    Ok(SummatoryTrace {
        character: chi.label(),
        epsilon,
        x_values: x_values.to_vec(),
        s_values,
        normalized,
    })
}

/// `A(x)f(x) − ∫₁ˣ A(t) f′(t) dt` with `A(t) = Σ_{n≤t} a_n`; `a[0]` is
/// `a_1`. `A` is constant on each `[n, n+1)`, so the integral is
/// `Σ A(n)(f(n+1) − f(n))` and only values of `f` are needed.
pub fn euler_summation<F>(a: &[Complex64], f: F, x: f64) -> Result<Complex64>
where
    F: Fn(f64) -> f64,
{
    if !(x >= 1.0) || !x.is_finite() {
        return Err(Error::InvalidArgument(format!("x = {x} must be at least 1")));
    }
    let top = x.floor() as usize;
    if top > a.len() {
        return Err(Error::InvalidArgument(format!(
            "sequence has {} terms but x = {x} needs {top}",
            a.len()
        )));
    }
    let mut big_a = CDd::ZERO;
    let mut integral = CDd::ZERO;
    let mut f_n = f(1.0);
    for n in 1..=top {
        big_a = big_a + CDd::from_c64(a[n - 1]);
        let upper = if n == top { x } else { (n + 1) as f64 };
        let f_up = f(upper);
        let a_now = big_a.to_c64();
        integral = integral + CDd::from_c64(a_now * (f_up - f_n));
        f_n = f_up;
    }
    Ok((CDd::from_c64(big_a.to_c64() * f(x)) - integral).to_c64())
}

/// `T(m; n) = Σ_{j=m}^{n} χ(j)μ(j) j^{−k}`, directly and by partial summation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailSum {
    pub direct: Complex64,
    pub euler: Complex64,
    pub difference: f64,
}

pub fn tail_sum_t(chi: &DirichletCharacter, k: f64, m: u64, n: u64) -> Result<TailSum> {
    if m == 0 || m > n {
        return Err(Error::InvalidRange(format!("need 1 <= m <= n; got m = {m}, n = {n}")));
    }
    check_limit(n)?;
    if !k.is_finite() {
        return Err(Error::InvalidArgument(format!("k = {k} must be finite")));
    }
    let mu = mobius_upto(n as usize);
    let a: Vec<Complex64> = (m..=n)
        .map(|j| {
            let mj = mu.get(j as usize);
            if mj == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                chi.value_u(j) * mj as f64
            }
        })
        .collect();
    let mut direct = CDd::ZERO;
    for (i, aj) in a.iter().enumerate() {
        direct = direct + CDd::from_c64(aj * ((m + i as u64) as f64).powf(-k));
    }
    let direct = direct.to_c64();
    let shift = (m - 1) as f64;
    let euler = euler_summation(&a, |t| (t + shift).powf(-k), (n - m + 1) as f64)?;
    Ok(TailSum {
        direct,
        euler,
        difference: (direct - euler).norm(),
    })
}

/// `P_{k,ℓ,χ}(x^ℓ)` split at `m = ⌊x^{1−ε}⌋ + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundSplit {
    pub x: f64,
    pub epsilon: f64,
    pub m_cut: u64,
    /// `Σ_{n<m}`.
    pub y1: Complex64,
    /// `Σ_{n≥m}`, including the expanded tail beyond the direct cut-off.
    pub y2: Complex64,
    /// `P(x^ℓ)` by the direct route.
    pub p_direct: Complex64,
    /// `x^{1−ε} exp(−x^{ℓε})`.
    pub y1_envelope: f64,
    /// `x^{1/2−k+ε}`.
    pub y2_scale: f64,
    /// `|Y₂| / x^{1/2−k+ε}`.
    pub y2_constant: f64,
}

impl BoundSplit {
    pub fn additivity_error(&self) -> f64 {
        (self.y1 + self.y2 - self.p_direct).norm()
    }
}

pub fn bound_split_diagnostic(chi: &DirichletCharacter, k: f64, ell: f64, x: f64, epsilon: f64) -> Result<BoundSplit> {
    if !(x >= 10.0) || !x.is_finite() {
        return Err(Error::InvalidArgument(format!("x = {x} must be at least 10")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!("epsilon = {epsilon} outside (0, 1)")));
    }
    let big_x = x.powf(ell);
    RieszParams::new(k, ell, big_x)?;
    let m_cut = x.powf(1.0 - epsilon).floor() as u64 + 1;
    let n_cut = direct_cutoff(ell, big_x).max(m_cut as usize);
    let series = RieszSeries::new(chi, k, ell, n_cut)?;
    let mut y1 = CDd::ZERO;
    let mut y2 = CDd::ZERO;
    for n in 1..=n_cut {
        let t = CDd::from_c64(series.term(n, big_x));
        if (n as u64) < m_cut {
            y1 = y1 + t;
        } else {
            y2 = y2 + t;
        }
    }
    let (corr, _) = series.tail_correction(big_x, n_cut)?;
    let y1 = y1.to_c64();
    let y2 = y2.to_c64() + corr;
    let p_direct = series.eval(big_x, n_cut)?.value;
    let y2_scale = x.powf(0.5 - k + epsilon);
    Ok(BoundSplit {
        x,
        epsilon,
        m_cut,
        y1,
        y2,
        p_direct,
        y1_envelope: x.powf(1.0 - epsilon) * (-x.powf(ell * epsilon)).exp(),
        y2_scale,
        y2_constant: y2.norm() / y2_scale,
    })
}
