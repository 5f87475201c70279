//! The Riesz-type series `P_{k,ℓ,χ}(x) = Σ χ(n) μ(n) n^{−k} exp(−x/n^ℓ)`.
//!
//! Two evaluation routes:
//!
//! * direct: the sum up to `N`, plus the tail `Σ_{n>N}` expanded in powers of
//!   `x` with coefficients `1/L(k+ℓm, χ) − Σ_{n≤N} χ(n)μ(n)n^{−k−ℓm}`;
//! * power: `Σ_m (−x)^m / (m! L(k+ℓm, χ))`, rewritten as
//!   `e^{−x} − Σ_m (−x)^m/m! · (1 − 1/L(k+ℓm, χ))` so the alternating
//!   terms shrink like `(x/2^ℓ)^m/m!`.

use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{mobius_upto, DirichletCharacter, MobiusTable};
use crate::error::{Error, Result};
use crate::lfunc::{l_inverse, l_tail, l_value};
use crate::special::dd::CDd;

/// Smallest direct cut-off.
pub const MIN_TERMS: usize = 10_000;
/// Largest `x` accepted by the power route.
pub const POWER_ROUTE_MAX_X: f64 = 30.0;
/// Largest direct cut-off.
pub const MAX_TERMS: usize = 50_000_000;
const RECONSTRUCTION_TERMS: usize = 10_000;
const MIN_INNER_TERMS: usize = 64;
/// Relative rounding level of `1/L(s) − S_m(N)`.
const CANCELLATION_NOISE: f64 = 4e-16;
const MAX_POWER_TERMS: usize = 10_000;

/// `(k, ℓ, x)` with `k ≥ 1`, `ℓ > 0`, `x ≥ 0`; `x = 0` gives the limit
/// `1/L(k, χ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RieszParams {
    pub k: f64,
    pub ell: f64,
    pub x: f64,
}

impl RieszParams {
    pub fn new(k: f64, ell: f64, x: f64) -> Result<Self> {
        if !(k >= 1.0) || !k.is_finite() {
            return Err(Error::Domain(format!("k = {k}; the series needs k >= 1")));
        }
        if !(ell > 0.0) || !ell.is_finite() {
            return Err(Error::InvalidArgument(format!("ell = {ell} must be positive")));
        }
        if !(x >= 0.0) || !x.is_finite() {
            return Err(Error::InvalidArgument(format!("x = {x} must be non-negative")));
        }
        Ok(RieszParams { k, ell, x })
    }
}

/// A value of `P` with the bound on the part of the tail that was not summed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RieszValue {
    pub value: Complex64,
    pub tail_bound: f64,
    pub terms: usize,
}

/// Direct cut-off `max(10⁴, 100·⌈x^{1/ℓ}⌉)`.
pub fn direct_cutoff(ell: f64, x: f64) -> usize {
    let scale = x.powf(1.0 / ell).ceil();
    let n = (100.0 * scale).max(MIN_TERMS as f64);
    n.min(MAX_TERMS as f64) as usize
}

/// Cached weights `χ(n)μ(n)n^{−k}` and `log n` for one `(χ, k, ℓ)`, reused
/// across evaluations at different `x`.
#[derive(Debug)]
pub struct RieszSeries {
    chi: DirichletCharacter,
    k: f64,
    ell: f64,
    weights: Vec<Complex64>,
    logs: Vec<f64>,
    /// `1/L(k + ℓm, χ)` by `m`.
    inverse_l: Mutex<Vec<Complex64>>,
}

impl RieszSeries {
    /// Weights for `n ≤ n_max`.
    pub fn new(chi: &DirichletCharacter, k: f64, ell: f64, n_max: usize) -> Result<Self> {
        RieszParams::new(k, ell, 0.0)?;
        if n_max == 0 || n_max > MAX_TERMS {
            return Err(Error::Resource(format!("cut-off {n_max} outside 1..={MAX_TERMS}")));
        }
        let mu: Arc<MobiusTable> = mobius_upto(n_max);
        let mut weights = Vec::with_capacity(n_max);
        let mut logs = Vec::with_capacity(n_max);
        for n in 1..=n_max {
            let lg = (n as f64).ln();
            logs.push(lg);
            let m = mu.get(n);
            let c = chi.value_u(n as u64);
            weights.push(if m == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                c * (m as f64 * (n as f64).powf(-k))
            });
        }
        Ok(RieszSeries {
            chi: chi.clone(),
            k,
            ell,
            weights,
            logs,
            inverse_l: Mutex::new(Vec::new()),
        })
    }

    pub fn n_max(&self) -> usize {
        self.weights.len()
    }

    /// `χ(n)μ(n) n^{−k} e^{−x/n^ℓ}` for `1 ≤ n ≤ n_max`.
    pub(crate) fn term(&self, n: usize, x: f64) -> Complex64 {
        let w = self.weights[n - 1];
        if w == Complex64::new(0.0, 0.0) {
            return w;
        }
        w * (-x * (-self.ell * self.logs[n - 1]).exp()).exp()
    }

    /// `1/L(k + ℓm, χ)`, cached.
    pub fn inverse_l_at(&self, m: usize) -> Result<Complex64> {
        self.inverse_l(m)
    }

    fn inverse_l(&self, m: usize) -> Result<Complex64> {
        let mut cache = self.inverse_l.lock().unwrap_or_else(|e| e.into_inner());
        while cache.len() <= m {
            let s = self.k + self.ell * cache.len() as f64;
            cache.push(l_inverse(&self.chi, Complex64::new(s, 0.0))?);
        }
        Ok(cache[m])
    }

    /// `P(x)` summed to `n_cut` with the power-expanded tail correction.
    pub fn eval(&self, x: f64, n_cut: usize) -> Result<RieszValue> {
        if !(x >= 0.0) || !x.is_finite() {
            return Err(Error::InvalidArgument(format!("x = {x} must be non-negative")));
        }
        let n_cut = n_cut.min(self.n_max());
        let mut value = CDd::ZERO;
        for n in 0..n_cut {
            let w = self.weights[n];
            if w == Complex64::new(0.0, 0.0) {
                continue;
            }
            let e = (-x * (-self.ell * self.logs[n]).exp()).exp();
            value = value + CDd::from_c64(w * e);
        }
        let value = value.to_c64();
        let (corr, bound) = self.tail_correction(x, n_cut)?;
        Ok(RieszValue {
            value: value + corr,
            tail_bound: bound,
            terms: n_cut,
        })
    }

    /// `Σ_m (−x)^m/m! (1/L(k+ℓm) − S_m(N))` over the terms that rise above
    /// rounding, and the bound on the ones dropped.
    pub(crate) fn tail_correction(&self, x: f64, n_cut: usize) -> Result<(Complex64, f64)> {
        let nf = n_cut as f64;
        let ln_n = nf.ln();
        let mut corr = Complex64::new(0.0, 0.0);
        let mut bound = 0.0;
        // coefficient x^m/m! is carried in log form
        let mut log_coef = 0.0;
        let mut m = 0usize;
        loop {
            let s = self.k + self.ell * m as f64;
            if m > 0 {
                log_coef += x.ln() - (m as f64).ln();
            }
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            // Σ_{n>N} n^{−s} ≤ N^{1−s}/(s−1)
            let tail_size = if s > 1.0 {
                ((1.0 - s) * ln_n).exp() / (s - 1.0)
            } else {
                f64::INFINITY
            };
            let weighted = if tail_size.is_finite() {
                (log_coef + tail_size.ln()).exp()
            } else {
                f64::INFINITY
            };
            if m > 0 && weighted < 1e-22 && (x / nf.powf(self.ell)) < 0.5 {
                bound += weighted * 2.0;
                break;
            }
            if m > 200 {
                return Err(Error::Precision(format!(
                    "tail expansion did not settle at x = {x}, N = {n_cut}"
                )));
            }
            let c = self.inverse_l(m)?;
            if tail_size < CANCELLATION_NOISE * c.norm().max(1.0) {
                bound += weighted;
            } else {
                let mut partial = CDd::ZERO;
                let e = self.ell * m as f64;
                for n in 0..n_cut {
                    let w = self.weights[n];
                    if w == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    partial = partial + CDd::from_c64(w * ((n + 1) as f64).powf(-e));
                }
                corr += (CDd::from_c64(c) - partial).to_c64() * (sign * log_coef.exp());
            }
            m += 1;
        }
        Ok((corr, bound))
    }
}

/// Direct route with the cut-off of [`direct_cutoff`].
pub fn p_series_direct(chi: &DirichletCharacter, params: RieszParams) -> Result<RieszValue> {
    let params = RieszParams::new(params.k, params.ell, params.x)?;
    let n = direct_cutoff(params.ell, params.x);
    RieszSeries::new(chi, params.k, params.ell, n)?.eval(params.x, n)
}

/// Direct route with an explicit cut-off.
pub fn p_series_direct_with_cutoff(chi: &DirichletCharacter, params: RieszParams, n_cut: usize) -> Result<RieszValue> {
    let params = RieszParams::new(params.k, params.ell, params.x)?;
    RieszSeries::new(chi, params.k, params.ell, n_cut)?.eval(params.x, n_cut)
}

/// `1 − 1/L(s, χ)` with relative accuracy when `L(s) ≈ 1`.
fn one_minus_inverse(chi: &DirichletCharacter, s: f64) -> Result<Complex64> {
    let sc = Complex64::new(s, 0.0);
    if chi.is_principal() && s == 1.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let l = l_value(chi, sc)?;
    let tail = if s > 2.0 { l_tail(chi, sc, 2)? } else { l - 1.0 };
    Ok(tail / l)
}

/// Power-series route, `x ≤ 30`.
pub fn p_series_power(chi: &DirichletCharacter, params: RieszParams) -> Result<Complex64> {
    let params = RieszParams::new(params.k, params.ell, params.x)?;
    let x = params.x;
    if x > POWER_ROUTE_MAX_X {
        return Err(Error::Precision(format!(
            "power series needs x <= {POWER_ROUTE_MAX_X}; got {x}"
        )));
    }
    if x == 0.0 {
        return l_inverse(chi, Complex64::new(params.k, 0.0));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut coef = 1.0; // (−x)^m / m!
    let mut peak = 0f64;
    for m in 0..MAX_POWER_TERMS {
        if m > 0 {
            coef *= -x / m as f64;
        }
        let s = params.k + params.ell * m as f64;
        let d = one_minus_inverse(chi, s)?;
        let term = d * coef;
        sum += term;
        peak = peak.max(sum.norm()).max(term.norm());
        if m as f64 > x && term.norm() < 1e-16 * peak.max(1e-300) {
            return Ok((-x).exp() - sum);
        }
        if term.norm() == 0.0 && m as f64 > x {
            return Ok((-x).exp() - sum);
        }
    }
    Err(Error::Precision("power series did not converge".into()))
}

/// `|Σ_{n≥1} χ(n) n^{−k} P(x/n^ℓ) − e^{−x}|`: the sum up to `10⁴` uses the
/// direct route with an inner cut-off `max(64, 100⌈y^{1/ℓ}⌉)` at
/// `y = x/n^ℓ`; beyond `10⁴` the sum is `Σ_m (−x)^m/m! · L_tail(k+ℓm)/L(k+ℓm)`.
pub fn exp_reconstruction_residual(chi: &DirichletCharacter, k: f64, ell: f64, x: f64) -> Result<f64> {
    RieszParams::new(k, ell, x)?;
    if !(x > 0.0 && x <= POWER_ROUTE_MAX_X) {
        return Err(Error::InvalidArgument(format!(
            "x = {x} outside (0, {POWER_ROUTE_MAX_X}]"
        )));
    }
    let inner_max = direct_cutoff(ell, x).max(MIN_INNER_TERMS);
    let series = RieszSeries::new(chi, k, ell, inner_max)?;
    let mut total = Complex64::new(0.0, 0.0);
    for n in 1..=RECONSTRUCTION_TERMS {
        let c = chi.value_u(n as u64);
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let nf = n as f64;
        let y = x / nf.powf(ell);
        let cut = ((100.0 * y.powf(1.0 / ell).ceil()) as usize).max(MIN_INNER_TERMS);
        let p = series.eval(y, cut)?.value;
        total += c * (-k * nf.ln()).exp() * p;
    }
    // Σ_{n>N} χ(n) n^{−k} P(x/n^ℓ)
    let start = RECONSTRUCTION_TERMS as u64 + 1;
    let mut outer = Complex64::new(0.0, 0.0);
    let mut coef = 1.0;
    for m in 0..200 {
        if m > 0 {
            coef *= -x / m as f64;
        }
        let s = k + ell * m as f64;
        let inv = series.inverse_l(m)?;
        if inv != Complex64::new(0.0, 0.0) {
            let t = l_tail(chi, Complex64::new(s, 0.0), start)?;
            let term = inv * t * coef;
            outer += term;
            let size_bound = (start as f64).powf(1.0 - s) / (s - 1.0).max(1e-300) * coef.abs();
            if m as f64 > x && size_bound < 1e-20 {
                break;
            }
        }
    }
    Ok((total + outer - (-x).exp()).norm())
}

/// Log-log fit of the decay of `|P|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub character: (u64, u64),
    pub k: f64,
    pub ell: f64,
    pub x_grid: Vec<f64>,
    pub abs_p: Vec<f64>,
    /// `max_{j ≥ i} |P(x_j)|`.
    pub envelope: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub residual_norm: f64,
    /// `−k/ℓ + 1/(2ℓ)`.
    pub predicted_slope: f64,
}

/// `−k/ℓ + 1/(2ℓ)`.
pub fn predicted_decay_slope(k: f64, ell: f64) -> f64 {
    -k / ell + 0.5 / ell
}

/// `points` geometrically spaced values from `start` to `stop` inclusive.
pub fn geometric_grid(start: f64, stop: f64, points: usize) -> Result<Vec<f64>> {
    if !(start > 0.0 && stop > start) || points < 2 {
        return Err(Error::InvalidArgument(
            "geometric grid needs 0 < start < stop and at least 2 points".into(),
        ));
    }
    let r = (stop / start).ln() / (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            if i == points - 1 {
                stop
            } else {
                start * (r * i as f64).exp()
            }
        })
        .collect())
}

fn check_decay_grid(x_grid: &[f64]) -> Result<()> {
    if x_grid.len() < 8 {
        return Err(Error::InvalidArgument(format!(
            "decay grid has {} points; at least 8 needed",
            x_grid.len()
        )));
    }
    if x_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("decay grid must be strictly increasing".into()));
    }
    if x_grid[0] < 10.0 {
        return Err(Error::InvalidArgument("decay grid must start at x >= 10".into()));
    }
    if x_grid[x_grid.len() - 1] / x_grid[0] < 1e3 * (1.0 - 1e-12) {
        return Err(Error::InvalidArgument(
            "decay grid must span at least three decades".into(),
        ));
    }
    let r0 = x_grid[1] / x_grid[0];
    if x_grid.windows(2).any(|w| ((w[1] / w[0]) / r0 - 1.0).abs() > 1e-6) {
        return Err(Error::InvalidArgument("decay grid must be geometric".into()));
    }
    Ok(())
}

/// Least-squares slope of `log env(x)` against `log x`.
pub fn decay_fit(chi: &DirichletCharacter, k: f64, ell: f64, x_grid: &[f64]) -> Result<DecayFit> {
    RieszParams::new(k, ell, 1.0)?;
    check_decay_grid(x_grid)?;
    let n_max = direct_cutoff(ell, x_grid[x_grid.len() - 1]);
    let series = RieszSeries::new(chi, k, ell, n_max)?;
    let mut abs_p = Vec::with_capacity(x_grid.len());
    for &x in x_grid {
        abs_p.push(series.eval(x, direct_cutoff(ell, x))?.value.norm());
    }
    let mut envelope = abs_p.clone();
    for i in (0..envelope.len().saturating_sub(1)).rev() {
        envelope[i] = envelope[i].max(envelope[i + 1]);
    }
    let pts: Vec<(f64, f64)> = x_grid
        .iter()
        .zip(&envelope)
        .filter(|(_, e)| **e > 0.0)
        .map(|(x, e)| (x.ln(), e.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::Underflow("|P| underflows on the decay grid".into()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual_norm = pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(DecayFit {
        character: chi.label(),
        k,
        ell,
        x_grid: x_grid.to_vec(),
        abs_p,
        envelope,
        slope,
        intercept,
        residual_norm,
        predicted_slope: predicted_decay_slope(k, ell),
    })
}
