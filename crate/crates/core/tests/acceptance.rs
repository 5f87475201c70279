//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use riesz_core::arith::{characters_mod, mobius, root_of_unity, DirichletCharacter};
use riesz_core::criteria::{summatory_s, tail_sum_t};
use riesz_core::identity::{
    dixit_specialization_residual_with_zeros, j_integral_oracle, mellin_check, verify_identity_with_zeros,
    zeta_identity_residual, XnqScale,
};
use riesz_core::lfunc::{find_zeros, functional_equation_residual, l_value, zero_count_argument_principle};
use riesz_core::riesz::{
    decay_fit, exp_reconstruction_residual, geometric_grid, p_series_direct, p_series_power, RieszParams,
};

fn chi(q: u64, m: u64) -> DirichletCharacter {
    DirichletCharacter::from_conrey(q, m).unwrap()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn check(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

type Criterion = fn() -> Result<Outcome, riesz_core::Error>;

fn identity_sweep() -> Result<Outcome, riesz_core::Error> {
    let start = Instant::now();
    let mut worst = 0f64;
    let mut all_within = true;
    for c in [chi(4, 3), chi(3, 2)] {
        let zeros = find_zeros(&c, 50.0)?;
        if !zeros.complete {
            return Ok(check(
                false,
                format!("zeros of {:?} to T = 50 not certified", c.label()),
            ));
        }
        for k in [1.0, 1.5, 2.0, 3.0] {
            for x in [0.5, 1.0, 2.0, 5.0] {
                let r = verify_identity_with_zeros(&c, k, x, &zeros)?;
                worst = worst.max(r.residual);
                all_within &= r.residual <= 1e-8;
            }
        }
    }
    let t = start.elapsed();
    Ok(check(
        all_within && t < Duration::from_secs(120),
        format!(
            "worst residual {worst:.2e} (tol 1e-8), {:.1}s (limit 120s)",
            t.as_secs_f64()
        ),
    ))
}

fn dixit() -> Result<Outcome, riesz_core::Error> {
    let c = chi(4, 3);
    let zeros = find_zeros(&c, 50.0)?;
    let mut worst = 0f64;
    for alpha in [0.5, 1.0, 2.0] {
        worst = worst.max(dixit_specialization_residual_with_zeros(&c, alpha, &zeros, &zeros)?);
    }
    let at_one = dixit_specialization_residual_with_zeros(&c, 1.0, &zeros, &zeros)?;
    Ok(check(
        worst <= 1e-8 && at_one <= 1e-12,
        format!("worst over alpha {worst:.2e} (tol 1e-8), alpha = 1 {at_one:.2e} (tol 1e-12)"),
    ))
}

fn q1_reduction() -> Result<Outcome, riesz_core::Error> {
    let zeta = DirichletCharacter::trivial();
    let zeros = find_zeros(&zeta, 50.0)?;
    if !zeros.complete {
        return Ok(check(false, "zeta zeros to T = 50 not certified".into()));
    }
    let mut worst_direct = 0f64;
    let mut worst_general = 0f64;
    for k in [2.0, 3.0] {
        for x in [1.0, 2.0] {
            worst_direct = worst_direct.max(zeta_identity_residual(k, x, &zeros)?);
            let r = verify_identity_with_zeros(&zeta, k, x / PI.sqrt(), &zeros)?;
            worst_general = worst_general.max(r.residual);
        }
    }
    Ok(check(
        worst_direct <= 1e-8 && worst_general <= 1e-8,
        format!(
            "{} zeros; q = 1 form {worst_direct:.2e}, general identity at x/sqrt(pi) {worst_general:.2e} (tol 1e-8)",
            zeros.len()
        ),
    ))
}

fn mellin() -> Result<Outcome, riesz_core::Error> {
    let cases = [
        (
            chi(4, 3),
            2.0,
            2.0,
            [c(0.25, 0.0), c(0.5, 0.0), c(0.75, 0.0), c(0.5, 2.0), c(0.25, -1.0)],
        ),
        (
            chi(3, 2),
            3.0,
            1.0,
            [c(-1.0, 0.0), c(-0.5, 0.0), c(0.25, 0.0), c(0.5, 0.0), c(0.5, 2.0)],
        ),
    ];
    let mut worst = 0f64;
    for (ch, k, ell, points) in &cases {
        for &s in points {
            worst = worst.max(mellin_check(ch, *k, *ell, s)?.relative_deviation);
        }
    }
    Ok(check(
        worst <= 1e-6,
        format!("worst relative deviation {worst:.2e} over 10 points (tol 1e-6)"),
    ))
}

fn reconstruction() -> Result<Outcome, riesz_core::Error> {
    let mut worst = 0f64;
    for ch in [chi(3, 2), chi(4, 3), chi(5, 2)] {
        for k in [1.0, 1.5, 2.0, 3.0] {
            for ell in [1.0, 2.0, 4.0] {
                for x in [0.1, 1.0, 5.0, 20.0] {
                    worst = worst.max(exp_reconstruction_residual(&ch, k, ell, x)?);
                }
            }
        }
    }
    Ok(check(
        worst <= 1e-8,
        format!("worst residual {worst:.2e} over 144 points (tol 1e-8)"),
    ))
}

fn contour_oracle() -> Result<Outcome, riesz_core::Error> {
    let mut worst = 0f64;
    for k in [2.0, 3.0] {
        for a in [0u8, 1] {
            for big_x in [5.0, 10.0, 100.0] {
                let scale = XnqScale::new(1, 1, (big_x * PI).sqrt())?;
                worst = worst.max(j_integral_oracle(scale, k, a, 0.5)?.difference);
            }
        }
    }
    Ok(check(
        worst <= 1e-8,
        format!("worst |quadrature - closed form| {worst:.2e} (tol 1e-8)"),
    ))
}

fn functional_equation() -> Result<Outcome, riesz_core::Error> {
    let mut rng = StdRng::seed_from_u64(20_240_917);
    let mut worst = 0f64;
    let mut worst_at = (0, 0, c(0.0, 0.0));
    let mut done = 0;
    while done < 100 {
        let q = rng.gen_range(1..=100u64);
        let prim: Vec<DirichletCharacter> = characters_mod(q)?.into_iter().filter(|x| x.is_primitive()).collect();
        if prim.is_empty() {
            continue;
        }
        let ch = &prim[rng.gen_range(0..prim.len())];
        let s = c(rng.gen_range(0.01..0.99), rng.gen_range(-40.0..40.0));
        let r = functional_equation_residual(ch, s)?;
        if r > worst {
            worst = r;
            worst_at = (ch.modulus(), ch.conrey_index(), s);
        }
        done += 1;
    }
    Ok(check(
        worst <= 1e-9,
        format!(
            "worst residual {worst:.2e} at chi({}, {}), s = {} (tol 1e-9)",
            worst_at.0, worst_at.1, worst_at.2
        ),
    ))
}

fn zero_machinery() -> Result<Outcome, riesz_core::Error> {
    let mut ok = true;
    let mut parts = Vec::new();
    let mut worst_l = 0f64;
    let mut slowest = 0f64;
    for (q, m) in [(3, 2), (4, 3), (5, 2), (5, 3), (5, 4)] {
        let ch = chi(q, m);
        let start = Instant::now();
        let zeros = find_zeros(&ch, 50.0)?;
        let count = zero_count_argument_principle(&ch, 50.0)?;
        let elapsed = start.elapsed().as_secs_f64();
        for &g in &zeros.gammas {
            let l = l_value(&ch, c(0.5, g))?.norm();
            worst_l = worst_l.max(l);
            ok &= l <= 1e-8;
        }
        ok &= zeros.len() as i64 == count.count && zeros.complete && elapsed < 60.0;
        slowest = slowest.max(elapsed);
        parts.push(format!("({q},{m}) {}/{}", zeros.len(), count.count));
    }
    Ok(check(
        ok,
        format!(
            "found/counted {}; worst |L(1/2+i gamma)| {worst_l:.2e} (tol 1e-8); slowest {slowest:.1}s (limit 60s)",
            parts.join(" ")
        ),
    ))
}

fn decay() -> Result<Outcome, riesz_core::Error> {
    let ch = chi(4, 3);
    let grid = geometric_grid(1e2, 1e6, 41)?;
    let mut ok = true;
    let mut parts = Vec::new();
    for (k, ell) in [(2.0, 2.0), (1.0, 2.0)] {
        let fit = decay_fit(&ch, k, ell, &grid)?;
        ok &= fit.slope <= fit.predicted_slope + 0.15;
        parts.push(format!(
            "(k,l)=({k},{ell}) slope {:.3} vs predicted {:.3}",
            fit.slope, fit.predicted_slope
        ));
    }
    Ok(check(ok, format!("{} (margin +0.15)", parts.join(", "))))
}

/// `Σ_{n≤N} χ(n)μ(n)` from integer counts per exponent class.
fn exact_summatory(ch: &DirichletCharacter, n: u64) -> Complex64 {
    let den = ch.exponent(1).unwrap().1;
    let mut counts = vec![0i64; den as usize];
    for j in 1..=n {
        let mu = mobius(j);
        if mu != 0 {
            if let Some((num, _)) = ch.exponent(j as i64) {
                counts[num as usize] += mu as i64;
            }
        }
    }
    counts
        .iter()
        .enumerate()
        .map(|(e, &cnt)| root_of_unity(e as u64, den) * cnt as f64)
        .sum()
}

fn dual_routes() -> Result<Outcome, riesz_core::Error> {
    let start = Instant::now();
    let chars = [chi(3, 2), chi(4, 3), chi(5, 2)];
    let mut route = 0f64;
    for ch in &chars {
        for k in [1.0, 1.5, 2.0, 3.0] {
            for ell in [1.0, 2.0, 4.0] {
                for x in [0.1, 1.0, 5.0, 20.0] {
                    let p = RieszParams::new(k, ell, x)?;
                    route = route.max((p_series_direct(ch, p)?.value - p_series_power(ch, p)?).norm());
                }
            }
        }
    }
    let mut tail = 0f64;
    for ch in &chars {
        for k in [1.0, 2.0, 3.0] {
            for (m, n) in [(1, 1_000), (10, 100_000), (500, 200_000)] {
                tail = tail.max(tail_sum_t(ch, k, m, n)?.difference);
            }
        }
    }
    let mut summatory = 0f64;
    for ch in &chars {
        for n in [1_000u64, 100_000, 1_000_000] {
            summatory = summatory.max((summatory_s(ch, n as f64)? - exact_summatory(ch, n)).norm());
        }
    }
    let t = start.elapsed();
    Ok(check(
        route <= 1e-10 && tail <= 1e-12 && summatory <= 1e-9 && t < Duration::from_secs(60),
        format!(
            "direct/power {route:.2e} (tol 1e-10), T direct/Euler {tail:.2e} (tol 1e-12), S sieve/exact {summatory:.2e}; {:.1}s (limit 60s)",
            t.as_secs_f64()
        ),
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 10] = [
        ("identity sweep", identity_sweep),
        ("odd k = 2 specialization", dixit),
        ("q = 1 reduction", q1_reduction),
        ("Mellin transform", mellin),
        ("exp reconstruction", reconstruction),
        ("contour oracle", contour_oracle),
        ("functional equation", functional_equation),
        ("zero machinery", zero_machinery),
        ("decay exponent", decay),
        ("dual routes", dual_routes),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run().unwrap_or_else(|e| check(false, format!("error: {e}")));
        let verdict = if outcome.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {verdict} {name}: {} [{:.1}s]",
            i + 1,
            outcome.detail,
            start.elapsed().as_secs_f64()
        );
        if !outcome.passed {
            failed += 1;
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
