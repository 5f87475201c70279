//! `riesz`: verification runs for the character-twisted Riesz series.
//!
//! Exit codes: 0 pass, 2 usage or precondition failure, 3 precision or
//! certification failure.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use riesz_core::arith::DirichletCharacter;
use riesz_core::identity::{mellin_check, verify_identity_with_zeros, IdentityReport, MellinCheck, IDENTITY_TOLERANCE};
use riesz_core::lfunc::{find_zeros, ZeroList};
use riesz_core::riesz::{decay_fit, geometric_grid, DecayFit, RieszParams};
use riesz_core::zerodata::{cache_path, cached_zeros, convert_lmfdb, save_zeros};
use riesz_core::Error;

const DEFAULT_ZERO_DIR: &str = ".riesz-zeros";
const DEFAULT_MELLIN_TOLERANCE: f64 = 1e-6;
const DECAY_SLOPE_MARGIN: f64 = 0.15;
const DEFAULT_MELLIN_POINTS: [(f64, f64); 5] = [(0.25, 0.0), (0.5, 0.0), (0.75, 0.0), (0.5, 2.0), (0.25, -1.0)];

#[derive(Parser, Debug)]
#[command(
    name = "riesz",
    version,
    about = "Verification runs for character-twisted Riesz series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the series identity at one (χ, k, x) against zeros up to T
    Verify(VerifyArgs),
    /// Tabulate |P| on a geometric grid and fit its decay exponent
    Decay(DecayArgs),
    /// Find and certify zeros on the critical line up to T
    Zeros(ZerosArgs),
    /// Compare the Mellin transform of P with its closed form
    Mellin(MellinArgs),
    /// Convert an LMFDB one-ordinate-per-line export into a zero file
    ConvertLmfdb(ConvertArgs),
}

#[derive(Args, Debug, Clone, Copy)]
struct CharacterArgs {
    /// Modulus of the character
    #[arg(long)]
    q: u64,
    /// Conrey index of the character
    #[arg(long)]
    conrey: u64,
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Table,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    chi: CharacterArgs,
    #[arg(long)]
    k: f64,
    #[arg(long)]
    x: f64,
    /// Zero height
    #[arg(long = "T", default_value_t = 50.0)]
    height: f64,
    /// Compute and cache the zeros when no zero file is present
    #[arg(long)]
    compute_zeros: bool,
    #[arg(long, default_value = DEFAULT_ZERO_DIR)]
    zeros_dir: PathBuf,
    /// Residual tolerance; may only be stricter than 1e-8
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct DecayArgs {
    #[command(flatten)]
    chi: CharacterArgs,
    #[arg(long)]
    k: f64,
    #[arg(long)]
    ell: f64,
    #[arg(long, default_value_t = 1e2)]
    start: f64,
    #[arg(long, default_value_t = 1e6)]
    stop: f64,
    #[arg(long, default_value_t = 41)]
    points: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct ZerosArgs {
    #[command(flatten)]
    chi: CharacterArgs,
    /// Zero height
    #[arg(long = "T")]
    height: f64,
    #[arg(long, default_value = DEFAULT_ZERO_DIR)]
    zeros_dir: PathBuf,
    /// Zero file path; defaults to the cache entry in --zeros-dir
    #[arg(long)]
    file: Option<PathBuf>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct MellinArgs {
    #[command(flatten)]
    chi: CharacterArgs,
    #[arg(long, default_value_t = 2.0)]
    k: f64,
    #[arg(long, default_value_t = 2.0)]
    ell: f64,
    /// Points such as 0.5, -0.25, 0.5+2i; defaults to a fixed five-point sweep
    #[arg(long, value_delimiter = ',', value_parser = parse_complex, allow_hyphen_values = true)]
    s: Vec<Complex64>,
    /// Relative deviation tolerance; may only be stricter than 1e-6
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct ConvertArgs {
    #[command(flatten)]
    chi: CharacterArgs,
    /// LMFDB export, one ordinate per line
    #[arg(long)]
    input: PathBuf,
    /// Zero height; defaults to the largest ordinate
    #[arg(long = "T")]
    height: Option<f64>,
    #[arg(long, default_value = DEFAULT_ZERO_DIR)]
    zeros_dir: PathBuf,
    /// Zero file path; defaults to the cache entry in --zeros-dir
    #[arg(long)]
    file: Option<PathBuf>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Precision(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_)
            | Error::Domain(_)
            | Error::Pole { .. }
            | Error::InvalidContour(_)
            | Error::MissingZeros(_)
            | Error::InvalidRange(_)
            | Error::Parse { .. }
            | Error::Io(_) => Failure::Usage(e.to_string()),
            Error::Precision(_)
            | Error::Underflow(_)
            | Error::Contour(_)
            | Error::SimplicityViolation { .. }
            | Error::Resource(_)
            | Error::Validation(_) => Failure::Precision(e.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn parse_complex(text: &str) -> Result<Complex64, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("'{text}' is not a complex number (expected e.g. 0.5, -1, 2i, 0.5-2i)");
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(j, c)| (c == '+' || c == '-') && !matches!(body.as_bytes()[j - 1], b'e' | b'E'))
        .map(|(j, _)| j)
        .last();
    let (re, im) = match split {
        Some(j) => (&body[..j], &body[j..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        s => s,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

fn character(args: CharacterArgs) -> Result<DirichletCharacter, Failure> {
    Ok(DirichletCharacter::from_conrey(args.q, args.conrey)?)
}

fn primitive_character(args: CharacterArgs) -> Result<DirichletCharacter, Failure> {
    let chi = character(args)?;
    if !chi.is_primitive() {
        return Err(usage(format!(
            "character ({}, {}) is not primitive (conductor {})",
            args.q,
            args.conrey,
            chi.conductor()
        )));
    }
    Ok(chi)
}

fn check_height(height: f64) -> Result<(), Failure> {
    if !(height > 0.0 && height.is_finite()) {
        return Err(usage(format!("T = {height} must be positive")));
    }
    Ok(())
}

fn stricter(tol: Option<f64>, default: f64) -> Result<f64, Failure> {
    match tol {
        None => Ok(default),
        Some(t) if t > 0.0 && t <= default => Ok(t),
        Some(t) => Err(usage(format!("tolerance {t} must lie in (0, {default:e}]"))),
    }
}

fn emit(out: &OutputArgs, json: &impl Serialize, table: String) -> Result<(), Failure> {
    let text = match out.format {
        Format::Json => serde_json::to_string_pretty(json).map_err(|e| Failure::Precision(e.to_string()))? + "\n",
        Format::Table => table,
    };
    match &out.output {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cplx(z: Complex64) -> String {
    format!("{:.16e} {:+.16e}i", z.re, z.im)
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    command: &'static str,
    passed: bool,
    residual: f64,
    tolerance: f64,
    combined_bound: f64,
    zero_file: String,
    zero_count: usize,
    report: &'a IdentityReport,
}

fn cmd_verify(a: &VerifyArgs) -> Outcome {
    let chi = primitive_character(a.chi)?;
    if !(a.k >= 1.0 && a.k.is_finite()) {
        return Err(usage(format!("k = {} must satisfy k >= 1", a.k)));
    }
    if !(a.x > 0.0 && a.x.is_finite()) {
        return Err(usage(format!("x = {} must be positive", a.x)));
    }
    check_height(a.height)?;
    let floor = stricter(a.tol, IDENTITY_TOLERANCE)?;
    let path = cache_path(&a.zeros_dir, &chi, a.height);
    let zeros = cached_zeros(&a.zeros_dir, &chi, a.height, a.compute_zeros)?;
    if !zeros.complete {
        return Err(Failure::Precision(format!(
            "zero list {} is not certified complete up to T = {}",
            path.display(),
            a.height
        )));
    }
    let report = verify_identity_with_zeros(&chi, a.k, a.x, &zeros)?;
    let tolerance = if a.tol.is_some() {
        floor.min(report.tolerance())
    } else {
        report.tolerance()
    };
    let passed = report.residual <= tolerance;
    let out = VerifyOutput {
        command: "verify",
        passed,
        residual: report.residual,
        tolerance,
        combined_bound: report.combined_bound(),
        zero_file: path.display().to_string(),
        zero_count: zeros.len(),
        report: &report,
    };
    let mut t = String::new();
    let _ = writeln!(t, "character        ({}, {})", chi.modulus(), chi.conrey_index());
    let _ = writeln!(t, "k                {}", a.k);
    let _ = writeln!(t, "x                {}", a.x);
    let _ = writeln!(t, "T                {}", a.height);
    let _ = writeln!(t, "zeros            {}", zeros.len());
    let _ = writeln!(t, "lhs              {}", cplx(report.lhs));
    let _ = writeln!(t, "rhs_hyper        {}", cplx(report.rhs_hyper));
    let _ = writeln!(t, "rhs_zero_sum     {}", cplx(report.rhs_zero_sum));
    let _ = writeln!(t, "rhs_total        {}", cplx(report.rhs_total));
    let _ = writeln!(t, "residual         {:.6e}", report.residual);
    let _ = writeln!(t, "combined_bound   {:.6e}", report.combined_bound());
    let _ = writeln!(t, "tolerance        {:.6e}", tolerance);
    let _ = writeln!(t, "passed           {passed}");
    for w in &report.warnings {
        let _ = writeln!(t, "warning          {w}");
    }
    emit(&a.out, &out, t)?;
    Ok(passed)
}

#[derive(Serialize)]
struct DecayOutput<'a> {
    command: &'static str,
    slope_margin: f64,
    slope_within_margin: bool,
    fit: &'a DecayFit,
}

fn cmd_decay(a: &DecayArgs) -> Outcome {
    let chi = character(a.chi)?;
    RieszParams::new(a.k, a.ell, 1.0)?;
    let grid = geometric_grid(a.start, a.stop, a.points)?;
    let fit = decay_fit(&chi, a.k, a.ell, &grid)?;
    let within = fit.slope <= fit.predicted_slope + DECAY_SLOPE_MARGIN;
    let mut t = String::new();
    let _ = writeln!(t, "# x abs_p envelope");
    for i in 0..fit.x_grid.len() {
        let _ = writeln!(
            t,
            "{:.10e} {:.10e} {:.10e}",
            fit.x_grid[i], fit.abs_p[i], fit.envelope[i]
        );
    }
    let _ = writeln!(t, "# slope {:.6}", fit.slope);
    let _ = writeln!(t, "# predicted_slope {:.6}", fit.predicted_slope);
    let _ = writeln!(t, "# intercept {:.6}", fit.intercept);
    let _ = writeln!(t, "# residual_norm {:.6e}", fit.residual_norm);
    let _ = writeln!(t, "# slope_within_margin {within}");
    let out = DecayOutput {
        command: "decay",
        slope_margin: DECAY_SLOPE_MARGIN,
        slope_within_margin: within,
        fit: &fit,
    };
    emit(&a.out, &out, t)?;
    Ok(true)
}

#[derive(Serialize)]
struct ZerosOutput<'a> {
    command: &'static str,
    file: String,
    count: usize,
    list: &'a ZeroList,
}

fn write_zero_file(list: &ZeroList, file: &Path, out: &OutputArgs, command: &'static str) -> Outcome {
    save_zeros(list, file)?;
    let mut t = String::new();
    let _ = writeln!(t, "# file {}", file.display());
    let _ = writeln!(t, "# character ({}, {})", list.character.0, list.character.1);
    let _ = writeln!(t, "# T {}", list.height);
    let _ = writeln!(t, "# count {}", list.len());
    let _ = writeln!(t, "# complete {}", list.complete);
    for w in &list.warnings {
        let _ = writeln!(t, "# warning {w}");
    }
    for g in &list.gammas {
        let _ = writeln!(t, "{g:.15}");
    }
    let o = ZerosOutput {
        command,
        file: file.display().to_string(),
        count: list.len(),
        list,
    };
    emit(out, &o, t)?;
    if !list.complete {
        return Err(Failure::Precision(format!(
            "zero list up to T = {} is not certified complete",
            list.height
        )));
    }
    Ok(true)
}

fn cmd_zeros(a: &ZerosArgs) -> Outcome {
    let chi = primitive_character(a.chi)?;
    check_height(a.height)?;
    let list = find_zeros(&chi, a.height)?;
    let file = a
        .file
        .clone()
        .unwrap_or_else(|| cache_path(&a.zeros_dir, &chi, a.height));
    write_zero_file(&list, &file, &a.out, "zeros")
}

fn cmd_convert(a: &ConvertArgs) -> Outcome {
    let chi = primitive_character(a.chi)?;
    if let Some(h) = a.height {
        check_height(h)?;
    }
    let text = fs::read_to_string(&a.input).map_err(|e| usage(format!("cannot read {}: {e}", a.input.display())))?;
    let list = convert_lmfdb(&chi, &text, a.height)?;
    let file = a
        .file
        .clone()
        .unwrap_or_else(|| cache_path(&a.zeros_dir, &chi, list.height));
    write_zero_file(&list, &file, &a.out, "convert-lmfdb")
}

#[derive(Serialize)]
struct MellinRow {
    s: Complex64,
    passed: bool,
    check: MellinCheck,
}

#[derive(Serialize)]
struct MellinOutput {
    command: &'static str,
    character: (u64, u64),
    k: f64,
    ell: f64,
    strip: (f64, f64),
    tolerance: f64,
    passed: bool,
    points: Vec<MellinRow>,
}

fn cmd_mellin(a: &MellinArgs) -> Outcome {
    let chi = character(a.chi)?;
    RieszParams::new(a.k, a.ell, 1.0)?;
    let tolerance = stricter(a.tol, DEFAULT_MELLIN_TOLERANCE)?;
    let points: Vec<Complex64> = if a.s.is_empty() {
        DEFAULT_MELLIN_POINTS
            .iter()
            .map(|&(re, im)| Complex64::new(re, im))
            .collect()
    } else {
        a.s.clone()
    };
    let lower = (1.0 - a.k) / a.ell;
    for s in &points {
        if s.re == 0.0 && s.im == 0.0 {
            return Err(usage("s = 0 is a pole of the closed form"));
        }
        if !(s.re > lower && s.re < 1.0) {
            return Err(usage(format!("Re s = {} lies outside the strip ({lower}, 1)", s.re)));
        }
    }
    let mut rows = Vec::with_capacity(points.len());
    for &s in &points {
        let check = mellin_check(&chi, a.k, a.ell, s)?;
        rows.push(MellinRow {
            s,
            passed: check.relative_deviation <= tolerance,
            check,
        });
    }
    let passed = rows.iter().all(|r| r.passed);
    let mut t = String::new();
    let _ = writeln!(t, "# s_re s_im relative_deviation tail_estimate x_max passed");
    for r in &rows {
        let _ = writeln!(
            t,
            "{} {} {:.6e} {:.6e} {:.6e} {}",
            r.s.re, r.s.im, r.check.relative_deviation, r.check.tail_estimate, r.check.x_max, r.passed
        );
    }
    let _ = writeln!(t, "# tolerance {tolerance:e}");
    let _ = writeln!(t, "# passed {passed}");
    let out = MellinOutput {
        command: "mellin",
        character: chi.label(),
        k: a.k,
        ell: a.ell,
        strip: (lower, 1.0),
        tolerance,
        passed,
        points: rows,
    };
    emit(&a.out, &out, t)?;
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Decay(a) => cmd_decay(a),
        Command::Zeros(a) => cmd_zeros(a),
        Command::Mellin(a) => cmd_mellin(a),
        Command::ConvertLmfdb(a) => cmd_convert(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: verification failed; see the report");
            ExitCode::from(3)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Precision(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_points() {
        assert_eq!(parse_complex("0.5").unwrap(), Complex64::new(0.5, 0.0));
        assert_eq!(parse_complex("-0.5").unwrap(), Complex64::new(-0.5, 0.0));
        assert_eq!(parse_complex("0.5+2i").unwrap(), Complex64::new(0.5, 2.0));
        assert_eq!(parse_complex("0.25-1i").unwrap(), Complex64::new(0.25, -1.0));
        assert_eq!(parse_complex("-2i").unwrap(), Complex64::new(0.0, -2.0));
        assert_eq!(parse_complex("i").unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(parse_complex("1e-1-1e-1i").unwrap(), Complex64::new(0.1, -0.1));
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn tolerance_overrides_only_tighten() {
        assert_eq!(stricter(None, 1e-8).unwrap(), 1e-8);
        assert_eq!(stricter(Some(1e-10), 1e-8).unwrap(), 1e-10);
        assert!(stricter(Some(1e-6), 1e-8).is_err());
        assert!(stricter(Some(0.0), 1e-8).is_err());
    }

    #[test]
    fn error_classes() {
        assert!(matches!(Failure::from(Error::Domain("k".into())), Failure::Usage(_)));
        assert!(matches!(
            Failure::from(Error::MissingZeros("z".into())),
            Failure::Usage(_)
        ));
        assert!(matches!(
            Failure::from(Error::Underflow("u".into())),
            Failure::Precision(_)
        ));
        assert!(matches!(
            Failure::from(Error::Precision("p".into())),
            Failure::Precision(_)
        ));
    }

    #[test]
    fn cli_definition() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
