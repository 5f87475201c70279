//! Zero files: a two-line header followed by one ordinate per line.
//!
//! ```text
//! #riesz-zeros v1
//! #chi q=4 conrey=3 T=50 complete=1 provenance=computed
//! -49.3071448327
//! ...
//! ```
//!
//! Every ordinate read back is re-validated against `L(1/2 + iγ, χ)`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::arith::DirichletCharacter;
use crate::error::{Error, Result};
use crate::lfunc::{
    find_zeros, refine_zero, validate_zero, zero_count_argument_principle, Provenance, ZeroList, ZERO_TOLERANCE,
};

pub const FORMAT_LINE: &str = "#riesz-zeros v1";
/// `|L(1/2 + iγ)|` accepted for an ingested ordinate.
pub const INGEST_TOLERANCE: f64 = 1e-6;
/// Half-width of the bracket used to refine an ingested ordinate.
const REFINE_DELTA: f64 = 1e-6;

/// Parsed second header line.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroFileHeader {
    pub q: u64,
    pub conrey: u64,
    pub height: f64,
    pub complete: bool,
    pub provenance: String,
}

fn provenance_text(p: Provenance) -> &'static str {
    match p {
        Provenance::Computed => "computed",
        Provenance::Ingested => "ingested",
    }
}

/// Text form of a zero list.
pub fn format_zeros(list: &ZeroList) -> String {
    let mut out = String::new();
    out.push_str(FORMAT_LINE);
    out.push('\n');
    out.push_str(&format!(
        "#chi q={} conrey={} T={} complete={} provenance={}\n",
        list.character.0,
        list.character.1,
        list.height,
        u8::from(list.complete),
        provenance_text(list.provenance)
    ));
    for g in &list.gammas {
        out.push_str(&format!("{g:.15}\n"));
    }
    out
}

pub fn save_zeros(list: &ZeroList, path: &Path) -> Result<()> {
    if list.gammas.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Validation("ordinates are not strictly increasing".into()));
    }
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let mut f = fs::File::create(path)?;
    f.write_all(format_zeros(list).as_bytes())?;
    Ok(())
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_header(line: &str) -> Result<ZeroFileHeader> {
    let rest = line
        .strip_prefix("#chi ")
        .ok_or_else(|| parse_err(2, "expected '#chi q=.. conrey=.. T=.. complete=.. provenance=..'"))?;
    let mut q = None;
    let mut conrey = None;
    let mut height = None;
    let mut complete = None;
    let mut provenance = None;
    for field in rest.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| parse_err(2, format!("malformed field '{field}'")))?;
        let bad = |what: &str| parse_err(2, format!("bad {what} '{value}'"));
        match key {
            "q" => q = Some(value.parse::<u64>().map_err(|_| bad("q"))?),
            "conrey" => conrey = Some(value.parse::<u64>().map_err(|_| bad("conrey"))?),
            "T" => height = Some(value.parse::<f64>().map_err(|_| bad("T"))?),
            "complete" => {
                complete = Some(match value {
                    "0" => false,
                    "1" => true,
                    _ => return Err(bad("complete flag")),
                })
            }
            "provenance" => provenance = Some(value.to_string()),
            _ => return Err(parse_err(2, format!("unknown field '{key}'"))),
        }
    }
    let missing = |what: &str| parse_err(2, format!("missing {what}"));
    let height = height.ok_or_else(|| missing("T"))?;
    if !(height >= 0.0) || !height.is_finite() {
        return Err(parse_err(2, format!("T = {height} must be non-negative")));
    }
    Ok(ZeroFileHeader {
        q: q.ok_or_else(|| missing("q"))?,
        conrey: conrey.ok_or_else(|| missing("conrey"))?,
        height,
        complete: complete.ok_or_else(|| missing("complete"))?,
        provenance: provenance.ok_or_else(|| missing("provenance"))?,
    })
}

/// Header and raw ordinates, without validation.
pub fn parse_zero_file(text: &str) -> Result<(ZeroFileHeader, Vec<f64>)> {
    let mut lines = text.lines();
    match lines.next() {
        Some(l) if l.trim_end() == FORMAT_LINE => {}
        _ => return Err(parse_err(1, format!("expected '{FORMAT_LINE}'"))),
    }
    let header = parse_header(
        lines
            .next()
            .ok_or_else(|| parse_err(2, "missing character line"))?
            .trim_end(),
    )?;
    let mut gammas = Vec::new();
    for (i, l) in lines.enumerate() {
        let l = l.trim();
        if l.is_empty() {
            continue;
        }
        let g: f64 = l
            .parse()
            .map_err(|_| parse_err(i + 3, format!("not a number: '{l}'")))?;
        if !g.is_finite() {
            return Err(parse_err(i + 3, "ordinate is not finite"));
        }
        if let Some(&prev) = gammas.last() {
            if !(g > prev) {
                return Err(parse_err(i + 3, "ordinates must be strictly increasing"));
            }
        }
        gammas.push(g);
    }
    Ok((header, gammas))
}

/// Re-validates raw ordinates for `χ`: an ordinate with `|L(1/2 + iγ)|`
/// above `10⁻⁸` is refined once, and it is kept only if `|L| ≤ 10⁻⁶`
/// afterwards. The list is marked complete only when `claimed`
/// is set and the kept count equals the argument-principle count at `T`.
pub fn validate_ordinates(
    chi: &DirichletCharacter,
    gammas: &[f64],
    height: f64,
    claimed: bool,
    provenance: Provenance,
) -> Result<ZeroList> {
    let mut warnings = Vec::new();
    let mut kept: Vec<f64> = Vec::with_capacity(gammas.len());
    for &g in gammas {
        let (mut l_abs, _) = validate_zero(chi, g)?;
        let mut r = g;
        if l_abs > ZERO_TOLERANCE {
            r = refine_zero(chi, g, REFINE_DELTA)?;
            l_abs = validate_zero(chi, r)?.0;
        }
        if l_abs > INGEST_TOLERANCE {
            warnings.push(format!("rejected gamma = {g}: |L(1/2 + i gamma)| = {l_abs:e}"));
            continue;
        }
        if kept.last().is_some_and(|&p| !(r > p)) {
            warnings.push(format!("rejected gamma = {g}: duplicate after refinement"));
            continue;
        }
        kept.push(r);
    }
    let mut complete = false;
    if claimed {
        match zero_count_argument_principle(chi, height) {
            Ok(c) if c.count == kept.len() as i64 => complete = true,
            Ok(c) => warnings.push(format!(
                "completeness not confirmed: {} ordinates, argument principle counts {} up to T = {}",
                kept.len(),
                c.count,
                c.height_used
            )),
            Err(e) => warnings.push(format!("completeness not confirmed: {e}")),
        }
    }
    Ok(ZeroList {
        character: chi.label(),
        gammas: kept,
        height,
        provenance,
        complete,
        warnings,
    })
}

/// Reads and re-validates a zero file.
pub fn load_zeros(path: &Path) -> Result<ZeroList> {
    let text = fs::read_to_string(path)?;
    let (h, gammas) = parse_zero_file(&text)?;
    let chi = DirichletCharacter::from_conrey(h.q, h.conrey)?;
    if let Some(g) = gammas.iter().find(|g| g.abs() > h.height + 1e-9) {
        return Err(Error::Validation(format!(
            "ordinate {g} exceeds the header height {}",
            h.height
        )));
    }
    let provenance = if h.provenance == "computed" {
        Provenance::Computed
    } else {
        Provenance::Ingested
    };
    validate_ordinates(&chi, &gammas, h.height, h.complete, provenance)
}

/// Converts an LMFDB-style export, one ordinate per line (blank lines and
/// `#` comments ignored), for the given character. For a real character the
/// positive ordinates are mirrored; for a complex one the ordinates are taken
/// as signed. The height defaults to the largest `|γ|`.
pub fn convert_lmfdb(chi: &DirichletCharacter, text: &str, height: Option<f64>) -> Result<ZeroList> {
    let mut raw = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let l = l.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let field = l.split([',', ' ', '\t']).find(|f| !f.is_empty()).unwrap_or(l);
        let g: f64 = field
            .parse()
            .map_err(|_| parse_err(i + 1, format!("not a number: '{l}'")))?;
        raw.push(g);
    }
    let mut gammas: Vec<f64> = if chi.is_real() {
        let pos: Vec<f64> = raw.iter().copied().filter(|g| *g > 0.0).collect();
        pos.iter().map(|g| -g).chain(pos.iter().copied()).collect()
    } else {
        raw
    };
    gammas.sort_by(f64::total_cmp);
    gammas.dedup();
    let top = gammas.iter().fold(0f64, |m, g| m.max(g.abs()));
    let height = height.unwrap_or(top);
    gammas.retain(|g| g.abs() <= height);
    validate_ordinates(chi, &gammas, height, true, Provenance::Ingested)
}

/// `dir/q<q>_c<conrey>_T<T>.zeros`.
pub fn cache_path(dir: &Path, chi: &DirichletCharacter, height: f64) -> PathBuf {
    dir.join(format!("q{}_c{}_T{}.zeros", chi.modulus(), chi.conrey_index(), height))
}

/// Loads a cached list at `T` if present, otherwise computes it when
/// `compute` is set and stores it.
pub fn cached_zeros(dir: &Path, chi: &DirichletCharacter, height: f64, compute: bool) -> Result<ZeroList> {
    let path = cache_path(dir, chi, height);
    if path.exists() {
        return load_zeros(&path);
    }
    if !compute {
        return Err(Error::MissingZeros(format!(
            "no zero file {}; compute zeros first (e.g. the `zeros` subcommand or --compute-zeros)",
            path.display()
        )));
    }
    let list = find_zeros(chi, height)?;
    save_zeros(&list, &path)?;
    Ok(list)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi(q: u64, m: u64) -> DirichletCharacter {
        DirichletCharacter::from_conrey(q, m).unwrap()
    }

    #[test]
    fn empty_list_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let c = chi(4, 3);
        let list = find_zeros(&c, 0.1).unwrap();
        assert!(list.is_empty() && list.complete);
        let p = dir.path().join("e.zeros");
        save_zeros(&list, &p).unwrap();
        let text = fs::read_to_string(&p).unwrap();
        assert_eq!(text.lines().count(), 2);
        let back = load_zeros(&p).unwrap();
        assert!(back.is_empty());
        assert!(back.complete);
    }

    #[test]
    fn computed_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let c = chi(4, 3);
        let list = find_zeros(&c, 50.0).unwrap();
        let p = dir.path().join("z.zeros");
        save_zeros(&list, &p).unwrap();
        let back = load_zeros(&p).unwrap();
        assert_eq!(back.len(), list.len());
        assert!(back.complete);
        assert_eq!(back.provenance, Provenance::Computed);
        assert_eq!(back.character, list.character);
        for (a, b) in list.gammas.iter().zip(&back.gammas) {
            assert!((a - b).abs() <= 1e-12, "{a} {b}");
        }
    }

    #[test]
    fn corrupt_files() {
        assert!(matches!(
            parse_zero_file("#riesz-zeros v2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_zero_file("#riesz-zeros v1\n#chi q=4 conrey=3 T=50 complete=2 provenance=x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_zero_file("#riesz-zeros v1\n#chi q=4 T=50 complete=1 provenance=x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_zero_file("#riesz-zeros v1\n#chi q=4 conrey=3 T=50 complete=1 provenance=x\n2.0\n1.0\n"),
            Err(Error::Parse { line: 4, .. })
        ));
    }

    #[test]
    fn fabricated_ordinate_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let c = chi(4, 3);
        let real = find_zeros(&c, 12.0).unwrap();
        let mut gammas = real.gammas.clone();
        gammas.push(7.0);
        gammas.sort_by(f64::total_cmp);
        let fake = ZeroList { gammas, ..real.clone() };
        let p = dir.path().join("f.zeros");
        save_zeros(&fake, &p).unwrap();
        let back = load_zeros(&p).unwrap();
        assert_eq!(back.gammas.len(), real.gammas.len());
        assert!(back.warnings.iter().any(|w| w.contains("rejected gamma = 7")));
        assert!(back.complete);
    }

    #[test]
    fn missing_rows_clear_completeness() {
        let c = chi(3, 2);
        let real = find_zeros(&c, 20.0).unwrap();
        let partial = &real.gammas[1..real.gammas.len() - 1];
        let v = validate_ordinates(&c, partial, real.height, true, Provenance::Ingested).unwrap();
        assert!(!v.complete);
    }

    #[test]
    fn lmfdb_conversion() {
        // Low-precision positive ordinates as an external source would list them.
        let c = chi(4, 3);
        let ours = find_zeros(&c, 30.0).unwrap();
        let text: String = ours
            .gammas
            .iter()
            .filter(|g| **g > 0.0)
            .map(|g| format!("{g:.9}\n"))
            .collect();
        let list = convert_lmfdb(&c, &format!("# L-function 4.3\n{text}"), Some(30.0)).unwrap();
        assert!(list.complete, "{:?}", list.warnings);
        assert_eq!(list.provenance, Provenance::Ingested);
        for (a, b) in ours.gammas.iter().zip(&list.gammas) {
            assert!((a - b).abs() <= 1e-6);
        }
    }

    #[test]
    fn cache_behaviour() {
        let dir = tempfile::tempdir().unwrap();
        let c = chi(5, 2);
        assert!(matches!(
            cached_zeros(dir.path(), &c, 10.0, false),
            Err(Error::MissingZeros(_))
        ));
        let a = cached_zeros(dir.path(), &c, 10.0, true).unwrap();
        assert!(cache_path(dir.path(), &c, 10.0).exists());
        let b = cached_zeros(dir.path(), &c, 10.0, false).unwrap();
        assert_eq!(a.gammas.len(), b.gammas.len());
    }
}
