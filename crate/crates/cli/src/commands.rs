use std::io::Write;
use std::path::Path;

use serde::Serialize;

use cobham_core::growth;
use cobham_core::harness::{self, CobhamOptions, Conclusion};
use cobham_core::language;
use cobham_core::normalize as norm;
use cobham_core::periodicity as period;
use cobham_core::{fixtures, Alphabet, Error, PerronValue, SubstitutionSystem, Word};

use crate::error::{CliError, Result};
use crate::report;
use crate::VERSION;

const FIXTURE_PREFIX: &str = "fixture:";

/// Reads a substitution file, or a bundled fixture given as `fixture:NAME`.
pub fn load(path: &Path) -> Result<SubstitutionSystem> {
    let shown = path.display().to_string();
    if let Some(name) = shown.strip_prefix(FIXTURE_PREFIX) {
        return fixtures::load(name)
            .ok_or_else(|| CliError::Usage(format!("no bundled fixture named `{name}`")))?
            .map_err(CliError::from);
    }
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: shown, source })?;
    let label = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Ok(cobham_core::parse_substitution_file(&text)?.with_label(label))
}

fn write_json<T: Serialize>(value: &T, out: &mut dyn Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

/// Image prefix, normalizing first when `σ` erases.
fn image(sys: &SubstitutionSystem, n: usize) -> Result<(Word, Alphabet)> {
    match sys.image_prefix(n) {
        Ok(x) => Ok((x, sys.output_alphabet().clone())),
        Err(Error::Erasing) => {
            let ns = norm::normalize(sys)?;
            Ok((ns.system.image_prefix(n)?, ns.system.output_alphabet().clone()))
        }
        Err(e) => Err(e.into()),
    }
}

pub fn analyze(file: &Path, prefix: Option<usize>, bits: u32, out: &mut dyn Write) -> Result<i32> {
    let sys = load(file)?;
    write_json(&report::analyze(&sys, prefix, bits)?, out)?;
    Ok(0)
}

pub fn fixpoint(file: &Path, n: usize, raw: bool, out: &mut dyn Write) -> Result<i32> {
    let sys = load(file)?;
    let text = if raw {
        let x = sys.fixed_point(n)?;
        sys.alphabet().render(&x)
    } else {
        let (x, alphabet) = image(&sys, n)?;
        alphabet.render(&x)
    };
    writeln!(out, "{text}")?;
    Ok(0)
}

fn approx(v: &PerronValue) -> String {
    v.approx(20)
}

pub fn growth(file: &Path, n_max: usize, bits: u32, out: &mut dyn Write) -> Result<i32> {
    let sys = load(file)?;
    let section = report::letter_growth(&sys, bits)?;
    let (live, keep) = growth::strip_mortal(sys.sigma())?;
    let mut w = csv::Writer::from_writer(&mut *out);
    w.write_record(["letter", "d", "theta_approx", "theta_charpoly", "mortal", "c_estimate", "residual"])?;
    for row in &section.letters {
        let Some(theta) = &row.theta else {
            w.write_record([row.letter.as_str(), "", "", "", "true", "", ""])?;
            continue;
        };
        let a = sys.alphabet().letter(&row.letter).expect("own token");
        let i = keep.iter().position(|&k| k == a).expect("live letter");
        let fit = growth::empirical_growth_fit(&live, i as u8, n_max)?;
        w.write_record([
            row.letter.clone(),
            row.d.unwrap_or(0).to_string(),
            approx(theta),
            theta.reduced().to_string(),
            "false".into(),
            format!("{:.6e}", fit.c_estimate),
            format!("{:.6e}", fit.residual),
        ])?;
    }
    w.flush()?;
    Ok(0)
}

pub fn normalize(
    file: &Path,
    output: Option<&Path>,
    sidecar: Option<&Path>,
    depth: usize,
    bits: u32,
    out: &mut dyn Write,
) -> Result<i32> {
    let sys = load(file)?;
    let ns = norm::normalize_with_depth(&sys, depth)?;
    let mut car = ns.sidecar()?;
    car.eigenvalue_before = car.eigenvalue_before.refined(bits);
    car.eigenvalue_after = car.eigenvalue_after.refined(bits);
    let text = format!("# normalized by {VERSION}\n{}", ns.system.to_file_string());
    let car_path = sidecar.map(Path::to_path_buf).or_else(|| output.map(|o| o.with_extension("json")));
    match output {
        Some(path) => std::fs::write(path, &text).map_err(|source| CliError::Write {
            path: path.display().to_string(),
            source,
        })?,
        None => out.write_all(text.as_bytes())?,
    }
    if let Some(path) = car_path {
        let json = serde_json::to_string_pretty(&car)? + "\n";
        std::fs::write(&path, json).map_err(|source| CliError::Write {
            path: path.display().to_string(),
            source,
        })?;
    }
    Ok(0)
}

/// `a..b` or `a..=b`.
fn parse_range(s: &str) -> Result<(usize, usize)> {
    let bad = || CliError::Usage(format!("bad length range `{s}`; use a..b or a..=b"));
    let (a, b, inclusive) = if let Some((a, b)) = s.split_once("..=") {
        (a, b, true)
    } else if let Some((a, b)) = s.split_once("..") {
        (a, b, false)
    } else {
        return Err(bad());
    };
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    let hi = if inclusive { b } else { b.checked_sub(1).ok_or_else(bad)? };
    if a == 0 || hi < a {
        return Err(bad());
    }
    Ok((a, hi))
}

/// Tokens separated by spaces, or packed when every token is one character.
fn parse_word(alphabet: &Alphabet, text: &str) -> Result<Word> {
    let packed = !text.contains(char::is_whitespace) && alphabet.tokens().iter().all(|t| t.chars().count() == 1);
    if packed {
        let spaced: Vec<String> = text.chars().map(String::from).collect();
        return Ok(alphabet.parse_word(&spaced.join(" "))?);
    }
    Ok(alphabet.parse_word(text)?)
}

pub fn returns(file: &Path, words: &[String], n: usize, lengths: Option<&str>, out: &mut dyn Write) -> Result<i32> {
    if words.is_empty() && lengths.is_none() {
        return Err(CliError::Usage("give at least one -u word or --lengths".into()));
    }
    let sys = load(file)?;
    let (x, alphabet) = image(&sys, n)?;
    let mut targets: Vec<Word> = words.iter().map(|w| parse_word(&alphabet, w)).collect::<Result<_>>()?;
    let range = lengths.map(parse_range).transpose()?;
    if let Some((a, b)) = range {
        for len in a..=b {
            targets.extend(language::factors(&x, len));
        }
    }
    let mut w = csv::Writer::from_writer(&mut *out);
    w.write_record(["u", "len", "returns", "min_len", "max_len", "max_gap"])?;
    for u in &targets {
        match language::return_words(&x, u) {
            Ok(r) => w.write_record([
                alphabet.render(u),
                u.len().to_string(),
                r.return_words.len().to_string(),
                r.min_len().to_string(),
                r.max_len().to_string(),
                r.max_gap.to_string(),
            ])?,
            // Listed explicitly; factors from --lengths that occur once are skipped.
            Err(e) if words.iter().any(|s| parse_word(&alphabet, s).ok().as_ref() == Some(u)) => {
                return Err(e.into())
            }
            Err(_) => {}
        }
    }
    w.flush()?;
    drop(w);
    if let Some((a, b)) = range {
        let est = language::recurrence_constants_range(&x, a, b);
        eprintln!("lengths {a}..={b}: L = {:.4}, K = {}", est.l_estimate, est.k_estimate);
    }
    Ok(0)
}

pub fn periodicity(
    file: &Path,
    n: usize,
    max_preperiod: Option<usize>,
    max_period: Option<usize>,
    out: &mut dyn Write,
) -> Result<i32> {
    let sys = load(file)?;
    let (x, _) = image(&sys, n)?;
    let cert = period::detect_ultimate_periodicity(&x, max_preperiod, max_period)?;
    write_json(&cert, out)?;
    Ok(0)
}

#[derive(Serialize)]
struct Stamped<'a, T> {
    version: &'a str,
    #[serde(flatten)]
    body: T,
}

pub fn cobham(first: &Path, second: &Path, opts: &CobhamOptions, bits: u32, out: &mut dyn Write) -> Result<i32> {
    let a = load(first)?;
    let b = load(second)?;
    let mut r = harness::cobham_check(&a, &b, opts)?;
    for v in r.eigenvalues.iter_mut() {
        *v = v.refined(bits);
    }
    let code = r.conclusion.exit_code();
    write_json(&Stamped { version: VERSION, body: r }, out)?;
    Ok(code)
}

pub fn fuzz(seed: u64, count: usize, n: usize, out: &mut dyn Write) -> Result<i32> {
    let opts = CobhamOptions { depth: n, ..Default::default() };
    let mut w = csv::Writer::from_writer(&mut *out);
    w.write_record(["case", "p", "q", "preperiod", "period", "conclusion"])?;
    let mut code = 0;
    for (i, c) in harness::fuzz_cases(seed, count)?.iter().enumerate() {
        let r = harness::cobham_check(&c.a, &c.b, &opts)?;
        let out_alpha = c.a.output_alphabet();
        let name = match &r.conclusion {
            Conclusion::ConsistentPeriodic => "ConsistentPeriodic",
            Conclusion::ConsistentDependent => "ConsistentDependent",
            Conclusion::TheoremTension { .. } => "TheoremTension",
            Conclusion::Inconclusive { .. } => "Inconclusive",
        };
        code = code.max(r.conclusion.exit_code());
        w.write_record([
            i.to_string(),
            c.p.to_string(),
            c.q.to_string(),
            out_alpha.render(&c.preperiod),
            out_alpha.render(&c.period),
            name.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(code)
}

pub fn fixtures(name: Option<&str>, out: &mut dyn Write) -> Result<i32> {
    match name {
        None => {
            for (name, _) in fixtures::ALL {
                writeln!(out, "{name}")?;
            }
        }
        Some(name) => {
            let text = fixtures::ALL
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, t)| *t)
                .ok_or_else(|| CliError::Usage(format!("no bundled fixture named `{name}`")))?;
            out.write_all(text.as_bytes())?;
        }
    }
    Ok(0)
}
