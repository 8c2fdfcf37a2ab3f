//! Substitution systems `(σ, a, φ)`, the line-oriented file format, and lazy
//! generation of `φ(σ^ω(a))`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::growth;
use crate::words::{Alphabet, Letter, Morphism, Word};

/// Default cap on the number of letters a stream will materialize.
pub const DEFAULT_BUDGET: usize = 100_000_000;

/// A substitution prolongable on `start`, with an output morphism `phi`
/// (the identity coding unless given).
///
/// Construction checks that `sigma` is prolongable on `start` and that every
/// letter occurs in some `σⁿ(start)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionSystem {
    sigma: Morphism,
    start: Letter,
    phi: Morphism,
    label: String,
}

impl SubstitutionSystem {
    pub fn new(sigma: Morphism, start: Letter, phi: Option<Morphism>, label: impl Into<String>) -> Result<Self> {
        if !sigma.is_endomorphism() {
            return Err(Error::AlphabetMismatch("sigma must be an endomorphism".into()));
        }
        if !sigma.domain().contains(start) {
            return Err(Error::InvalidArgument(format!("start letter id {start} out of range")));
        }
        let phi = phi.unwrap_or_else(|| Morphism::identity(sigma.domain()));
        if phi.domain() != sigma.domain() {
            return Err(Error::AlphabetMismatch(
                "the output morphism must be defined on the substitution's alphabet".into(),
            ));
        }
        if !is_prolongable(&sigma, start) {
            return Err(Error::NotProlongable(sigma.domain().token(start).into()));
        }
        let reach = reachable_from(&sigma, start);
        let missing: Vec<String> = sigma
            .domain()
            .letters()
            .filter(|&l| !reach[l as usize])
            .map(|l| sigma.domain().token(l).to_string())
            .collect();
        if !missing.is_empty() {
            return Err(Error::Unreachable(missing));
        }
        Ok(SubstitutionSystem {
            sigma,
            start,
            phi,
            label: label.into(),
        })
    }

    /// Pure system with the identity coding.
    pub fn pure(sigma: Morphism, start: Letter) -> Result<Self> {
        Self::new(sigma, start, None, "")
    }

    pub fn sigma(&self) -> &Morphism {
        &self.sigma
    }

    pub fn start(&self) -> Letter {
        self.start
    }

    pub fn phi(&self) -> &Morphism {
        &self.phi
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.sigma.domain()
    }

    /// Alphabet of the generated sequence (codomain of `phi`).
    pub fn output_alphabet(&self) -> &Alphabet {
        self.phi.codomain()
    }

    /// True when `phi` is a coding and `sigma` is non-erasing.
    pub fn is_normal(&self) -> bool {
        self.sigma.is_non_erasing() && self.phi.is_coding()
    }

    pub fn stream(&self) -> FixedPointStream {
        FixedPointStream::new(self.sigma.clone(), self.start)
    }

    pub fn image_stream(&self) -> ImageStream {
        ImageStream::new(self)
    }

    /// First `n` letters of `σ^ω(start)` (before `phi`).
    pub fn fixed_point(&self, n: usize) -> Result<Word> {
        let mut s = self.stream();
        s.ensure(n)?;
        Ok(Word::from(&s.generated()[..n]))
    }

    /// First `n` letters of `φ(σ^ω(a))`, for any system (erasing or not).
    pub fn image_prefix(&self, n: usize) -> Result<Word> {
        let mut s = self.image_stream();
        s.ensure(n)?;
        Ok(Word::from(&s.generated()[..n]))
    }

    /// Serializes the system in the substitution file format.
    pub fn to_file_string(&self) -> String {
        let a = self.alphabet();
        let mut out = String::new();
        if !self.label.is_empty() {
            for line in self.label.lines() {
                let _ = writeln!(out, "# {line}");
            }
        }
        let _ = writeln!(out, "alphabet {}", a.tokens().join(" "));
        let _ = writeln!(out, "start {}", a.token(self.start));
        for l in a.letters() {
            let rhs: Vec<&str> = self.sigma.image(l).iter().map(|&c| a.token(c)).collect();
            let _ = writeln!(out, "rule {} -> {}", a.token(l), rhs.join(" "));
        }
        if !self.phi.is_identity() {
            let c = self.phi.codomain();
            for l in a.letters() {
                let rhs: Vec<&str> = self.phi.image(l).iter().map(|&x| c.token(x)).collect();
                let _ = writeln!(out, "code {} -> {}", a.token(l), rhs.join(" "));
            }
        }
        // `rule a -> ` leaves a trailing space for empty images; strip it.
        out.lines()
            .map(str::trim_end)
            .collect::<Vec<_>>()
            .join("\n")
            + "\n"
    }
}

/// `σ(a)` starts with `a` and `|σⁿ(a)| → ∞`.
pub fn is_prolongable(sigma: &Morphism, a: Letter) -> bool {
    sigma.is_endomorphism()
        && sigma.domain().contains(a)
        && sigma.image(a).first() == Some(&a)
        && growth::growing_letters(sigma)[a as usize]
}

/// Letters occurring in some `σⁿ(a)`, `n >= 0`.
pub fn reachable_from(sigma: &Morphism, a: Letter) -> Vec<bool> {
    let succ = sigma.successors();
    let mut seen = vec![false; sigma.domain().len()];
    let mut stack = vec![a];
    seen[a as usize] = true;
    while let Some(l) = stack.pop() {
        for &m in &succ[l as usize] {
            if !seen[m as usize] {
                seen[m as usize] = true;
                stack.push(m);
            }
        }
    }
    seen
}

/// Parses the substitution file format:
///
/// ```text
/// # comment
/// alphabet a b c
/// start a
/// rule a -> a a a b
/// rule b -> b c
/// rule c -> c b
/// code c ->          (optional; letters without a code line map to themselves)
/// ```
pub fn parse_substitution_file(text: &str) -> Result<SubstitutionSystem> {
    let mut alphabet: Option<Alphabet> = None;
    let mut start: Option<(usize, String)> = None;
    let mut rules: Vec<Option<Word>> = Vec::new();
    let mut codes: Vec<Option<Vec<String>>> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let keyword = parts.next().expect("non-empty line");
        match keyword {
            "alphabet" => {
                if alphabet.is_some() {
                    return Err(Error::parse(lineno, "duplicate `alphabet` line"));
                }
                let a = Alphabet::new(parts.map(String::from))
                    .map_err(|e| Error::parse(lineno, e.to_string()))?;
                rules = vec![None; a.len()];
                codes = vec![None; a.len()];
                alphabet = Some(a);
            }
            "start" => {
                let tok = parts
                    .next()
                    .ok_or_else(|| Error::parse(lineno, "`start` needs a letter"))?;
                if parts.next().is_some() {
                    return Err(Error::parse(lineno, "`start` takes exactly one letter"));
                }
                if start.is_some() {
                    return Err(Error::parse(lineno, "duplicate `start` line"));
                }
                start = Some((lineno, tok.to_string()));
            }
            "rule" | "code" => {
                let a = alphabet
                    .as_ref()
                    .ok_or_else(|| Error::parse(lineno, "`alphabet` must come first"))?;
                let rest: Vec<&str> = parts.collect();
                if rest.len() < 2 || rest[1] != "->" {
                    return Err(Error::parse(
                        lineno,
                        format!("expected `{keyword} <tok> -> <tok>...`"),
                    ));
                }
                let lhs = a.letter(rest[0]).ok_or_else(|| {
                    Error::UnknownToken(format!("{} (line {lineno})", rest[0]))
                })?;
                let rhs = &rest[2..];
                if keyword == "rule" {
                    if rules[lhs as usize].is_some() {
                        return Err(Error::parse(lineno, format!("duplicate rule for `{}`", rest[0])));
                    }
                    let img = rhs
                        .iter()
                        .map(|t| {
                            a.letter(t)
                                .ok_or_else(|| Error::UnknownToken(format!("{t} (line {lineno})")))
                        })
                        .collect::<Result<Word>>()?;
                    rules[lhs as usize] = Some(img);
                } else {
                    if codes[lhs as usize].is_some() {
                        return Err(Error::parse(lineno, format!("duplicate code for `{}`", rest[0])));
                    }
                    codes[lhs as usize] = Some(rhs.iter().map(|s| s.to_string()).collect());
                }
            }
            other => return Err(Error::parse(lineno, format!("unknown directive `{other}`"))),
        }
    }

    let alphabet = alphabet.ok_or_else(|| Error::parse(0, "missing `alphabet` line"))?;
    let (start_line, start_tok) = start.ok_or_else(|| Error::parse(0, "missing `start` line"))?;
    let start = alphabet
        .letter(&start_tok)
        .ok_or_else(|| Error::UnknownToken(format!("{start_tok} (line {start_line})")))?;
    let images = rules
        .into_iter()
        .enumerate()
        .map(|(l, r)| {
            r.ok_or_else(|| {
                Error::parse(0, format!("no rule for `{}`", alphabet.token(l as Letter)))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let sigma = Morphism::endo(alphabet.clone(), images)?;

    let phi = if codes.iter().all(Option::is_none) {
        None
    } else {
        let code_words: Vec<Vec<String>> = codes
            .into_iter()
            .enumerate()
            .map(|(l, c)| c.unwrap_or_else(|| vec![alphabet.token(l as Letter).to_string()]))
            .collect();
        let mut out_tokens: Vec<String> = Vec::new();
        for w in &code_words {
            for t in w {
                if !out_tokens.contains(t) {
                    out_tokens.push(t.clone());
                }
            }
        }
        if out_tokens.is_empty() {
            return Err(Error::parse(0, "the output morphism erases every letter"));
        }
        let out = Alphabet::new(out_tokens).map_err(|e| Error::parse(0, e.to_string()))?;
        let imgs = code_words
            .iter()
            .map(|w| w.iter().map(|t| out.letter(t).expect("collected")).collect())
            .collect();
        Some(Morphism::new(alphabet.clone(), out, imgs)?)
    };
    SubstitutionSystem::new(sigma, start, phi, "")
}

/// Lazily expanded prefix of `σ^ω(a)`.
///
/// Invariant: `generated == σ(generated[..expanded])`, which holds because
/// `σ(a)` starts with `a`. Each step expands one more letter, so producing `n`
/// letters costs `O(n · max|σ(b)|)`.
#[derive(Debug, Clone)]
pub struct FixedPointStream {
    sigma: Morphism,
    generated: Vec<Letter>,
    expanded: usize,
    position: usize,
    budget: usize,
}

impl FixedPointStream {
    pub fn new(sigma: Morphism, start: Letter) -> Self {
        let generated = sigma.image(start).to_vec();
        FixedPointStream {
            sigma,
            generated,
            expanded: 1,
            position: 0,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn generated(&self) -> &[Letter] {
        &self.generated
    }

    /// Grows the buffer to at least `n` letters.
    pub fn ensure(&mut self, n: usize) -> Result<()> {
        if n > self.budget {
            return Err(Error::Budget {
                requested: n,
                budget: self.budget,
            });
        }
        while self.generated.len() < n {
            if self.expanded >= self.generated.len() {
                return Err(Error::FiniteSequence(self.generated.len()));
            }
            let l = self.generated[self.expanded];
            self.expanded += 1;
            let img = self.sigma.image(l);
            self.generated.extend_from_slice(img);
        }
        Ok(())
    }

    pub fn get(&mut self, i: usize) -> Result<Letter> {
        self.ensure(i + 1)?;
        Ok(self.generated[i])
    }
}

impl Iterator for FixedPointStream {
    type Item = Letter;

    fn next(&mut self) -> Option<Letter> {
        let l = self.get(self.position).ok()?;
        self.position += 1;
        Some(l)
    }
}

/// Lazily generated prefix of `φ(σ^ω(a))`.
#[derive(Debug, Clone)]
pub struct ImageStream {
    inner: FixedPointStream,
    phi: Morphism,
    generated: Vec<Letter>,
    consumed: usize,
    position: usize,
}

impl ImageStream {
    /// Letters whose descendants are all erased by `φ` are dropped from the
    /// underlying stream; they never contribute output and can dominate the
    /// raw fixed point.
    pub fn new(sys: &SubstitutionSystem) -> Self {
        let live = productive_letters(&sys.sigma, &sys.phi);
        let images = sys
            .sigma
            .images()
            .iter()
            .map(|w| w.iter().copied().filter(|&c| live[c as usize]).collect())
            .collect();
        let pruned = Morphism::endo(sys.alphabet().clone(), images).expect("same alphabet");
        ImageStream {
            inner: FixedPointStream::new(pruned, sys.start),
            phi: sys.phi.clone(),
            generated: Vec::new(),
            consumed: 0,
            position: 0,
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.inner = self.inner.with_budget(budget);
        self
    }

    pub fn output_alphabet(&self) -> &Alphabet {
        self.phi.codomain()
    }

    pub fn generated(&self) -> &[Letter] {
        &self.generated
    }

    /// Grows the image buffer to at least `n` letters. Fails when the
    /// underlying budget runs out first (the image is then finite or too
    /// sparse to produce `n` letters).
    pub fn ensure(&mut self, n: usize) -> Result<()> {
        if n > self.inner.budget {
            return Err(Error::Budget {
                requested: n,
                budget: self.inner.budget,
            });
        }
        while self.generated.len() < n {
            let l = match self.inner.get(self.consumed) {
                Ok(l) => l,
                Err(Error::Budget { .. }) | Err(Error::FiniteSequence(_)) => {
                    return Err(Error::FiniteSequence(self.generated.len()))
                }
                Err(e) => return Err(e),
            };
            self.consumed += 1;
            self.generated.extend_from_slice(self.phi.image(l));
        }
        Ok(())
    }

    pub fn get(&mut self, i: usize) -> Result<Letter> {
        self.ensure(i + 1)?;
        Ok(self.generated[i])
    }
}

impl Iterator for ImageStream {
    type Item = Letter;

    fn next(&mut self) -> Option<Letter> {
        let l = self.get(self.position).ok()?;
        self.position += 1;
        Some(l)
    }
}

/// Letters `b` with `φ(σⁿ(b)) ≠ ε` for some `n ≥ 0`.
pub fn productive_letters(sigma: &Morphism, phi: &Morphism) -> Vec<bool> {
    let n = sigma.domain().len();
    let mut live: Vec<bool> = phi.images().iter().map(|w| !w.is_empty()).collect();
    let succ = sigma.successors();
    let mut changed = true;
    while changed {
        changed = false;
        for b in 0..n {
            if !live[b] && succ[b].iter().any(|&c| live[c as usize]) {
                live[b] = true;
                changed = true;
            }
        }
    }
    live
}

/// Outcome of comparing two generated prefixes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Agreement {
    /// Number of letters compared.
    pub depth: usize,
    /// First index where the sequences differ, if any.
    pub mismatch: Option<usize>,
}

impl Agreement {
    pub fn agrees(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Compares `φ(σ^ω(a))` of two systems on the first `n` letters, by token
/// name, generating both lazily.
pub fn compare_images(a: &SubstitutionSystem, b: &SubstitutionSystem, n: usize) -> Result<Agreement> {
    let mut sa = a.image_stream();
    let mut sb = b.image_stream();
    let (oa, ob) = (a.output_alphabet().clone(), b.output_alphabet().clone());
    // Translate b's letters into a's ids once; unknown tokens never match.
    let map: Vec<Option<Letter>> = ob.letters().map(|l| oa.letter(ob.token(l))).collect();
    for i in 0..n {
        let x = sa.get(i)?;
        let y = sb.get(i)?;
        if map[y as usize] != Some(x) {
            return Ok(Agreement {
                depth: n,
                mismatch: Some(i),
            });
        }
    }
    Ok(Agreement {
        depth: n,
        mismatch: None,
    })
}

/// First `n` letters of `φ(σ^ω(a))` for a non-erasing `σ`.
pub fn fixed_point_prefix(sys: &SubstitutionSystem, n: usize) -> Result<Word> {
    if sys.sigma.is_erasing() {
        return Err(Error::Erasing);
    }
    sys.image_prefix(n)
}
