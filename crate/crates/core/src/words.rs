//! Alphabets, words and morphisms of free monoids.
//!
//! Letters are dense `u8` ids assigned in declaration order; display tokens
//! only matter at I/O boundaries.

use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Letter = u8;

/// Largest alphabet accepted (ids must fit in a byte).
pub const MAX_LETTERS: usize = 255;

#[derive(Debug, Clone, PartialEq, Eq)]
struct AlphabetInner {
    tokens: Vec<String>,
    index: HashMap<String, Letter>,
}

/// Ordered set of distinct tokens. Cheap to clone.
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet(Arc<AlphabetInner>);

impl Alphabet {
    pub fn new<I, S>(tokens: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        if tokens.is_empty() {
            return Err(Error::Alphabet("empty alphabet".into()));
        }
        if tokens.len() > MAX_LETTERS {
            return Err(Error::Alphabet(format!(
                "{} letters, at most {MAX_LETTERS} supported",
                tokens.len()
            )));
        }
        let mut index = HashMap::with_capacity(tokens.len());
        for (i, t) in tokens.iter().enumerate() {
            if t.is_empty() || t.chars().any(char::is_whitespace) {
                return Err(Error::Alphabet(format!("bad token {t:?}")));
            }
            if index.insert(t.clone(), i as Letter).is_some() {
                return Err(Error::Alphabet(format!("duplicate token `{t}`")));
            }
        }
        Ok(Alphabet(Arc::new(AlphabetInner { tokens, index })))
    }

    /// Alphabet `0, 1, ..., n-1`.
    pub fn numbered(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.0.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn token(&self, letter: Letter) -> &str {
        &self.0.tokens[letter as usize]
    }

    pub fn tokens(&self) -> &[String] {
        &self.0.tokens
    }

    pub fn letter(&self, token: &str) -> Option<Letter> {
        self.0.index.get(token).copied()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + Clone {
        (0..self.len()).map(|i| i as Letter)
    }

    pub fn contains(&self, letter: Letter) -> bool {
        (letter as usize) < self.len()
    }

    /// Parses whitespace-separated tokens into a word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        text.split_whitespace()
            .map(|t| self.letter(t).ok_or_else(|| Error::UnknownToken(t.into())))
            .collect::<Result<Vec<_>>>()
            .map(Word::from)
    }

    /// Renders a word; tokens are concatenated when every token is a single
    /// character, space-separated otherwise.
    pub fn render(&self, word: &[Letter]) -> String {
        let sep = if self.0.tokens.iter().all(|t| t.chars().count() == 1) {
            ""
        } else {
            " "
        };
        word.iter()
            .map(|&l| self.token(l))
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Sub-alphabet keeping `letters` in the given order.
    pub fn restrict(&self, letters: &[Letter]) -> Result<Self> {
        Self::new(letters.iter().map(|&l| self.token(l).to_string()))
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.tokens.iter()).finish()
    }
}

/// Finite word of letter ids. The empty word is allowed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn into_vec(self) -> Vec<Letter> {
        self.0
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    pub fn extend_from_slice(&mut self, s: &[Letter]) {
        self.0.extend_from_slice(s);
    }

    pub fn truncate(&mut self, n: usize) {
        self.0.truncate(n);
    }

    /// `self` repeated `k` times.
    pub fn repeat(&self, k: usize) -> Word {
        Word(self.0.repeat(k))
    }
}

impl Deref for Word {
    type Target = [Letter];
    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl From<&[Letter]> for Word {
    fn from(v: &[Letter]) -> Self {
        Word(v.to_vec())
    }
}

impl<const N: usize> From<[Letter; N]> for Word {
    fn from(v: [Letter; N]) -> Self {
        Word(v.to_vec())
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// Monoid morphism `domain* -> codomain*`, given by letter images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    domain: Alphabet,
    codomain: Alphabet,
    images: Vec<Word>,
}

impl Morphism {
    pub fn new(domain: Alphabet, codomain: Alphabet, images: Vec<Word>) -> Result<Self> {
        if images.len() != domain.len() {
            return Err(Error::AlphabetMismatch(format!(
                "{} images for {} letters",
                images.len(),
                domain.len()
            )));
        }
        for (a, img) in images.iter().enumerate() {
            if let Some(&bad) = img.iter().find(|&&l| !codomain.contains(l)) {
                return Err(Error::AlphabetMismatch(format!(
                    "image of `{}` uses letter id {bad} outside the codomain",
                    domain.token(a as Letter)
                )));
            }
        }
        Ok(Morphism {
            domain,
            codomain,
            images,
        })
    }

    /// Endomorphism from images over `alphabet`.
    pub fn endo(alphabet: Alphabet, images: Vec<Word>) -> Result<Self> {
        Self::new(alphabet.clone(), alphabet, images)
    }

    /// Endomorphism on the numbered alphabet `0..n` from raw image vectors.
    pub fn from_images(images: Vec<Vec<Letter>>) -> Result<Self> {
        let alphabet = Alphabet::numbered(images.len())?;
        Self::endo(alphabet, images.into_iter().map(Word::from).collect())
    }

    pub fn identity(alphabet: &Alphabet) -> Self {
        Morphism {
            domain: alphabet.clone(),
            codomain: alphabet.clone(),
            images: alphabet.letters().map(|l| Word::from([l])).collect(),
        }
    }

    /// Letter-to-letter map that must be onto its codomain.
    pub fn coding(domain: Alphabet, codomain: Alphabet, map: &[Letter]) -> Result<Self> {
        let m = Self::new(
            domain,
            codomain,
            map.iter().map(|&l| Word::from([l])).collect(),
        )?;
        if !m.is_coding() {
            let missing: Vec<_> = m
                .codomain
                .letters()
                .filter(|l| !map.contains(l))
                .map(|l| m.codomain.token(l).to_string())
                .collect();
            return Err(Error::NotACoding(format!(
                "codomain letters {} are not images",
                missing.join(", ")
            )));
        }
        Ok(m)
    }

    pub fn domain(&self) -> &Alphabet {
        &self.domain
    }

    pub fn codomain(&self) -> &Alphabet {
        &self.codomain
    }

    pub fn image(&self, a: Letter) -> &Word {
        &self.images[a as usize]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn is_erasing(&self) -> bool {
        self.images.iter().any(|w| w.is_empty())
    }

    pub fn is_non_erasing(&self) -> bool {
        !self.is_erasing()
    }

    pub fn is_endomorphism(&self) -> bool {
        self.domain == self.codomain
    }

    /// Every image has length one and the map is onto.
    pub fn is_coding(&self) -> bool {
        if self.images.iter().any(|w| w.len() != 1) {
            return false;
        }
        let mut hit = vec![false; self.codomain.len()];
        for w in &self.images {
            hit[w[0] as usize] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_identity(&self) -> bool {
        self.is_endomorphism()
            && self
                .images
                .iter()
                .enumerate()
                .all(|(a, w)| w.len() == 1 && w[0] as usize == a)
    }

    pub fn max_image_len(&self) -> usize {
        self.images.iter().map(|w| w.len()).max().unwrap_or(0)
    }

    /// Appends `m(w)` to `out`, without checking letters.
    pub(crate) fn apply_into(&self, w: &[Letter], out: &mut Vec<Letter>) {
        for &l in w {
            out.extend_from_slice(&self.images[l as usize]);
        }
    }

    /// Image of a word by concatenation of letter images.
    pub fn apply(&self, w: &[Letter]) -> Result<Word> {
        if let Some(&bad) = w.iter().find(|&&l| !self.domain.contains(l)) {
            return Err(Error::AlphabetMismatch(format!(
                "letter id {bad} is not in the domain ({} letters)",
                self.domain.len()
            )));
        }
        let mut out = Vec::with_capacity(w.iter().map(|&l| self.images[l as usize].len()).sum());
        self.apply_into(w, &mut out);
        Ok(Word::from(out))
    }

    /// `m^n(w)` for an endomorphism, refusing to exceed `budget` letters.
    pub fn iterate(&self, w: &[Letter], n: usize, budget: usize) -> Result<Word> {
        if !self.is_endomorphism() {
            return Err(Error::AlphabetMismatch("iterate needs an endomorphism".into()));
        }
        let mut cur = w.to_vec();
        for _ in 0..n {
            let len: usize = cur.iter().map(|&l| self.images[l as usize].len()).sum();
            if len > budget {
                return Err(Error::Budget {
                    requested: len,
                    budget,
                });
            }
            let mut next = Vec::with_capacity(len);
            self.apply_into(&cur, &mut next);
            cur = next;
        }
        Ok(Word::from(cur))
    }

    /// Letters occurring in some image, as a boolean adjacency list.
    pub(crate) fn successors(&self) -> Vec<Vec<Letter>> {
        self.images
            .iter()
            .map(|w| {
                let mut s: Vec<Letter> = w.to_vec();
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect()
    }

    /// Restriction to a sub-alphabet closed under the morphism, renumbered in
    /// the order of `letters`.
    pub fn restrict(&self, letters: &[Letter]) -> Result<Self> {
        let mut renum = vec![None; self.domain.len()];
        for (i, &l) in letters.iter().enumerate() {
            renum[l as usize] = Some(i as Letter);
        }
        let alphabet = self.domain.restrict(letters)?;
        let images = letters
            .iter()
            .map(|&l| {
                self.images[l as usize]
                    .iter()
                    .map(|&c| {
                        renum[c as usize].ok_or_else(|| {
                            Error::AlphabetMismatch(format!(
                                "sub-alphabet not closed: `{}` maps outside",
                                self.domain.token(l)
                            ))
                        })
                    })
                    .collect::<Result<Word>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Morphism::endo(alphabet, images)
    }
}

/// `second ∘ first`: the morphism `a ↦ second(first(a))`.
pub fn compose(first: &Morphism, second: &Morphism) -> Result<Morphism> {
    if first.codomain != second.domain {
        return Err(Error::AlphabetMismatch(
            "codomain of the first morphism differs from the domain of the second".into(),
        ));
    }
    let images = first
        .images
        .iter()
        .map(|w| second.apply(w))
        .collect::<Result<Vec<_>>>()?;
    Morphism::new(first.domain.clone(), second.codomain.clone(), images)
}

/// `sigma^k` for `k >= 1`, by binary powering.
pub fn power(sigma: &Morphism, k: u32) -> Result<Morphism> {
    if k == 0 {
        return Err(Error::InvalidArgument("power exponent must be >= 1".into()));
    }
    if !sigma.is_endomorphism() {
        return Err(Error::AlphabetMismatch("power needs an endomorphism".into()));
    }
    let mut result: Option<Morphism> = None;
    let mut base = sigma.clone();
    let mut e = k;
    loop {
        if e & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => compose(&r, &base)?,
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = compose(&base, &base)?;
    }
    Ok(result.expect("k >= 1"))
}
