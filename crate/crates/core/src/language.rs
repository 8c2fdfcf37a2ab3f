//! Occurrences, return words, gaps and recurrence estimates over a generated
//! prefix.
//!
//! Everything here looks at a finite prefix, so conclusions about bounded
//! gaps or recurrence are evidence, not proofs.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::normalize;
use crate::periodicity::border_table;
use crate::structure;
use crate::system::SubstitutionSystem;
use crate::words::{power, Letter, Word};

/// All positions `i` with `x[i..i+|u|] = u`, overlaps included (KMP).
pub fn occurrences(x: &[Letter], u: &[Letter]) -> Result<Vec<usize>> {
    if u.is_empty() {
        return Err(Error::InvalidArgument("cannot search for the empty word".into()));
    }
    let fail = border_table(u);
    let mut out = Vec::new();
    let mut q = 0usize;
    for (i, &c) in x.iter().enumerate() {
        while q > 0 && u[q] != c {
            q = fail[q];
        }
        if u[q] == c {
            q += 1;
        }
        if q == u.len() {
            out.push(i + 1 - u.len());
            q = fail[q];
        }
    }
    Ok(out)
}

/// Return words to `u` observed in a prefix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReturnWordIndex {
    pub u: Word,
    pub occurrences: Vec<usize>,
    /// Distinct return words, shortest first then lexicographic.
    pub return_words: Vec<Word>,
    pub max_gap: usize,
    pub prefix_len: usize,
}

impl ReturnWordIndex {
    pub fn min_len(&self) -> usize {
        self.return_words.iter().map(|w| w.len()).min().unwrap_or(0)
    }

    pub fn max_len(&self) -> usize {
        self.return_words.iter().map(|w| w.len()).max().unwrap_or(0)
    }
}

pub fn return_words(x: &[Letter], u: &[Letter]) -> Result<ReturnWordIndex> {
    let occ = occurrences(x, u)?;
    if occ.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "the word occurs {} time(s); return words need two occurrences",
            occ.len()
        )));
    }
    let mut set: HashSet<&[Letter]> = HashSet::new();
    let mut max_gap = 0;
    for w in occ.windows(2) {
        set.insert(&x[w[0]..w[1]]);
        max_gap = max_gap.max(w[1] - w[0]);
    }
    let mut words: Vec<Word> = set.into_iter().map(Word::from).collect();
    words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(ReturnWordIndex {
        u: Word::from(u),
        occurrences: occ,
        return_words: words,
        max_gap,
        prefix_len: x.len(),
    })
}

/// Largest gap between consecutive occurrences of `u` inside `x[..n]`, for
/// each checkpoint `n`. `None` where fewer than two occurrences fit.
pub fn max_gap_profile_prefix(x: &[Letter], u: &[Letter], checkpoints: &[usize]) -> Result<Vec<(usize, Option<usize>)>> {
    let last = checkpoints.iter().copied().max().unwrap_or(0).min(x.len());
    let occ = occurrences(&x[..last], u)?;
    if occ.is_empty() {
        return Err(Error::InvalidArgument("the word does not occur".into()));
    }
    Ok(checkpoints
        .iter()
        .map(|&n| {
            let inside: Vec<usize> = occ.iter().copied().filter(|&p| p + u.len() <= n).collect();
            let gap = inside.windows(2).map(|w| w[1] - w[0]).max();
            (n, gap)
        })
        .collect())
}

pub fn max_gap_profile(sys: &SubstitutionSystem, u: &[Letter], checkpoints: &[usize]) -> Result<Vec<(usize, Option<usize>)>> {
    let n = checkpoints.iter().copied().max().unwrap_or(0);
    let x = sys.image_prefix(n)?;
    max_gap_profile_prefix(&x, u, checkpoints)
}

/// Empirical linear-recurrence constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceEstimate {
    /// `max |w| / |u|` over return words `w` to tested factors `u`.
    pub l_estimate: f64,
    /// Largest number of distinct return words to one factor.
    pub k_estimate: usize,
    pub tested_lengths: (usize, usize),
    pub prefix_len: usize,
    /// The factor attaining `l_estimate`.
    pub worst_factor: Word,
}

/// Scans every factor of length `1..=n_max` occurring at least twice in `x`.
pub fn recurrence_constants_prefix(x: &[Letter], n_max: usize) -> RecurrenceEstimate {
    recurrence_constants_range(x, 1, n_max)
}

/// Same scan restricted to lengths `lo..=hi`.
pub fn recurrence_constants_range(x: &[Letter], lo: usize, hi: usize) -> RecurrenceEstimate {
    let mut est = RecurrenceEstimate {
        l_estimate: 0.0,
        k_estimate: 0,
        tested_lengths: (lo, hi),
        prefix_len: x.len(),
        worst_factor: Word::empty(),
    };
    for n in lo.max(1)..=hi.min(x.len()) {
        let mut last: HashMap<&[Letter], usize> = HashMap::new();
        let mut returns: HashMap<&[Letter], HashSet<&[Letter]>> = HashMap::new();
        for i in 0..=x.len() - n {
            let u = &x[i..i + n];
            if let Some(prev) = last.insert(u, i) {
                returns.entry(u).or_default().insert(&x[prev..i]);
            }
        }
        for (u, ws) in returns {
            let longest = ws.iter().map(|w| w.len()).max().unwrap_or(0);
            let ratio = longest as f64 / n as f64;
            if ratio > est.l_estimate {
                est.l_estimate = ratio;
                est.worst_factor = Word::from(u);
            }
            est.k_estimate = est.k_estimate.max(ws.len());
        }
    }
    est
}

pub fn recurrence_constants(sys: &SubstitutionSystem, n_max: usize, prefix_len: usize) -> Result<RecurrenceEstimate> {
    if sys.sigma().is_erasing() {
        return Err(Error::Erasing);
    }
    Ok(recurrence_constants_prefix(&sys.image_prefix(prefix_len)?, n_max))
}

/// `|u|/L ≤ |w| ≤ L|u|` for every return word `w`, and `#R(u) ≤ K`.
pub fn check_lr_bounds(index: &ReturnWordIndex, l: f64, k: usize) -> bool {
    let u = index.u.len() as f64;
    index.return_words.len() <= k
        && index
            .return_words
            .iter()
            .all(|w| u / l <= w.len() as f64 && w.len() as f64 <= l * u)
}

/// Count of words of length `≤ l` that are concatenations of return words
/// to `u` and factors of the prefix, against `(1+K)^{lL/|u|}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcatenationBound {
    pub count: usize,
    /// Same count restricted to windows inside the second half of the prefix.
    pub count_in_tail: usize,
    /// Natural log of the bound.
    pub ln_bound: f64,
    pub ok: bool,
    pub truncated: bool,
}

/// Windows are taken between occurrences of `u`, so every counted word is a
/// concatenation of return words; the empty word is included.
pub fn check_concatenation_bound(
    x: &[Letter],
    u: &[Letter],
    l: usize,
    big_l: f64,
    big_k: usize,
    max_windows: usize,
) -> Result<ConcatenationBound> {
    let occ = occurrences(x, u)?;
    let tail_start = x.len() / 2;
    let mut all: HashSet<&[Letter]> = HashSet::new();
    let mut tail: HashSet<&[Letter]> = HashSet::new();
    let mut seen = 0usize;
    let mut truncated = false;
    'outer: for (i, &p) in occ.iter().enumerate() {
        for &q in &occ[i + 1..] {
            if q - p > l {
                break;
            }
            seen += 1;
            if seen > max_windows {
                truncated = true;
                break 'outer;
            }
            all.insert(&x[p..q]);
            if p >= tail_start {
                tail.insert(&x[p..q]);
            }
        }
    }
    let count = all.len() + 1;
    let count_in_tail = tail.len() + 1;
    let ln_bound = (l as f64 * big_l / u.len() as f64) * ((1 + big_k) as f64).ln();
    Ok(ConcatenationBound {
        count,
        count_in_tail,
        ln_bound,
        ok: (count as f64).ln() <= ln_bound + 1e-12,
        truncated,
    })
}

/// Length-`n` factors of `x`.
pub fn factors(x: &[Letter], n: usize) -> BTreeSet<Word> {
    if n > x.len() {
        return BTreeSet::new();
    }
    x.windows(n).map(Word::from).collect::<HashSet<_>>().into_iter().collect()
}

/// Length-`n` factors occurring in the last `tail_fraction` of the prefix,
/// a finite stand-in for the recurrent factors.
pub fn recurrent_factors_prefix(x: &[Letter], n: usize, tail_fraction: f64) -> BTreeSet<Word> {
    let tail = ((x.len() as f64) * tail_fraction.clamp(0.0, 1.0)).round() as usize;
    factors(&x[x.len() - tail.min(x.len())..], n)
}

pub fn recurrent_factors(sys: &SubstitutionSystem, n: usize, prefix_len: usize, tail_fraction: f64) -> Result<BTreeSet<Word>> {
    Ok(recurrent_factors_prefix(&sys.image_prefix(prefix_len)?, n, tail_fraction))
}

/// Comparison of the recurrent factors of `x` with the language of the
/// sequence generated by a primitive sub-substitution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreCheck {
    pub core_letters: Vec<String>,
    pub n: usize,
    pub core_factors: usize,
    pub recurrent_factors: usize,
    /// Every factor of the core sequence is recurrent in `x` (at depth N).
    pub core_within_recurrent: bool,
    /// The two sets coincide.
    pub equal: bool,
}

/// Picks a primitive sub-substitution `C` of a power of the normalized
/// substitution, a letter `c ∈ C` with `c` a prefix of its image, and
/// compares the length-`n` factors of `ψ(τ^ω(c))` with the recurrent
/// factors of `x`.
pub fn recurrent_core_check(sys: &SubstitutionSystem, n: usize, prefix_len: usize) -> Result<CoreCheck> {
    let red = structure::reduce(sys)?;
    let tau = red.system.sigma();
    let psi = red.system.phi();
    let x = red.system.image_prefix(prefix_len)?;
    let rec = recurrent_factors_prefix(&x, n, 0.5);
    let prims = structure::primitive_sub_substitutions(tau)?;
    let core = prims
        .first()
        .ok_or_else(|| Error::Reduce("no primitive sub-substitution".into()))?;
    let restriction = core.restriction.clone().expect("computed");
    for l in 1..=(2 * restriction.domain().len() as u32).max(2) {
        let rl = power(&restriction, l)?;
        let Some(c) = rl.domain().letters().find(|&c| rl.image(c).first() == Some(&c)) else {
            continue;
        };
        let coding: Vec<Word> = core.letters.iter().map(|&b| psi.image(b).clone()).collect();
        let phi = crate::words::Morphism::new(rl.domain().clone(), psi.codomain().clone(), coding)?;
        let y_sys = SubstitutionSystem::new(rl.clone(), c, Some(phi), "core")
            .or_else(|_| {
                let sub = rl.domain().letters().filter(|&b| crate::system::reachable_from(&rl, c)[b as usize]).collect::<Vec<_>>();
                let r = rl.restrict(&sub)?;
                let cc = sub.iter().position(|&b| b == c).unwrap() as Letter;
                let coding: Vec<Word> = sub.iter().map(|&b| psi.image(core.letters[b as usize]).clone()).collect();
                let phi = crate::words::Morphism::new(r.domain().clone(), psi.codomain().clone(), coding)?;
                SubstitutionSystem::new(r, cc, Some(phi), "core")
            })?;
        let y = y_sys.image_prefix(prefix_len)?;
        // Translate into x's output ids by token.
        let out = red.system.output_alphabet();
        let yo = y_sys.output_alphabet();
        let y: Vec<Letter> = y
            .iter()
            .map(|&l| out.letter(yo.token(l)).expect("same codomain"))
            .collect();
        let core_set = factors(&y, n);
        return Ok(CoreCheck {
            core_letters: core.tokens.clone(),
            n,
            core_factors: core_set.len(),
            recurrent_factors: rec.len(),
            core_within_recurrent: core_set.is_subset(&rec),
            equal: core_set == rec,
        });
    }
    Err(Error::Reduce("no letter of the primitive part starts its own image".into()))
}

/// Normalizes if needed and returns the image prefix.
pub fn normalized_prefix(sys: &SubstitutionSystem, n: usize) -> Result<Word> {
    if sys.is_normal() {
        return sys.image_prefix(n);
    }
    normalize::normalize(sys)?.system.image_prefix(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn prefix(name: &str, n: usize) -> Word {
        fixtures::load(name).unwrap().unwrap().image_prefix(n).unwrap()
    }

    fn brute_occurrences(x: &[Letter], u: &[Letter]) -> Vec<usize> {
        (0..x.len().saturating_sub(u.len() - 1)).filter(|&i| x[i..].starts_with(u)).collect()
    }

    #[test]
    fn occurrence_examples() {
        let x = [0, 1, 0, 0, 1, 0, 1, 0];
        assert_eq!(occurrences(&x, &[0, 1, 0]).unwrap(), vec![0, 3, 5]);
        assert_eq!(occurrences(&[0, 1], &[0, 1, 0]).unwrap(), Vec::<usize>::new());
        assert_eq!(occurrences(&[0, 0, 0, 0], &[0, 0]).unwrap(), vec![0, 1, 2]);
        assert!(occurrences(&x, &[]).is_err());
        let fib = prefix("fibonacci", 3000);
        for u in [&[0u8][..], &[1, 0], &[0, 1, 0, 0, 1], &[1, 1]] {
            assert_eq!(occurrences(&fib, u).unwrap(), brute_occurrences(&fib, u));
        }
    }

    #[test]
    fn fibonacci_return_words() {
        let x = prefix("fibonacci", 10_000);
        let r = return_words(&x, &[0]).unwrap();
        assert_eq!(r.return_words, vec![Word::from(vec![0]), Word::from(vec![0, 1])]);
        let r = return_words(&x, &[0, 0]).unwrap();
        assert_eq!(r.return_words, vec![Word::from(vec![0, 0, 1]), Word::from(vec![0, 0, 1, 0, 1])]);
        // Decomposition: the words between the first and last occurrence
        // concatenate back to the prefix.
        let mut joined = Vec::new();
        for w in r.occurrences.windows(2) {
            joined.extend_from_slice(&x[w[0]..w[1]]);
        }
        assert_eq!(&joined[..], &x[r.occurrences[0]..*r.occurrences.last().unwrap()]);
    }

    #[test]
    fn periodic_return_words_and_gaps() {
        let x = prefix("per2", 1000);
        let r = return_words(&x, &[0, 1]).unwrap();
        assert_eq!(r.return_words, vec![Word::from(vec![0, 1])]);
        assert!(check_lr_bounds(&r, 1.0, 1));
        let p = max_gap_profile_prefix(&x, &[0], &[10, 100, 1000]).unwrap();
        assert!(p.iter().all(|&(_, g)| g == Some(2)));
        let fib = prefix("fibonacci", 10_000);
        let p = max_gap_profile_prefix(&fib, &[0], &[100, 1000, 10_000]).unwrap();
        assert!(p.iter().all(|&(_, g)| g == Some(2)));
    }

    #[test]
    fn lr_bounds_on_fibonacci() {
        let x = prefix("fibonacci", 10_000);
        let est = recurrence_constants_prefix(&x, 20);
        assert!(est.l_estimate <= 3.0 + 1e-12);
        let r = return_words(&x, &[0]).unwrap();
        assert!(check_lr_bounds(&r, est.l_estimate, est.k_estimate));
        assert!(!check_lr_bounds(&r, 1.0, est.k_estimate));
    }

    #[test]
    fn concatenation_counts() {
        let x = prefix("fibonacci", 10_000);
        let est = recurrence_constants_prefix(&x, 20);
        let c = check_concatenation_bound(&x, &[0, 1], 50, est.l_estimate, est.k_estimate, 1 << 24).unwrap();
        assert!(c.ok && !c.truncated);
        let c = check_concatenation_bound(&x, &[0, 1], 1, est.l_estimate, est.k_estimate, 1 << 24).unwrap();
        assert_eq!(c.count, 1);
    }

    #[test]
    fn recurrent_factor_sets() {
        let fib = prefix("fibonacci", 10_000);
        let rec = recurrent_factors_prefix(&fib, 2, 0.5);
        let expect: BTreeSet<Word> = [vec![0, 0], vec![0, 1], vec![1, 0]].into_iter().map(Word::from).collect();
        assert_eq!(rec, expect);
        let ev = prefix("eventually_constant", 1000);
        let rec = recurrent_factors_prefix(&ev, 1, 0.5);
        assert_eq!(rec, BTreeSet::from([Word::from(vec![2])]));
        let tau = prefix("tau_aaab", 100_000);
        assert_eq!(recurrent_factors_prefix(&tau, 1, 0.5).len(), 3);
    }

    #[test]
    fn core_check_on_fibonacci() {
        let fib = fixtures::load("fibonacci").unwrap().unwrap();
        let c = recurrent_core_check(&fib, 5, 20_000).unwrap();
        assert!(c.equal);
    }
}
