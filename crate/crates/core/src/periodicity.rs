//! Primitive roots and bounded detection of ultimate periodicity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::system::SubstitutionSystem;
use crate::words::{Letter, Word};

/// `b[m]` is the length of the longest proper border of `w[..m]`, for
/// `0 ≤ m ≤ |w|` (`b[0] = 0`).
pub fn border_table(w: &[Letter]) -> Vec<usize> {
    let mut b = vec![0usize; w.len() + 1];
    let mut k = 0usize;
    for i in 1..w.len() {
        while k > 0 && w[i] != w[k] {
            k = b[k];
        }
        if w[i] == w[k] {
            k += 1;
        }
        b[i + 1] = k;
    }
    b
}

/// Smallest period of a non-empty word.
pub fn smallest_period(w: &[Letter]) -> usize {
    w.len() - border_table(w)[w.len()]
}

/// `u = v^k` with `v` primitive.
pub fn primitive_root(u: &[Letter]) -> Result<(Word, usize)> {
    if u.is_empty() {
        return Err(Error::InvalidArgument("the empty word has no primitive root".into()));
    }
    let p = smallest_period(u);
    if u.len() % p == 0 {
        Ok((Word::from(&u[..p]), u.len() / p))
    } else {
        Ok((Word::from(u), 1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum PeriodicityCertificate {
    Periodic {
        preperiod: usize,
        period: usize,
        verified_to: usize,
    },
    /// Bounded verdict: no `(p, q)` within the caps fits the prefix.
    NoPeriodFound {
        max_preperiod: usize,
        max_period: usize,
        prefix: usize,
    },
}

impl PeriodicityCertificate {
    pub fn is_periodic(&self) -> bool {
        matches!(self, PeriodicityCertificate::Periodic { .. })
    }
}

/// Finds the least preperiod `p ≤ max_preperiod`, then the least period
/// `q ≤ max_period`, with `x[i] = x[i+q]` for `p ≤ i < N − q`.
///
/// Caps default to `N/4`.
pub fn detect_ultimate_periodicity(
    x: &[Letter],
    max_preperiod: Option<usize>,
    max_period: Option<usize>,
) -> Result<PeriodicityCertificate> {
    let n = x.len();
    let max_pre = max_preperiod.unwrap_or(n / 4);
    let max_per = max_period.unwrap_or(n / 4);
    if max_per == 0 {
        return Err(Error::InvalidArgument("max_period must be at least 1".into()));
    }
    if n < max_pre + 2 * max_per {
        return Err(Error::InvalidArgument(format!(
            "prefix of length {n} is too short for caps ({max_pre}, {max_per}); need {}",
            max_pre + 2 * max_per
        )));
    }
    // Borders of prefixes of the reversed word are borders of suffixes of x.
    let rev: Vec<Letter> = x.iter().rev().copied().collect();
    let b = border_table(&rev);
    // Suffix periods only shrink as p grows, so the first hit is minimal.
    for p in 0..=max_pre {
        let m = n - p;
        let q = m - b[m];
        if q <= max_per {
            return Ok(PeriodicityCertificate::Periodic {
                preperiod: p,
                period: q,
                verified_to: n,
            });
        }
    }
    Ok(PeriodicityCertificate::NoPeriodFound {
        max_preperiod: max_pre,
        max_period: max_per,
        prefix: n,
    })
}

/// Direct check of `x[i] = x[i+q]` for `p ≤ i < |x| − q`.
pub fn verify_periodicity_prefix(x: &[Letter], p: usize, q: usize) -> bool {
    if q == 0 {
        return false;
    }
    let mut i = p;
    while i + q < x.len() {
        if x[i] != x[i + q] {
            return false;
        }
        i += 1;
    }
    true
}

/// Streams the image of `sys` to length `n` and checks the period.
pub fn verify_periodicity(sys: &SubstitutionSystem, p: usize, q: usize, n: usize) -> Result<bool> {
    if q == 0 {
        return Ok(false);
    }
    let mut s = sys.image_stream();
    for i in p..n.saturating_sub(q) {
        if s.get(i)? != s.get(i + q)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn brute_detect(x: &[Letter], max_pre: usize, max_per: usize) -> Option<(usize, usize)> {
        for p in 0..=max_pre {
            for q in 1..=max_per {
                if (p..x.len().saturating_sub(q)).all(|i| x[i] == x[i + q]) {
                    return Some((p, q));
                }
            }
        }
        None
    }

    #[test]
    fn roots() {
        assert_eq!(primitive_root(&[0, 1, 0, 1, 0, 1]).unwrap(), (Word::from(vec![0, 1]), 3));
        assert_eq!(primitive_root(&[0, 1, 0, 0, 1]).unwrap(), (Word::from(vec![0, 1, 0, 0, 1]), 1));
        assert_eq!(primitive_root(&[0, 0, 0, 0]).unwrap(), (Word::from(vec![0]), 4));
        assert!(primitive_root(&[]).is_err());
        assert_eq!(smallest_period(&[0, 1, 0, 0, 1]), 3);
    }

    #[test]
    fn detector_examples() {
        let per = fixtures::load("per2").unwrap().unwrap().image_prefix(10_000).unwrap();
        assert_eq!(
            detect_ultimate_periodicity(&per, None, None).unwrap(),
            PeriodicityCertificate::Periodic { preperiod: 0, period: 2, verified_to: 10_000 }
        );
        let ev = fixtures::load("eventually_constant").unwrap().unwrap().image_prefix(100).unwrap();
        assert_eq!(
            detect_ultimate_periodicity(&ev, Some(10), Some(10)).unwrap(),
            PeriodicityCertificate::Periodic { preperiod: 2, period: 1, verified_to: 100 }
        );
        assert!(detect_ultimate_periodicity(&per[..10], Some(5), Some(5)).is_err());
    }

    #[test]
    fn detector_matches_brute_force_on_small_caps() {
        for name in ["thue_morse", "fibonacci", "chacon", "per3", "eventually_constant"] {
            let x = fixtures::load(name).unwrap().unwrap().image_prefix(600).unwrap();
            let got = match detect_ultimate_periodicity(&x, Some(40), Some(40)).unwrap() {
                PeriodicityCertificate::Periodic { preperiod, period, .. } => Some((preperiod, period)),
                PeriodicityCertificate::NoPeriodFound { .. } => None,
            };
            assert_eq!(got, brute_detect(&x, 40, 40), "{name}");
        }
    }

    #[test]
    fn verifier_examples() {
        let per = fixtures::load("per2").unwrap().unwrap();
        assert!(verify_periodicity(&per, 0, 2, 1_000_000).unwrap());
        assert!(!verify_periodicity(&per, 0, 3, 10).unwrap());
        let fib = fixtures::load("fibonacci").unwrap().unwrap();
        let x = fib.image_prefix(10_000).unwrap();
        for q in 1..=32 {
            for p in 0..=64 - 2 * q {
                assert!(!verify_periodicity_prefix(&x, p, q));
            }
        }
    }
}
