//! Multiplicative independence of dominating eigenvalues.
//!
//! Integers are decided exactly. Perron values are searched up to a bound,
//! with every claimed relation certified by exact arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::spectral::{IntPoly, PerronValue};

pub const DEFAULT_BOUND: u32 = 64;

/// How a relation `α^k = β^l` was established.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub statement: String,
    /// Common factor of the two powered polynomials whose root lies in both
    /// isolating intervals. Absent for the integer identity.
    pub common_factor: Option<Vec<String>>,
    pub bits: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum IndependenceVerdict {
    Dependent { k: u32, l: u32, certificate: Certificate },
    /// Exact and unbounded.
    Independent,
    /// No relation with `max(k, l) ≤ bound`.
    IndependentUpTo { bound: u32 },
}

impl IndependenceVerdict {
    pub fn is_dependent(&self) -> bool {
        matches!(self, IndependenceVerdict::Dependent { .. })
    }

    /// The verdict for the arguments in the other order.
    pub fn swapped(&self) -> Self {
        match self {
            IndependenceVerdict::Dependent { k, l, certificate } => IndependenceVerdict::Dependent {
                k: *l,
                l: *k,
                certificate: certificate.clone(),
            },
            v => v.clone(),
        }
    }
}

/// `r` with `a` and `b` both powers of `r`, if one exists.
fn common_base(a: &BigInt, b: &BigInt) -> Option<BigInt> {
    let (mut a, mut b) = (a.clone(), b.clone());
    loop {
        if a == b {
            return Some(a);
        }
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        if !b.is_multiple_of(&a) {
            return None;
        }
        b /= &a;
    }
}

fn log_base(r: &BigInt, mut n: BigInt) -> u32 {
    let mut e = 0;
    while n > BigInt::one() {
        n /= r;
        e += 1;
    }
    e
}

/// Exact decision for integers `p, q ≥ 2`. Dependent relations are minimal.
pub fn integer_mult_indep(p: &BigInt, q: &BigInt) -> Result<IndependenceVerdict> {
    let two = BigInt::from(2);
    if p < &two || q < &two {
        return Err(Error::InvalidArgument(format!("need integers >= 2, got {p} and {q}")));
    }
    let Some(r) = common_base(p, q) else {
        return Ok(IndependenceVerdict::Independent);
    };
    let s = log_base(&r, p.clone());
    let t = log_base(&r, q.clone());
    let g = s.gcd(&t);
    let (k, l) = (t / g, s / g);
    Ok(IndependenceVerdict::Dependent {
        k,
        l,
        certificate: Certificate {
            statement: format!("{p}^{k} = {q}^{l} = {r}^{}", s * k),
            common_factor: None,
            bits: 0,
        },
    })
}

/// Continued-fraction convergents `(num, den)` of `x ≥ 0` with both terms
/// at most `bound`.
pub fn convergents(x: f64, bound: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let (mut h0, mut h1) = (0u64, 1u64);
    let (mut k0, mut k1) = (1u64, 0u64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if !a.is_finite() || a > bound as f64 {
            break;
        }
        let a = a as u64;
        let h = a * h1 + h0;
        let k = a * k1 + k0;
        if h > bound as u64 || k > bound as u64 {
            break;
        }
        if h > 0 {
            out.push((h as u32, k as u32));
        }
        (h0, h1, k0, k1) = (h1, h, k1, k);
        let frac = r - a as f64;
        if frac < 1e-12 {
            break;
        }
        r = 1.0 / frac;
    }
    out
}

/// Candidate `(k, l)` with `k ln α ≈ l ln β`, ordered by `k` then `l`.
fn candidates(ln_a: f64, ln_b: f64, bound: u32) -> Vec<(u32, u32)> {
    let ratio = ln_a / ln_b;
    let mut c: Vec<(u32, u32)> = convergents(ratio, bound).into_iter().map(|(l, k)| (k, l)).collect();
    if bound <= 16 {
        for k in 1..=bound {
            for l in 1..=bound {
                c.push((k, l));
            }
        }
    }
    // Every exact relation has l = round(k · ratio), so this row scan
    // catches anything the convergents could miss through rounding.
    for k in 1..=bound {
        let l = (k as f64 * ratio).round();
        if l >= 1.0 && l <= bound as f64 {
            c.push((k, l as u32));
        }
    }
    let scale = ln_a.abs().max(ln_b.abs());
    c.retain(|&(k, l)| (k as f64 * ln_a - l as f64 * ln_b).abs() <= 1e-8 * scale * k.max(l) as f64);
    c.sort_unstable();
    c.dedup();
    c
}

fn exact_relation(alpha: &PerronValue, beta: &PerronValue, k: u32, l: u32) -> Result<Option<Certificate>> {
    let ak = alpha.pow(k)?;
    let bl = beta.pow(l)?;
    if ak.compare(&bl) != Ordering::Equal {
        return Ok(None);
    }
    let common = match (ak.exact(), bl.exact()) {
        (Some(_), Some(_)) => None,
        _ => Some(IntPoly::gcd(ak.reduced(), bl.reduced()).to_strings()),
    };
    Ok(Some(Certificate {
        statement: format!("alpha^{k} = beta^{l} = {}", ak.approx(20)),
        common_factor: common,
        bits: ak.bits().max(bl.bits()),
    }))
}

/// Bounded search over `1 ≤ k, l ≤ bound` without the integer shortcut.
pub fn perron_search(alpha: &PerronValue, beta: &PerronValue, bound: u32) -> Result<IndependenceVerdict> {
    for (k, l) in candidates(alpha.to_f64().ln(), beta.to_f64().ln(), bound) {
        if let Some(certificate) = exact_relation(alpha, beta, k, l)? {
            return Ok(IndependenceVerdict::Dependent { k, l, certificate });
        }
    }
    Ok(IndependenceVerdict::IndependentUpTo { bound })
}

/// Independence of two Perron values `> 1`. Two integers take the exact
/// path; otherwise the verdict is bounded by `bound`.
pub fn perron_mult_indep(alpha: &PerronValue, beta: &PerronValue, bound: u32) -> Result<IndependenceVerdict> {
    if bound == 0 {
        return Err(Error::InvalidArgument("bound must be at least 1".into()));
    }
    for v in [alpha, beta] {
        if v.cmp_integer(1) != Ordering::Greater {
            return Err(Error::InvalidArgument(format!("value {} is not > 1", v.approx(10))));
        }
    }
    if let (Some(p), Some(q)) = (alpha.exact(), beta.exact()) {
        return integer_mult_indep(p, q);
    }
    perron_search(alpha, beta, bound)
}

/// Exponent-vector oracle used in tests: `p` and `q` are dependent iff their
/// prime exponent vectors are proportional.
#[cfg(test)]
pub(crate) fn signature_dependent(p: u64, q: u64) -> Option<(u32, u32)> {
    fn factor(mut n: u64) -> std::collections::BTreeMap<u64, u32> {
        let mut f = std::collections::BTreeMap::new();
        let mut d = 2;
        while d * d <= n {
            while n % d == 0 {
                *f.entry(d).or_insert(0) += 1;
                n /= d;
            }
            d += 1;
        }
        if n > 1 {
            *f.entry(n).or_insert(0) += 1;
        }
        f
    }
    let (fp, fq) = (factor(p), factor(q));
    if fp.keys().ne(fq.keys()) {
        return None;
    }
    let (p0, q0) = (*fp.values().next()?, *fq.values().next()?);
    let g = p0.gcd(&q0);
    let (k, l) = (q0 / g, p0 / g);
    fp.iter()
        .all(|(pr, &e)| e * k == fq[pr] * l)
        .then_some((k, l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{dominant_eigenvalue, IntMatrix};

    fn int(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn golden() -> PerronValue {
        dominant_eigenvalue(&IntMatrix::from_rows(&[vec![1i64, 1], vec![1, 0]])).unwrap()
    }

    #[test]
    fn integer_examples() {
        match integer_mult_indep(&int(4), &int(8)).unwrap() {
            IndependenceVerdict::Dependent { k, l, .. } => assert_eq!((k, l), (3, 2)),
            v => panic!("{v:?}"),
        }
        assert_eq!(integer_mult_indep(&int(2), &int(3)).unwrap(), IndependenceVerdict::Independent);
        assert_eq!(integer_mult_indep(&int(6), &int(12)).unwrap(), IndependenceVerdict::Independent);
        assert!(integer_mult_indep(&int(1), &int(3)).is_err());
        match integer_mult_indep(&int(7), &int(7)).unwrap() {
            IndependenceVerdict::Dependent { k, l, .. } => assert_eq!((k, l), (1, 1)),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn integer_path_matches_factorization() {
        for p in 2..200u64 {
            for q in 2..60u64 {
                let got = match integer_mult_indep(&int(p as i64), &int(q as i64)).unwrap() {
                    IndependenceVerdict::Dependent { k, l, .. } => Some((k, l)),
                    _ => None,
                };
                assert_eq!(got, signature_dependent(p, q), "{p} {q}");
            }
        }
    }

    #[test]
    fn convergents_of_known_ratios() {
        assert_eq!(convergents(1.5, 64), vec![(1, 1), (3, 2)]);
        let c = convergents(std::f64::consts::PI, 400);
        assert!(c.contains(&(22, 7)) && c.contains(&(355, 113)));
    }

    #[test]
    fn perron_examples() {
        let a = golden();
        let b = dominant_eigenvalue(&IntMatrix::from_rows(&[vec![2i64, 1], vec![1, 1]])).unwrap();
        match perron_mult_indep(&a, &b, 64).unwrap() {
            IndependenceVerdict::Dependent { k, l, certificate } => {
                assert_eq!((k, l), (2, 1));
                assert!(certificate.common_factor.is_some());
            }
            v => panic!("{v:?}"),
        }
        assert_eq!(
            perron_mult_indep(&a, &PerronValue::from_integer(3), 64).unwrap(),
            IndependenceVerdict::IndependentUpTo { bound: 64 }
        );
        assert_eq!(
            perron_mult_indep(&PerronValue::from_integer(2), &PerronValue::from_integer(3), 64).unwrap(),
            IndependenceVerdict::Independent
        );
        match perron_mult_indep(&a, &a, 64).unwrap() {
            IndependenceVerdict::Dependent { k, l, .. } => assert_eq!((k, l), (1, 1)),
            v => panic!("{v:?}"),
        }
        assert!(perron_mult_indep(&PerronValue::from_integer(1), &a, 64).is_err());
    }

    #[test]
    fn sqrt_two_against_two() {
        // x^2 - 2 has dominant root sqrt 2; (sqrt 2)^2 = 2.
        let s = PerronValue::largest_real_root(&IntPoly::from_i64(&[-2, 0, 1]), 256).unwrap();
        match perron_mult_indep(&s, &PerronValue::from_integer(2), 64).unwrap() {
            IndependenceVerdict::Dependent { k, l, .. } => assert_eq!((k, l), (2, 1)),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn small_bound_uses_grid() {
        let a = golden();
        let b = a.pow(5).unwrap();
        match perron_mult_indep(&a, &b, 8).unwrap() {
            IndependenceVerdict::Dependent { k, l, .. } => assert_eq!((k, l), (5, 1)),
            v => panic!("{v:?}"),
        }
        assert_eq!(
            perron_mult_indep(&a, &b, 4).unwrap(),
            IndependenceVerdict::IndependentUpTo { bound: 4 }
        );
    }
}
