//! Incidence matrices and exact dominating eigenvalues.

pub mod dyadic;
pub mod matrix;
pub mod poly;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::Morphism;

pub use dyadic::Dyadic;
pub use matrix::{BoolMatrix, IntMatrix};
pub use poly::{IntPoly, Sturm};

/// Default width of isolating intervals, as `2^-bits`.
pub const DEFAULT_BITS: u32 = 256;
/// Narrowest precision accepted.
pub const MIN_BITS: u32 = 128;
/// Largest matrix whose characteristic polynomial we compute.
pub const MAX_DIM: usize = 64;

/// `M[i][j]` = number of occurrences of letter `i` in `σ(j)`.
pub fn incidence_matrix(sigma: &Morphism) -> IntMatrix {
    assert!(sigma.is_endomorphism(), "incidence matrix needs an endomorphism");
    let n = sigma.domain().len();
    let mut counts = vec![vec![0u64; n]; n];
    for (j, img) in sigma.images().iter().enumerate() {
        for &i in img.iter() {
            counts[i as usize][j] += 1;
        }
    }
    IntMatrix::from_rows(&counts)
}

/// Some power of `m` is entrywise positive (Wielandt bound `(n-1)^2 + 1`).
pub fn is_primitive(m: &IntMatrix) -> bool {
    let n = m.dim();
    if n == 0 {
        return false;
    }
    let e = ((n - 1) * (n - 1) + 1) as u64;
    m.pattern().pow(e).all_true()
}

/// A real algebraic number given by an integer polynomial and an isolating
/// interval.
///
/// `reduced` is the square-free part of `charpoly` and has exactly one root
/// in `[lo, hi]`. When the value is an integer, `exact` holds it and
/// `lo == hi`. Otherwise the root lies strictly inside and `reduced` changes
/// sign between the endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerronValue {
    charpoly: IntPoly,
    reduced: IntPoly,
    lo: Dyadic,
    hi: Dyadic,
    exact: Option<BigInt>,
    bits: u32,
}

/// Dominating eigenvalue of a non-negative integer matrix, at the default
/// precision.
pub fn dominant_eigenvalue(m: &IntMatrix) -> Result<PerronValue> {
    dominant_eigenvalue_with_bits(m, DEFAULT_BITS)
}

pub fn dominant_eigenvalue_with_bits(m: &IntMatrix, bits: u32) -> Result<PerronValue> {
    if m.dim() == 0 || m.is_zero() {
        return Err(Error::Matrix("zero matrix has no dominating eigenvalue".into()));
    }
    if !m.is_nonnegative() {
        return Err(Error::Matrix("matrix has negative entries".into()));
    }
    if m.dim() > MAX_DIM {
        return Err(Error::Matrix(format!(
            "dimension {} exceeds the supported {MAX_DIM}",
            m.dim()
        )));
    }
    PerronValue::largest_real_root(&m.charpoly(), bits)
}

impl PerronValue {
    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        let n = n.into();
        let p = IntPoly::new(vec![-n.clone(), BigInt::one()]);
        PerronValue {
            charpoly: p.clone(),
            reduced: p,
            lo: Dyadic::from_int(n.clone()),
            hi: Dyadic::from_int(n.clone()),
            exact: Some(n),
            bits: DEFAULT_BITS,
        }
    }

    /// Largest real root of `p`, isolated to width `2^-bits`.
    pub fn largest_real_root(p: &IntPoly, bits: u32) -> Result<Self> {
        let bits = bits.max(MIN_BITS);
        if p.degree().unwrap_or(0) == 0 {
            return Err(Error::Matrix("constant polynomial has no roots".into()));
        }
        let reduced = p.squarefree();
        let sturm = Sturm::new(&reduced);
        let bound = Dyadic::from_int(reduced.root_bound());
        let mut lo = Dyadic::from_int(-reduced.root_bound());
        let mut hi = bound;
        if sturm.count(&lo, &hi) == 0 {
            return Err(Error::Matrix(format!("{p} has no real root")));
        }
        let one = Dyadic::from_int(1);
        // Keep the largest root in (lo, hi] until it is alone and the
        // interval is at most 1 wide.
        while sturm.count(&lo, &hi) > 1 || hi.sub(&lo) > one {
            let mid = lo.midpoint(&hi);
            if sturm.count(&mid, &hi) >= 1 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Self::from_isolated(p.clone(), reduced, sturm, lo, hi, bits)
    }

    /// Finishes isolation given one root of `reduced` in `(lo, hi]`.
    fn from_isolated(
        charpoly: IntPoly,
        reduced: IntPoly,
        sturm: Sturm,
        mut lo: Dyadic,
        mut hi: Dyadic,
        bits: u32,
    ) -> Result<Self> {
        // A root of a monic integer polynomial is an algebraic integer, so a
        // rational root is an integer; test the candidates in (lo, hi].
        if reduced.leading().is_some_and(|l| l.abs().is_one()) {
            let mut m = hi.floor();
            while Dyadic::from_int(m.clone()) > lo {
                if reduced.eval_int(&m).is_zero() {
                    return Ok(PerronValue {
                        charpoly,
                        reduced,
                        lo: Dyadic::from_int(m.clone()),
                        hi: Dyadic::from_int(m.clone()),
                        exact: Some(m),
                        bits,
                    });
                }
                m -= 1;
            }
        }
        // Make both endpoints non-roots so the sign test is valid.
        while reduced.sign_at(&lo) == Ordering::Equal || reduced.sign_at(&hi) == Ordering::Equal {
            let mid = lo.midpoint(&hi);
            if sturm.count(&mid, &hi) >= 1 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut v = PerronValue {
            charpoly,
            reduced,
            lo,
            hi,
            exact: None,
            bits: 0,
        };
        v.refine_to(bits);
        Ok(v)
    }

    /// Narrows the interval to width at most `2^-bits` by sign bisection.
    pub fn refine_to(&mut self, bits: u32) {
        if self.exact.is_some() {
            self.bits = self.bits.max(bits);
            return;
        }
        let target = Dyadic::ulp(bits);
        let s_lo = self.reduced.sign_at(&self.lo);
        while self.hi.sub(&self.lo) > target {
            let mid = self.lo.midpoint(&self.hi);
            match self.reduced.sign_at(&mid) {
                Ordering::Equal => unreachable!("non-integer algebraic integer cannot be dyadic"),
                s if s == s_lo => self.lo = mid,
                _ => self.hi = mid,
            }
        }
        self.bits = self.bits.max(bits);
    }

    pub fn refined(&self, bits: u32) -> Self {
        let mut v = self.clone();
        v.refine_to(bits);
        v
    }

    pub fn charpoly(&self) -> &IntPoly {
        &self.charpoly
    }

    /// Square-free polynomial vanishing at the value.
    pub fn reduced(&self) -> &IntPoly {
        &self.reduced
    }

    pub fn interval(&self) -> (&Dyadic, &Dyadic) {
        (&self.lo, &self.hi)
    }

    pub fn exact(&self) -> Option<&BigInt> {
        self.exact.as_ref()
    }

    pub fn is_integer(&self) -> bool {
        self.exact.is_some()
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn to_f64(&self) -> f64 {
        self.lo.midpoint(&self.hi).to_f64()
    }

    /// Decimal approximation with `digits` fractional digits.
    pub fn approx(&self, digits: usize) -> String {
        match &self.exact {
            Some(n) => n.to_string(),
            None => self.lo.midpoint(&self.hi).to_decimal(digits),
        }
    }

    /// Exact comparison. Equal values are detected through a common factor
    /// of the two polynomials having a root in both intervals.
    pub fn compare(&self, other: &PerronValue) -> Ordering {
        if let (Some(a), Some(b)) = (&self.exact, &other.exact) {
            return a.cmp(b);
        }
        let mut a = self.clone();
        let mut b = other.clone();
        if a.exact.is_none() && b.exact.is_none() && shared_root(&a, &b) {
            return Ordering::Equal;
        }
        loop {
            if a.hi < b.lo {
                return Ordering::Less;
            }
            if b.hi < a.lo {
                return Ordering::Greater;
            }
            if a.exact.is_none() && b.exact.is_none() && shared_root(&a, &b) {
                return Ordering::Equal;
            }
            let bits = a.bits.max(b.bits) + 64;
            a.refine_to(bits);
            b.refine_to(bits);
        }
    }

    pub fn eq_value(&self, other: &PerronValue) -> bool {
        self.compare(other) == Ordering::Equal
    }

    pub fn cmp_integer(&self, n: i64) -> Ordering {
        self.compare(&PerronValue::from_integer(n))
    }

    /// `self^k` as the dominating root of the companion matrix power. Needs a
    /// positive value.
    pub fn pow(&self, k: u32) -> Result<PerronValue> {
        if k == 0 {
            return Err(Error::InvalidArgument("exponent must be >= 1".into()));
        }
        if let Some(n) = &self.exact {
            let mut v = PerronValue::from_integer(num_traits::pow(n.clone(), k as usize));
            v.bits = self.bits;
            return Ok(v);
        }
        if k == 1 {
            return Ok(self.clone());
        }
        let mut base = self.clone();
        while !base.lo.numer().is_positive() {
            let bits = base.bits + 32;
            base.refine_to(bits);
            if base.hi.numer().is_negative() || base.hi.numer().is_zero() {
                return Err(Error::InvalidArgument("power of a non-positive value".into()));
            }
        }
        let comp = IntMatrix::companion(&self.reduced);
        let pk = comp.pow(k).charpoly();
        let reduced = pk.squarefree();
        let sturm = Sturm::new(&reduced);
        loop {
            let lo = base.lo.pow(k);
            let hi = base.hi.pow(k);
            if sturm.count(&lo, &hi) == 1 {
                return Self::from_isolated(pk, reduced, sturm, lo, hi, self.bits);
            }
            let bits = base.bits + 32;
            base.refine_to(bits);
        }
    }
}

/// The two values coincide: their polynomials share a factor with a root in
/// the intersection of the (open) intervals.
fn shared_root(a: &PerronValue, b: &PerronValue) -> bool {
    let lo = if a.lo > b.lo { &a.lo } else { &b.lo };
    let hi = if a.hi < b.hi { &a.hi } else { &b.hi };
    if lo >= hi {
        return false;
    }
    let g = IntPoly::gcd(&a.reduced, &b.reduced);
    if g.degree().unwrap_or(0) == 0 {
        return false;
    }
    Sturm::new(&g).count(lo, hi) >= 1
}

impl fmt::Display for PerronValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(n) => write!(f, "{n}"),
            None => write!(f, "{} (root of {})", self.approx(15), self.reduced),
        }
    }
}

/// JSON form: exact integers and dyadic endpoints as decimal strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct PerronRepr {
    approx: String,
    exact: Option<String>,
    charpoly: Vec<String>,
    reduced: Vec<String>,
    interval: [String; 2],
    bits: u32,
}

impl Serialize for PerronValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PerronRepr {
            approx: self.approx(30),
            exact: self.exact.as_ref().map(|n| n.to_string()),
            charpoly: self.charpoly.to_strings(),
            reduced: self.reduced.to_strings(),
            interval: [self.lo.to_rational_string(), self.hi.to_rational_string()],
            bits: self.bits,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PerronValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = PerronRepr::deserialize(d)?;
        let bad = |what: &str| D::Error::custom(format!("invalid {what}"));
        Ok(PerronValue {
            charpoly: IntPoly::from_strings(&r.charpoly).ok_or_else(|| bad("charpoly"))?,
            reduced: IntPoly::from_strings(&r.reduced).ok_or_else(|| bad("reduced"))?,
            lo: Dyadic::parse_rational(&r.interval[0]).ok_or_else(|| bad("interval"))?,
            hi: Dyadic::parse_rational(&r.interval[1]).ok_or_else(|| bad("interval"))?,
            exact: match r.exact {
                Some(s) => Some(s.parse().map_err(|_| bad("exact"))?),
                None => None,
            },
            bits: r.bits,
        })
    }
}

/// Power-iteration estimate of the spectral radius, for cross-checks only.
pub fn power_iteration_estimate(m: &IntMatrix, steps: usize) -> f64 {
    let n = m.dim();
    let mut v = vec![1.0f64; n];
    let mut est = 0.0;
    let a: Vec<Vec<f64>> = m
        .rows()
        .iter()
        .map(|r| r.iter().map(|x| x.to_f64().unwrap_or(f64::MAX)).collect())
        .collect();
    for _ in 0..steps {
        let w: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| a[i][j] * v[j]).sum::<f64>() + 1e-300)
            .collect();
        let norm = w.iter().cloned().fold(0.0, f64::max);
        if norm == 0.0 {
            return 0.0;
        }
        let prev: f64 = v.iter().cloned().fold(0.0, f64::max);
        est = norm / prev;
        v = w.into_iter().map(|x| x / norm).collect();
    }
    est
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib() -> IntMatrix {
        IntMatrix::from_rows(&[vec![1, 1], vec![1, 0]])
    }

    #[test]
    fn incidence_of_known_substitutions() {
        let fib_sub = Morphism::from_images(vec![vec![0, 1], vec![0]]).unwrap();
        assert_eq!(incidence_matrix(&fib_sub), fib());
        let tau = Morphism::from_images(vec![vec![0, 0, 0, 1], vec![1, 2], vec![2, 1]]).unwrap();
        let m = incidence_matrix(&tau);
        assert_eq!(m, IntMatrix::from_rows(&[vec![3, 0, 0], vec![1, 1, 1], vec![0, 1, 1]]));
        for j in 0..3 {
            assert_eq!(m.col_sum(j), BigInt::from(tau.image(j as u8).len()));
        }
        let id = Morphism::from_images(vec![vec![0], vec![1]]).unwrap();
        assert_eq!(incidence_matrix(&id), IntMatrix::identity(2));
    }

    #[test]
    fn golden_ratio() {
        let v = dominant_eigenvalue(&fib()).unwrap();
        assert_eq!(v.charpoly(), &IntPoly::from_i64(&[-1, -1, 1]));
        assert!(v.exact().is_none());
        assert!((v.to_f64() - 1.618033988749895).abs() < 1e-12);
        let (lo, hi) = v.interval();
        assert!(hi.sub(lo) <= Dyadic::ulp(256));
        // Independent oracle: 40 digits of (1+√5)/2.
        assert_eq!(v.approx(40), "1.6180339887498948482045868343656381177203");
    }

    #[test]
    fn integer_roots_are_exact() {
        let tau = IntMatrix::from_rows(&[vec![3, 0, 0], vec![1, 1, 1], vec![0, 1, 1]]);
        assert_eq!(dominant_eigenvalue(&tau).unwrap().exact(), Some(&BigInt::from(3)));
        let ones = IntMatrix::from_rows(&[vec![1, 1], vec![1, 1]]);
        assert_eq!(dominant_eigenvalue(&ones).unwrap().exact(), Some(&BigInt::from(2)));
        assert_eq!(
            dominant_eigenvalue(&IntMatrix::identity(3)).unwrap().exact(),
            Some(&BigInt::from(1))
        );
        let nil = IntMatrix::from_rows(&[vec![0, 1], vec![0, 0]]);
        assert_eq!(dominant_eigenvalue(&nil).unwrap().exact(), Some(&BigInt::from(0)));
        assert!(dominant_eigenvalue(&IntMatrix::zeros(2)).is_err());
    }

    #[test]
    fn primitivity() {
        assert!(is_primitive(&fib()));
        assert!(!is_primitive(&IntMatrix::identity(2)));
        let tau = IntMatrix::from_rows(&[vec![3, 0, 0], vec![1, 1, 1], vec![0, 1, 1]]);
        assert!(!is_primitive(&tau));
        // Irreducible but periodic.
        assert!(!is_primitive(&IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]])));
    }

    #[test]
    fn comparisons_are_exact() {
        let phi = dominant_eigenvalue(&fib()).unwrap();
        let phi2 = dominant_eigenvalue(&fib().pow(2)).unwrap();
        assert_eq!(phi.compare(&phi2), Ordering::Less);
        assert!(phi.pow(2).unwrap().eq_value(&phi2));
        // Same value from a different polynomial: x^3 - 2x^2 + 1 = (x-1)(x^2-x-1).
        let other = PerronValue::largest_real_root(&IntPoly::from_i64(&[1, 0, -2, 1]), 256).unwrap();
        assert!(phi.eq_value(&other));
        assert_eq!(phi.cmp_integer(2), Ordering::Less);
        assert_eq!(phi.cmp_integer(1), Ordering::Greater);
        assert_eq!(PerronValue::from_integer(4).compare(&PerronValue::from_integer(3)), Ordering::Greater);
    }

    #[test]
    fn powers_track_intervals() {
        let phi = dominant_eigenvalue(&fib()).unwrap();
        let p5 = phi.pow(5).unwrap();
        // phi^5 = (11 + 5√5)/2
        assert!((p5.to_f64() - 11.090169943749474).abs() < 1e-12);
        assert!(p5.eq_value(&dominant_eigenvalue(&fib().pow(5)).unwrap()));
        assert_eq!(PerronValue::from_integer(3).pow(4).unwrap().exact(), Some(&BigInt::from(81)));
    }

    #[test]
    fn serde_round_trip() {
        let phi = dominant_eigenvalue(&fib()).unwrap();
        let s = serde_json::to_string(&phi).unwrap();
        let back: PerronValue = serde_json::from_str(&s).unwrap();
        assert_eq!(back, phi);
    }

    #[test]
    fn power_iteration_agrees_on_primitive() {
        let phi = dominant_eigenvalue(&fib()).unwrap();
        assert!((power_iteration_estimate(&fib(), 200) - phi.to_f64()).abs() < 1e-9);
    }
}
