//! Dense univariate polynomials with big-integer coefficients, plus the
//! exact machinery for real-root work: primitive-PRS gcd, square-free part
//! and Sturm sequences evaluated at dyadic points.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::dyadic::Dyadic;

/// Coefficients are stored lowest degree first with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Sign of `p(x)` at a dyadic point, computed exactly.
    pub fn sign_at(&self, x: &Dyadic) -> Ordering {
        let Some(d) = self.degree() else {
            return Ordering::Equal;
        };
        // 2^(e·d) p(n/2^e) = Σ c_i n^i 2^(e(d-i)), evaluated by Horner.
        let n = x.numer();
        let e = x.exp() as usize;
        let mut acc = BigInt::zero();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            acc = acc * n + (c << (e * (d - i)));
        }
        acc.sign().cmp_zero()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().is_some_and(Signed::is_negative) {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Divides out the positive content only, keeping every sign.
    fn positive_scaled(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let g = self.content();
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) · a mod b`.
    fn prem(a: &Self, b: &Self) -> (Self, u32) {
        let db = b.degree().expect("division by zero polynomial");
        let lb = b.leading().unwrap().clone();
        let mut r = a.coeffs.clone();
        let mut steps = 0u32;
        while r.len() > db && !r.is_empty() {
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (i, bc) in b.coeffs.iter().enumerate() {
                r[dr - db + i] -= &lr * bc;
            }
            steps += 1;
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        // Bring the multiplier to the canonical exponent.
        let full = match a.degree() {
            Some(da) if da >= db => (da - db + 1) as u32,
            _ => 0,
        };
        for _ in steps..full {
            for c in r.iter_mut() {
                *c *= &lb;
            }
        }
        (Self::new(r), full)
    }

    /// Remainder of `a` by `b` up to a positive constant factor.
    fn positive_rem(a: &Self, b: &Self) -> Self {
        let (r, e) = Self::prem(a, b);
        let lb_neg = b.leading().unwrap().is_negative();
        let r = if lb_neg && e % 2 == 1 { r.neg() } else { r };
        r.positive_scaled()
    }

    /// Monic-up-to-content gcd over the rationals (primitive, positive lead).
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let mut x = a.primitive_part();
        let mut y = b.primitive_part();
        if x.degree() < y.degree() {
            std::mem::swap(&mut x, &mut y);
        }
        while !y.is_zero() {
            let r = Self::prem(&x, &y).0.primitive_part();
            x = y;
            y = r;
        }
        x
    }

    /// Exact quotient over the rationals, returned as a primitive polynomial.
    pub fn div_exact(a: &Self, b: &Self) -> Self {
        let db = b.degree().expect("division by zero polynomial");
        let lb = BigRational::from(b.leading().unwrap().clone());
        let mut r: Vec<BigRational> = a.coeffs.iter().cloned().map(BigRational::from).collect();
        let Some(da) = a.degree() else {
            return Self::zero();
        };
        if da < db {
            return Self::zero();
        }
        let mut q = vec![BigRational::zero(); da - db + 1];
        for i in (0..=da - db).rev() {
            let c = &r[i + db] / &lb;
            for (j, bc) in b.coeffs.iter().enumerate() {
                r[i + j] -= &c * BigRational::from(bc.clone());
            }
            q[i] = c;
        }
        debug_assert!(r.iter().all(Zero::is_zero), "inexact division");
        let lcm = q
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        Self::new(q.iter().map(|c| c.numer() * (&lcm / c.denom())).collect()).primitive_part()
    }

    /// Square-free part `p / gcd(p, p')`.
    pub fn squarefree(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.primitive_part();
        }
        let g = Self::gcd(self, &self.derivative());
        if g.degree() == Some(0) {
            self.primitive_part()
        } else {
            Self::div_exact(self, &g)
        }
    }

    /// Integer strictly above the modulus of every root.
    pub fn root_bound(&self) -> BigInt {
        let lead = self.leading().expect("zero polynomial").abs();
        let max = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero);
        BigInt::one() + max.div_ceil(&lead) + BigInt::one()
    }

    /// Coefficients as decimal strings, lowest degree first.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    pub fn from_strings(s: &[String]) -> Option<Self> {
        s.iter()
            .map(|c| c.parse::<BigInt>().ok())
            .collect::<Option<Vec<_>>>()
            .map(Self::new)
    }
}

trait SignExt {
    fn cmp_zero(self) -> Ordering;
}

impl SignExt for num_bigint::Sign {
    fn cmp_zero(self) -> Ordering {
        match self {
            num_bigint::Sign::Minus => Ordering::Less,
            num_bigint::Sign::NoSign => Ordering::Equal,
            num_bigint::Sign::Plus => Ordering::Greater,
        }
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = i == 0 || !abs.is_one();
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Sturm sequence of a square-free polynomial.
#[derive(Debug, Clone)]
pub struct Sturm {
    seq: Vec<IntPoly>,
}

impl Sturm {
    pub fn new(p: &IntPoly) -> Self {
        let mut seq = vec![p.positive_scaled(), p.derivative().positive_scaled()];
        while !seq.last().unwrap().is_zero() && seq.last().unwrap().degree() != Some(0) {
            let n = seq.len();
            let r = IntPoly::positive_rem(&seq[n - 2], &seq[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        if seq.last().is_some_and(IntPoly::is_zero) {
            seq.pop();
        }
        Sturm { seq }
    }

    fn sign_changes(&self, x: &Dyadic) -> usize {
        let mut last = Ordering::Equal;
        let mut changes = 0;
        for p in &self.seq {
            let s = p.sign_at(x);
            if s == Ordering::Equal {
                continue;
            }
            if last != Ordering::Equal && s != last {
                changes += 1;
            }
            last = s;
        }
        changes
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count(&self, a: &Dyadic, b: &Dyadic) -> usize {
        self.sign_changes(a).saturating_sub(self.sign_changes(b))
    }
}
