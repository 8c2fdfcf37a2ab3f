//! Exact dyadic rationals `num / 2^exp`, used as interval endpoints.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone)]
pub struct Dyadic {
    num: BigInt,
    exp: u32,
}

impl Dyadic {
    pub fn new(num: BigInt, exp: u32) -> Self {
        let mut d = Dyadic { num, exp };
        d.normalize();
        d
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic {
            num: n.into(),
            exp: 0,
        }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        while self.exp > 0 && self.num.is_even() {
            self.num >>= 1u32;
            self.exp -= 1;
        }
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn exp(&self) -> u32 {
        self.exp
    }

    /// Numerator after rescaling to denominator `2^exp` (`exp >= self.exp`).
    pub(crate) fn scaled_num(&self, exp: u32) -> BigInt {
        &self.num << (exp - self.exp)
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let e = self.exp.max(other.exp);
        Dyadic::new(self.scaled_num(e) + other.scaled_num(e), e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        let e = self.exp.max(other.exp);
        Dyadic::new(self.scaled_num(e) - other.scaled_num(e), e)
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.num * &other.num, self.exp + other.exp)
    }

    pub fn pow(&self, k: u32) -> Dyadic {
        Dyadic::new(num_traits::pow(self.num.clone(), k as usize), self.exp * k)
    }

    pub fn midpoint(&self, other: &Dyadic) -> Dyadic {
        let s = self.add(other);
        Dyadic::new(s.num, s.exp + 1)
    }

    /// `2^-bits`.
    pub fn ulp(bits: u32) -> Dyadic {
        Dyadic::new(BigInt::one(), bits)
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    pub fn floor(&self) -> BigInt {
        self.num.div_floor(&(BigInt::one() << self.exp))
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.num.clone(), BigInt::one() << self.exp)
    }

    pub fn to_f64(&self) -> f64 {
        // Shift so the numerator keeps ~64 significant bits before converting.
        let bits = self.num.bits() as i64;
        let shift = (bits - 64).max(0);
        let n = (&self.num >> shift as usize).to_f64().unwrap_or(f64::NAN);
        n * 2f64.powi((shift - self.exp as i64) as i32)
    }

    /// Decimal expansion truncated to `digits` fractional digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let neg = self.num.is_negative();
        let abs = self.num.abs();
        let scale = num_traits::pow(BigInt::from(10), digits);
        let scaled: BigInt = (abs * scale) >> self.exp;
        let s = scaled.to_string();
        let s = if s.len() <= digits {
            format!("{}{}", "0".repeat(digits + 1 - s.len()), s)
        } else {
            s
        };
        let (int, frac) = s.split_at(s.len() - digits);
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }

    /// `num/den` string with exact value.
    pub fn to_rational_string(&self) -> String {
        if self.exp == 0 {
            self.num.to_string()
        } else {
            format!("{}/{}", self.num, BigInt::one() << self.exp)
        }
    }

    /// Parses the output of [`Dyadic::to_rational_string`].
    pub fn parse_rational(s: &str) -> Option<Dyadic> {
        match s.split_once('/') {
            None => s.trim().parse::<BigInt>().ok().map(Dyadic::from_int),
            Some((n, d)) => {
                let num: BigInt = n.trim().parse().ok()?;
                let den: BigInt = d.trim().parse().ok()?;
                if den <= BigInt::zero() {
                    return None;
                }
                let exp = den.bits().checked_sub(1)? as u32;
                if den != BigInt::one() << exp {
                    return None;
                }
                Some(Dyadic::new(num, exp))
            }
        }
    }
}

impl PartialEq for Dyadic {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Dyadic {}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp.max(other.exp);
        self.scaled_num(e).cmp(&other.scaled_num(e))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_rational_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_order() {
        let a = Dyadic::new(3.into(), 1); // 3/2
        let b = Dyadic::new(5.into(), 2); // 5/4
        assert!(a > b);
        assert_eq!(a.add(&b), Dyadic::new(11.into(), 2));
        assert_eq!(a.sub(&b), Dyadic::new(1.into(), 2));
        assert_eq!(a.mul(&b), Dyadic::new(15.into(), 3));
        assert_eq!(a.midpoint(&b), Dyadic::new(11.into(), 3));
        assert_eq!(Dyadic::new(4.into(), 2), Dyadic::from_int(1));
        assert_eq!(a.pow(2), Dyadic::new(9.into(), 2));
        assert_eq!(Dyadic::new((-3).into(), 1).floor(), BigInt::from(-2));
    }

    #[test]
    fn decimal_and_rational_strings() {
        let a = Dyadic::new(13.into(), 3); // 1.625
        assert_eq!(a.to_decimal(4), "1.6250");
        assert_eq!(Dyadic::new((-1).into(), 2).to_decimal(2), "-0.25");
        assert_eq!(a.to_rational_string(), "13/8");
        assert_eq!(Dyadic::parse_rational("13/8"), Some(a));
        assert_eq!(Dyadic::parse_rational("13/6"), None);
        assert!((Dyadic::new(13.into(), 3).to_f64() - 1.625).abs() < 1e-15);
    }
}
