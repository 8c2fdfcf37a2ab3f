use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::IntPoly;

/// Square matrix of exact integers, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix {
            n,
            data: vec![BigInt::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        IntMatrix {
            n,
            data: rows.iter().flat_map(|r| r.iter().cloned().map(Into::into)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        self.data.chunks(self.n.max(1)).map(<[BigInt]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|x| !x.is_negative())
    }

    pub fn col_sum(&self, j: usize) -> BigInt {
        (0..self.n).map(|i| self.get(i, j)).sum()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, mut k: u32) -> IntMatrix {
        let mut result = Self::identity(self.n);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn trace(&self) -> BigInt {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Principal submatrix on the given indices.
    pub fn submatrix(&self, idx: &[usize]) -> IntMatrix {
        let m = idx.len();
        let mut out = Self::zeros(m);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out.data[a * m + b] = self.get(i, j).clone();
            }
        }
        out
    }

    /// Characteristic polynomial `det(xI - M)` by Faddeev–LeVerrier; every
    /// division is exact over the integers.
    pub fn charpoly(&self) -> IntPoly {
        let n = self.n;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut mk = Self::zeros(n);
        for k in 1..=n {
            // M_k = A·M_{k-1} + c_{n-k+1}·I
            let mut next = self.mul(&mk);
            for i in 0..n {
                next.data[i * n + i] += &coeffs[n - k + 1];
            }
            mk = next;
            let t = self.mul(&mk).trace();
            coeffs[n - k] = -(t / BigInt::from(k));
        }
        IntPoly::new(coeffs)
    }

    /// Companion matrix of a monic polynomial (leading coefficient ±1 is
    /// normalized to +1).
    pub fn companion(p: &IntPoly) -> IntMatrix {
        let d = p.degree().expect("zero polynomial");
        let lead = p.leading().unwrap();
        assert!(lead.abs().is_one(), "companion matrix needs a monic polynomial");
        let c: Vec<BigInt> = p.coeffs().iter().map(|x| x * lead).collect();
        let mut m = Self::zeros(d);
        for i in 1..d {
            m.data[i * d + i - 1] = BigInt::one();
        }
        for i in 0..d {
            m.data[i * d + d - 1] = -c[i].clone();
        }
        m
    }

    /// Boolean pattern (entry > 0).
    pub fn pattern(&self) -> BoolMatrix {
        BoolMatrix {
            n: self.n,
            data: self.data.iter().map(|x| x.is_positive()).collect(),
        }
    }

    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        self.rows()
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.to_string()).collect())
            .collect()
    }

    pub fn from_string_rows(rows: &[Vec<String>]) -> Option<IntMatrix> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| s.parse::<BigInt>().ok()).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        if parsed.iter().any(|r| r.len() != parsed.len()) {
            return None;
        }
        Some(Self::from_rows(&parsed))
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in self.rows() {
            let s: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", s.join(", "))?;
        }
        Ok(())
    }
}

/// Boolean matrix for reachability and primitivity tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolMatrix {
    n: usize,
    data: Vec<bool>,
}

impl BoolMatrix {
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.n + j]
    }

    pub fn mul(&self, other: &BoolMatrix) -> BoolMatrix {
        let n = self.n;
        let mut data = vec![false; n * n];
        for i in 0..n {
            for k in 0..n {
                if !self.data[i * n + k] {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] |= other.data[k * n + j];
                }
            }
        }
        BoolMatrix { n, data }
    }

    pub fn pow(&self, mut k: u64) -> BoolMatrix {
        let n = self.n;
        let mut result = BoolMatrix {
            n,
            data: (0..n * n).map(|x| x / n == x % n).collect(),
        };
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn all_true(&self) -> bool {
        self.data.iter().all(|&b| b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charpoly_small_cases() {
        let fib = IntMatrix::from_rows(&[vec![1, 1], vec![1, 0]]);
        assert_eq!(fib.charpoly(), IntPoly::from_i64(&[-1, -1, 1]));
        let tau = IntMatrix::from_rows(&[vec![3, 0, 0], vec![1, 1, 1], vec![0, 1, 1]]);
        // (x-3)·(x^2 - 2x) = x^3 - 5x^2 + 6x
        assert_eq!(tau.charpoly(), IntPoly::from_i64(&[0, 6, -5, 1]));
        assert_eq!(IntMatrix::identity(3).charpoly(), IntPoly::from_i64(&[-1, 3, -3, 1]));
    }

    #[test]
    fn companion_has_the_polynomial() {
        let p = IntPoly::from_i64(&[-1, -1, 1]);
        assert_eq!(IntMatrix::companion(&p).charpoly(), p);
        let q = IntPoly::from_i64(&[5, 0, -2, 1]);
        assert_eq!(IntMatrix::companion(&q).charpoly(), q);
    }

    #[test]
    fn powers() {
        let fib = IntMatrix::from_rows(&[vec![1, 1], vec![1, 0]]);
        assert_eq!(fib.pow(10).get(0, 0), &BigInt::from(89));
        assert_eq!(fib.pow(0), IntMatrix::identity(2));
        assert!(fib.pattern().pow(2).all_true());
    }
}
