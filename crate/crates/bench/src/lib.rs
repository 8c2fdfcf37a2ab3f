//! Inputs shared by the benchmarks.

use cobham_core::spectral::IntMatrix;
use cobham_core::{fixtures, SubstitutionSystem};

pub fn fixture(name: &str) -> SubstitutionSystem {
    fixtures::load(name).expect("known fixture").expect("fixture parses")
}

/// Dense non-negative matrix with small entries, positive on the diagonal.
pub fn dense_matrix(n: usize) -> IntMatrix {
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1 } else { ((i * 7 + j * 3) % 4) as i64 }).collect())
        .collect();
    IntMatrix::from_rows(&rows)
}
