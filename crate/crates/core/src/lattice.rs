//! Exact rank of integer vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Rank of the span of `rows` over `ℤ` (equivalently over `ℚ`), by
/// fraction-free row reduction. Rows may have different lengths; missing
/// entries are zero.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let width = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| (0..width).map(|j| BigInt::from(*r.get(j).unwrap_or(&0))).collect())
        .collect();
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        for i in rank + 1..m.len() {
            if m[i][col].is_zero() {
                continue;
            }
            let g = m[rank][col].gcd(&m[i][col]);
            let a = &m[i][col] / &g;
            let b = &m[rank][col] / &g;
            let pivot_row = m[rank].clone();
            for (x, p) in m[i].iter_mut().zip(&pivot_row) {
                *x = &*x * &b - p * &a;
            }
            normalize(&mut m[i]);
        }
        rank += 1;
    }
    rank
}

fn normalize(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && g.abs() != BigInt::from(1) {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}
