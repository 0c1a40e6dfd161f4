//! Integer-matrix helpers on top of nalgebra.

use nalgebra::DMatrix;
use num_bigint::BigInt;

pub type IMat = DMatrix<i64>;

pub fn identity(n: usize) -> IMat {
    IMat::identity(n, n)
}

pub fn is_nonneg(m: &IMat) -> bool {
    m.iter().all(|&x| x >= 0)
}

pub fn entry_sum(m: &IMat) -> BigInt {
    m.iter().map(|&x| BigInt::from(x)).sum()
}

pub fn trace(m: &IMat) -> i64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)]).sum()
}

/// Rows as nested vectors (row-major), the JSON layout used throughout.
pub fn to_rows(m: &IMat) -> Vec<Vec<i64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

pub fn from_rows(rows: &[Vec<i64>]) -> Option<IMat> {
    let n = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != c) {
        return None;
    }
    Some(IMat::from_fn(n, c, |i, j| rows[i][j]))
}

/// Permutation matrix P with P[i][perm[i]] = 1.
pub fn permutation(perm: &[usize]) -> IMat {
    let n = perm.len();
    IMat::from_fn(n, n, |i, j| i64::from(perm[i] == j))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_round_trip() {
        let rows = vec![vec![1, 2], vec![3, 4]];
        let m = from_rows(&rows).unwrap();
        assert_eq!(to_rows(&m), rows);
        assert_eq!(trace(&m), 5);
        assert_eq!(entry_sum(&m), BigInt::from(10));
        assert!(from_rows(&[vec![1], vec![1, 2]]).is_none());
    }
}
