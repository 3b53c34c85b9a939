//! Exact Gaussian elimination over `ℚ(i)`.

use num_traits::{One, Zero};

use crate::scalar::GaussRat;

/// Dense row-major matrix.
pub type Matrix = Vec<Vec<GaussRat>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { GaussRat::one() } else { GaussRat::zero() }).collect())
        .collect()
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let (n, m) = (a.len(), b.first().map_or(0, Vec::len));
    let mut out = vec![vec![GaussRat::zero(); m]; n];
    for i in 0..n {
        for (l, x) in a[i].iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero() {
                    out[i][j] += &(x * &b[l][j]);
                }
            }
        }
    }
    out
}

pub fn adjoint(a: &Matrix) -> Matrix {
    let (n, m) = (a.len(), a.first().map_or(0, Vec::len));
    (0..m).map(|j| (0..n).map(|i| a[i][j].conj()).collect()).collect()
}

/// Solves `A x = b` for one solution (free variables set to zero).
pub fn solve(a: &Matrix, b: &[GaussRat]) -> Option<Vec<GaussRat>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Matrix = a.iter().zip(b).map(|(r, x)| {
        let mut r = r.clone();
        r.push(x.clone());
        r
    }).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![GaussRat::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some(x)
}

/// Inverse of a square matrix, if it exists.
pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<GaussRat> = (0..n).map(|i| if i == j { GaussRat::one() } else { GaussRat::zero() }).collect();
        let x = solve(a, &e)?;
        cols.push(x);
    }
    let inv: Matrix = (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect();
    (matmul(a, &inv) == identity(n)).then_some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> GaussRat {
        GaussRat::from_int(n)
    }

    #[test]
    fn solves_consistent_system() {
        let a = vec![vec![q(1), q(2)], vec![q(3), q(4)]];
        let x = solve(&a, &[q(5), q(6)]).unwrap();
        assert_eq!(x, vec![q(-4), GaussRat::ratio(9, 2)]);
    }

    #[test]
    fn detects_inconsistency() {
        let a = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        assert!(solve(&a, &[q(1), q(3)]).is_none());
        assert!(solve(&a, &[q(1), q(2)]).is_some());
    }

    #[test]
    fn complex_inverse() {
        let a = vec![vec![GaussRat::i(), q(1)], vec![q(0), q(2)]];
        let inv = inverse(&a).unwrap();
        assert_eq!(matmul(&inv, &a), identity(2));
        assert!(inverse(&vec![vec![q(1), q(2)], vec![q(2), q(4)]]).is_none());
    }
}
