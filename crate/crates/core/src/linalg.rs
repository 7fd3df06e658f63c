//! Dense matrices over a finite field: rank, determinant and products.

use crate::error::{Error, Result};
use crate::ff::{Fe, Field};

pub type Matrix = Vec<Vec<Fe>>;

pub fn identity(field: &Field, n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { field.one() } else { field.zero() }).collect())
        .collect()
}

pub fn mul(field: &Field, a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let inner = b.len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    (0..inner).fold(field.zero(), |acc, t| field.add(&acc, &field.mul(&a[i][t], &b[t][j])))
                })
                .collect()
        })
        .collect()
}

/// Entrywise Frobenius twist a_ij -> a_ij^(p^j).
pub fn twist(field: &Field, a: &Matrix, j: usize) -> Matrix {
    a.iter()
        .map(|row| row.iter().map(|x| field.frobenius(x, j)).collect())
        .collect()
}

/// Row-reduces a copy of `a` and returns its rank.
pub fn rank(field: &Field, a: &Matrix) -> usize {
    let mut m = a.clone();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pivot);
        let inv = field.inv(&m[r][c]).expect("nonzero pivot");
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = field.mul(&m[i][c], &inv);
                for j in c..cols {
                    let t = field.mul(&factor, &m[r][j]);
                    m[i][j] = field.sub(&m[i][j], &t);
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

pub fn det(field: &Field, a: &Matrix) -> Result<Fe> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::NotSquare {
            rows: n,
            cols: a.first().map_or(0, Vec::len),
        });
    }
    let mut m = a.clone();
    let mut acc = field.one();
    for c in 0..n {
        let Some(pivot) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Ok(field.zero());
        };
        if pivot != c {
            m.swap(c, pivot);
            acc = field.neg(&acc);
        }
        acc = field.mul(&acc, &m[c][c]);
        let inv = field.inv(&m[c][c])?;
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let factor = field.mul(&m[i][c], &inv);
            for j in c..n {
                let t = field.mul(&factor, &m[c][j]);
                m[i][j] = field.sub(&m[i][j], &t);
            }
        }
    }
    Ok(acc)
}

/// Solves `a x = b` for one solution, if any (a is rows x cols).
pub fn solve(field: &Field, a: &Matrix, b: &[Fe]) -> Option<Vec<Fe>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pivot);
        let inv = field.inv(&m[r][c]).expect("nonzero pivot");
        for j in c..=cols {
            m[r][j] = field.mul(&m[r][j], &inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c];
                for j in c..=cols {
                    let t = field.mul(&factor, &m[r][j]);
                    m[i][j] = field.sub(&m[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![field.zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols];
    }
    Some(x)
}
