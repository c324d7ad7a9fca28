//! Small dense linear algebra over a [`Scalar`] field.
//!
//! Matrices are row-major `Vec<Vec<S>>`. Exact scalars pivot on the first
//! nonzero entry; floats pivot on the largest magnitude and treat entries
//! below `tol` as zero.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalar::Scalar;

fn is_zero<S: Scalar>(v: &S, tol: f64) -> bool {
    v.is_zero_tol(tol)
}

fn pick_pivot<S: Scalar>(m: &[Vec<S>], col: usize, from: usize, tol: f64) -> Option<usize> {
    if S::EXACT {
        (from..m.len()).find(|&r| !is_zero(&m[r][col], tol))
    } else {
        (from..m.len())
            .filter(|&r| !is_zero(&m[r][col], tol))
            .max_by(|&a, &b| {
                m[a][col]
                    .magnitude()
                    .partial_cmp(&m[b][col].magnitude())
                    .unwrap_or(Ordering::Equal)
            })
    }
}

/// Reduced row echelon form; returns the pivot columns.
pub fn row_reduce<S: Scalar>(m: &mut [Vec<S>], tol: f64) -> Vec<usize> {
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(p) = pick_pivot(m, col, row, tol) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].inv().expect("pivot is nonzero");
        for c in col..cols {
            m[row][c] = m[row][c].mul(&inv);
        }
        for r in 0..m.len() {
            if r == row || is_zero(&m[r][col], tol) {
                continue;
            }
            let factor = m[r][col].clone();
            for c in col..cols {
                let delta = factor.mul(&m[row][c]);
                m[r][c] = m[r][c].sub(&delta);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank<S: Scalar>(m: &[Vec<S>], tol: f64) -> usize {
    let mut work = m.to_vec();
    row_reduce(&mut work, tol).len()
}

/// A basis of `{x : m x = 0}` for a matrix with `cols` columns.
pub fn nullspace<S: Scalar>(m: &[Vec<S>], cols: usize, tol: f64) -> Vec<Vec<S>> {
    let mut work = m.to_vec();
    let pivots = row_reduce(&mut work, tol);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![S::zero(); cols];
            v[f] = S::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = work[r][f].neg();
            }
            v
        })
        .collect()
}

/// Positive semidefiniteness of a Hermitian matrix by symmetric pivoted
/// elimination. Non-Hermitian input is reported as not PSD.
pub fn is_psd_hermitian<S: Scalar>(m: &[Vec<S>], tol: f64) -> bool {
    let n = m.len();
    for i in 0..n {
        for j in 0..n {
            if !m[i][j].approx_eq(&m[j][i].conj(), tol) {
                return false;
            }
        }
    }
    let mut work = m.to_vec();
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        let mut pivot = None;
        let mut best = 0.0f64;
        for &i in &active {
            match work[i][i].real_sign(tol) {
                Some(Ordering::Greater) => {
                    if S::EXACT {
                        pivot = Some(i);
                        break;
                    }
                    let mag = work[i][i].magnitude();
                    if pivot.is_none() || mag > best {
                        pivot = Some(i);
                        best = mag;
                    }
                }
                Some(Ordering::Equal) => {}
                _ => return false,
            }
        }
        let Some(p) = pivot else {
            // zero diagonal: a PSD remainder must vanish entirely
            return active
                .iter()
                .all(|&i| active.iter().all(|&j| is_zero(&work[i][j], tol)));
        };
        let d_inv = work[p][p].inv().expect("positive pivot");
        active.retain(|&i| i != p);
        for &i in &active {
            if is_zero(&work[i][p], tol) {
                continue;
            }
            let lip = work[i][p].mul(&d_inv);
            for &j in &active {
                let delta = lip.mul(&work[p][j]);
                work[i][j] = work[i][j].sub(&delta);
            }
        }
    }
    true
}

/// [`is_psd_hermitian`] for a rational matrix: denominators are cleared and
/// the elimination runs fraction-free on integers.
pub fn is_psd_rational(m: &[Vec<BigRational>]) -> bool {
    let n = m.len();
    if (0..n).any(|i| (0..i).any(|j| m[i][j] != m[j][i])) {
        return false;
    }
    let den = m
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let mut work: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| row.iter().map(|r| r.numer() * (&den / r.denom())).collect())
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut prev = BigInt::one();
    while !active.is_empty() {
        if active.iter().any(|&i| work[i][i].is_negative()) {
            return false;
        }
        let Some(k) = active.iter().position(|&i| work[i][i].is_positive()) else {
            return active.iter().all(|&i| active.iter().all(|&j| work[i][j].is_zero()));
        };
        let p = active.remove(k);
        let d = work[p][p].clone();
        // entry (i, j) becomes (d·m_ij - m_ip·m_pj) / prev, an exact division
        for (a, &i) in active.iter().enumerate() {
            for &j in &active[a..] {
                let v = (&d * &work[i][j] - &work[i][p] * &work[p][j]) / &prev;
                work[j][i] = v.clone();
                work[i][j] = v;
            }
        }
        prev = d;
    }
    true
}
