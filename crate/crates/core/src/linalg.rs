//! Exact linear algebra: rational Gauss-Jordan and integer column Hermite forms.

use crate::arith::{xgcd_i128, Rat};
use num_traits::{One, Zero};

pub type RatMatrix = Vec<Vec<Rat>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut RatMatrix) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &RatMatrix) -> usize {
    let mut m = m.clone();
    rref(&mut m).len()
}

/// Inverse of a square rational matrix, or `None` if singular.
pub fn inverse(m: &RatMatrix) -> Option<RatMatrix> {
    let n = m.len();
    let mut aug: RatMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Basis of the right kernel {v : m v = 0}.
pub fn kernel(m: &RatMatrix) -> Vec<Vec<Rat>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = m.clone();
    let piv = rref(&mut r);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); cols];
            v[f] = Rat::one();
            for (row, &pc) in piv.iter().enumerate() {
                v[pc] = -r[row][f].clone();
            }
            v
        })
        .collect()
}

/// Row vector times matrix.
pub fn vec_mat(v: &[Rat], m: &RatMatrix) -> Vec<Rat> {
    let cols = m[0].len();
    (0..cols)
        .map(|j| v.iter().zip(m).map(|(a, row)| a * &row[j]).sum())
        .collect()
}

pub fn det(m: &RatMatrix) -> Rat {
    let n = m.len();
    let mut a = m.clone();
    let mut d = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &a[c][c];
                for j in c..n {
                    let t = &a[c][j] * &f;
                    a[i][j] -= t;
                }
            }
        }
    }
    d
}

/// Column Hermite-style echelon form of an integer matrix.
///
/// Returns `(h, u, rank)` with `a * u = h`, `u` unimodular, and the columns
/// `rank..n` of `h` zero. Those columns of `u` are a basis of the integer
/// kernel of `a`, which is saturated in Z^n.
pub fn column_echelon(a: &[Vec<i128>]) -> (Vec<Vec<i128>>, Vec<Vec<i128>>, usize) {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut h: Vec<Vec<i128>> = a.to_vec();
    let mut u: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();
    let mut col = 0;
    for r in 0..m {
        if col == n {
            break;
        }
        for j in col + 1..n {
            if h[r][j] == 0 {
                continue;
            }
            let (a0, b0) = (h[r][col], h[r][j]);
            let (g, x, y) = xgcd_i128(a0, b0);
            let (p, q) = (-b0 / g, a0 / g);
            for row in h.iter_mut().chain(u.iter_mut()) {
                let (c0, cj) = (row[col], row[j]);
                row[col] = x * c0 + y * cj;
                row[j] = p * c0 + q * cj;
            }
        }
        if h[r][col] != 0 {
            if h[r][col] < 0 {
                for row in h.iter_mut().chain(u.iter_mut()) {
                    row[col] = -row[col];
                }
            }
            col += 1;
        }
    }
    (h, u, col)
}

/// Saturated integer kernel basis (as vectors) of an integer matrix.
pub fn integer_kernel(a: &[Vec<i128>], n: usize) -> Vec<Vec<i128>> {
    if a.is_empty() {
        return (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();
    }
    let (_, u, rank) = column_echelon(a);
    (rank..n).map(|c| u.iter().map(|row| row[c]).collect()).collect()
}

/// Basis of (Q-span of `vs`) ∩ Z^n, where `vs` are integer vectors.
pub fn saturate(vs: &[Vec<i128>], n: usize) -> Vec<Vec<i128>> {
    let perp = integer_kernel(vs, n);
    integer_kernel(&perp, n)
}

/// Solve `a x = rhs` over the integers. Returns a particular solution and a
/// saturated kernel basis, or `None` when no integral solution exists.
pub fn solve_integer(a: &[Vec<i128>], rhs: &[i128]) -> Option<(Vec<i128>, Vec<Vec<i128>>)> {
    let m = a.len();
    let n = a[0].len();
    let (h, u, rank) = column_echelon(a);
    // Forward substitution on the echelon columns.
    let mut coeff = vec![0i128; n];
    let mut col = 0;
    for r in 0..m {
        let acc: i128 = (0..col).map(|c| h[r][c] * coeff[c]).sum();
        let rem = rhs[r] - acc;
        if col < rank && h[r][col] != 0 {
            if rem % h[r][col] != 0 {
                return None;
            }
            coeff[col] = rem / h[r][col];
            col += 1;
        } else if rem != 0 {
            return None;
        }
    }
    let x: Vec<i128> = (0..n).map(|i| (0..n).map(|c| u[i][c] * coeff[c]).sum()).collect();
    let ker = (rank..n).map(|c| u.iter().map(|row| row[c]).collect()).collect();
    Some((x, ker))
}
