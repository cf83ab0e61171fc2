//! Exact linear algebra over scalar and polynomial matrices.
//!
//! All routines are exact: inversion and signature use Gauss steps over the
//! scalar field, determinants of polynomial matrices use a subset dynamic
//! program (no polynomial division), and linear systems with constant
//! invertible determinant are solved by Cramer's rule.

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::Scalar;
use num::Signed;

/// `n × n` identity matrix of scalars.
pub fn identity_scalar(n: usize) -> Vec<Vec<Scalar>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
        .collect()
}

/// True when the matrix is square and symmetric.
pub fn is_symmetric(m: &[Vec<Scalar>]) -> bool {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return false;
    }
    (0..n).all(|i| (0..n).all(|j| m[i][j] == m[j][i]))
}

/// Invert a square scalar matrix by Gauss-Jordan elimination.
pub fn invert_scalar_matrix(m: &[Vec<Scalar>]) -> Result<Vec<Vec<Scalar>>> {
    let n = m.len();
    for r in m {
        if r.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "cannot invert a non-square matrix ({}x{})",
                n,
                r.len()
            )));
        }
    }
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    let mut inv = identity_scalar(n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or_else(|| {
            Error::SingularMatrix(format!("no pivot in column {col} during inversion"))
        })?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        let p_inv = p.inv().expect("pivot is nonzero");
        for j in 0..n {
            a[col][j] = &a[col][j] * &p_inv;
            inv[col][j] = &inv[col][j] * &p_inv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let t = &f * &a[col][j];
                a[r][j] = &a[r][j] - &t;
                let t = &f * &inv[col][j];
                inv[r][j] = &inv[r][j] - &t;
            }
        }
    }
    Ok(inv)
}

/// Signature `(n_plus, n_minus)` of a real symmetric invertible matrix,
/// computed by symmetric congruence reduction to diagonal form.
pub fn signature(m: &[Vec<Scalar>]) -> Result<(usize, usize)> {
    let n = m.len();
    if !is_symmetric(m) {
        return Err(Error::AsymmetricPairing);
    }
    if m.iter().flatten().any(|c| !c.is_real()) {
        return Err(Error::FieldMismatch);
    }
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    let mut plus = 0;
    let mut minus = 0;
    for k in 0..n {
        if a[k][k].is_zero() {
            // Prefer a later diagonal pivot; otherwise manufacture one from an
            // off-diagonal entry by the congruence row_k += row_j.
            if let Some(d) = (k + 1..n).find(|&d| !a[d][d].is_zero()) {
                a.swap(k, d);
                for row in a.iter_mut() {
                    row.swap(k, d);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                for col in 0..n {
                    let t = a[j][col].clone();
                    a[k][col] = &a[k][col] + &t;
                }
                for row in a.iter_mut() {
                    let t = row[j].clone();
                    row[k] = &row[k] + &t;
                }
            } else {
                return Err(Error::SingularMatrix(
                    "signature of a degenerate symmetric matrix".into(),
                ));
            }
        }
        let p = a[k][k].clone();
        if p.re.is_positive() {
            plus += 1;
        } else {
            minus += 1;
        }
        let p_inv = p.inv().expect("pivot is nonzero");
        for r in k + 1..n {
            if a[r][k].is_zero() {
                continue;
            }
            let f = &a[r][k] * &p_inv;
            for c in 0..n {
                let t = &f * &a[k][c];
                a[r][c] = &a[r][c] - &t;
            }
            for row in a.iter_mut().skip(k) {
                let t = &f * &row[k];
                row[r] = &row[r] - &t;
            }
        }
    }
    Ok((plus, minus))
}

/// Block-diagonal join of two square scalar matrices.
pub fn block_diag(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let (na, nb) = (a.len(), b.len());
    let mut out = vec![vec![Scalar::zero(); na + nb]; na + nb];
    for i in 0..na {
        for j in 0..na {
            out[i][j] = a[i][j].clone();
        }
    }
    for i in 0..nb {
        for j in 0..nb {
            out[na + i][na + j] = b[i][j].clone();
        }
    }
    out
}

/// Apply a scalar matrix to a vector of polynomials.
pub fn apply_scalar_matrix(m: &[Vec<Scalar>], v: &[Polynomial]) -> Vec<Polynomial> {
    let nvars = v.first().map(|p| p.nvars()).unwrap_or(0);
    m.iter()
        .map(|row| {
            assert_eq!(row.len(), v.len(), "matrix/vector shape mismatch");
            let mut acc = Polynomial::zero(nvars);
            for (c, p) in row.iter().zip(v) {
                if !c.is_zero() {
                    acc = &acc + &p.scale(c);
                }
            }
            acc
        })
        .collect()
}

/// Determinant of a square polynomial matrix via a column-subset dynamic
/// program; avoids polynomial division entirely.
pub fn poly_det(nvars: usize, m: &[Vec<Polynomial>]) -> Polynomial {
    let n = m.len();
    for r in m {
        assert_eq!(r.len(), n, "determinant of a non-square matrix");
    }
    if n == 0 {
        return Polynomial::one(nvars);
    }
    let mut dp: Vec<Option<Polynomial>> = vec![None; 1 << n];
    dp[0] = Some(Polynomial::one(nvars));
    for mask in 1usize..(1 << n) {
        let k = mask.count_ones() as usize;
        let row = k - 1;
        let mut acc = Polynomial::zero(nvars);
        let mut pos = 0;
        for j in 0..n {
            if mask & (1 << j) == 0 {
                continue;
            }
            if !m[row][j].is_zero() {
                let sub = dp[mask ^ (1 << j)].as_ref().expect("smaller mask filled");
                let term = &m[row][j] * sub;
                if (row + pos) % 2 == 0 {
                    acc = &acc + &term;
                } else {
                    acc = &acc - &term;
                }
            }
            pos += 1;
        }
        dp[mask] = Some(acc);
    }
    dp[(1 << n) - 1].take().expect("full mask filled")
}

/// Solve `A x = b` for polynomial `A`, `b` when `det A` is a nonzero constant;
/// each solution entry is an exact polynomial by Cramer's rule.
pub fn cramer_solve(nvars: usize, a: &[Vec<Polynomial>], b: &[Polynomial]) -> Result<Vec<Polynomial>> {
    let n = a.len();
    if b.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "system has {n} equations but {} right-hand entries",
            b.len()
        )));
    }
    let det = poly_det(nvars, a);
    let c = det.as_constant().ok_or_else(|| {
        Error::SingularMatrix("system determinant is not constant".into())
    })?;
    let c_inv = c
        .inv()
        .ok_or_else(|| Error::SingularMatrix("system determinant is zero".into()))?;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut replaced: Vec<Vec<Polynomial>> = a.to_vec();
        for (row, rhs) in replaced.iter_mut().zip(b) {
            row[i] = rhs.clone();
        }
        out.push(poly_det(nvars, &replaced).scale(&c_inv));
    }
    Ok(out)
}
