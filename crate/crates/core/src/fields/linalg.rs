//! Linear solvers behind the Hodge decomposition and the flux system.

use num::{BigInt, BigRational, Zero};

use crate::error::{Error, Result};

/// Gaussian elimination over the rationals with first-nonzero pivoting.
pub fn solve_dense_rational(mut matrix: Vec<Vec<BigRational>>, mut rhs: Vec<BigRational>) -> Result<Vec<BigRational>> {
    let n = rhs.len();
    if matrix.len() != n {
        return Err(Error::Dimension { expected: n, found: matrix.len() });
    }
    if let Some(row) = matrix.iter().find(|r| r.len() != n) {
        return Err(Error::Dimension { expected: n, found: row.len() });
    }
    for col in 0..n {
        let pivot = (col..n).find(|&r| !matrix[r][col].is_zero()).ok_or(Error::Singular)?;
        matrix.swap(col, pivot);
        rhs.swap(col, pivot);
        let (upper, lower) = matrix.split_at_mut(col + 1);
        let prow = &upper[col];
        for (offset, row) in lower.iter_mut().enumerate() {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &prow[col];
            for j in col..n {
                let delta = &factor * &prow[j];
                row[j] -= delta;
            }
            let delta = &factor * &rhs[col];
            rhs[col + 1 + offset] -= delta;
        }
    }
    back_substitute(&matrix, rhs)
}

fn back_substitute(upper: &[Vec<BigRational>], rhs: Vec<BigRational>) -> Result<Vec<BigRational>> {
    let n = rhs.len();
    let mut x = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = rhs[i].clone();
        for j in i + 1..n {
            acc -= &upper[i][j] * &x[j];
        }
        x[i] = acc / &upper[i][i];
    }
    Ok(x)
}

/// Fraction-free (Bareiss) elimination for an integer system.
///
/// Every intermediate entry is an integer minor of the input, so divisions are
/// exact and no gcd reductions happen during elimination. Rows are swapped when
/// a pivot vanishes.
pub fn solve_bareiss(mut matrix: Vec<Vec<BigInt>>, rhs: Vec<BigInt>) -> Result<Vec<BigRational>> {
    let n = rhs.len();
    if matrix.len() != n {
        return Err(Error::Dimension { expected: n, found: matrix.len() });
    }
    for (row, b) in matrix.iter_mut().zip(rhs) {
        if row.len() != n {
            return Err(Error::Dimension { expected: n, found: row.len() });
        }
        row.push(b);
    }
    let mut previous = BigInt::from(1);
    for k in 0..n {
        if matrix[k][k].is_zero() {
            let swap = (k + 1..n).find(|&r| !matrix[r][k].is_zero()).ok_or(Error::Singular)?;
            matrix.swap(k, swap);
        }
        let (upper, lower) = matrix.split_at_mut(k + 1);
        let pivot_row = &upper[k];
        let pivot = &pivot_row[k];
        for row in lower.iter_mut() {
            let factor = std::mem::take(&mut row[k]);
            for j in k + 1..=n {
                let mut value = &row[j] * pivot;
                if !factor.is_zero() {
                    value -= &factor * &pivot_row[j];
                }
                row[j] = value / &previous;
            }
        }
        previous = matrix[k][k].clone();
    }
    let mut x: Vec<BigRational> = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = BigRational::from_integer(matrix[i][n].clone());
        for j in i + 1..n {
            if !matrix[i][j].is_zero() {
                acc -= &x[j] * BigRational::from_integer(matrix[i][j].clone());
            }
        }
        x[i] = acc / BigRational::from_integer(matrix[i][i].clone());
    }
    Ok(x)
}

#[derive(Debug)]
pub struct CgOutcome {
    pub solution: Vec<f64>,
    pub iterations: usize,
    pub relative_residual: f64,
}

/// Conjugate gradients for a symmetric positive semi-definite operator,
/// started from zero. For a singular operator the right-hand side must lie in
/// its range; the iterates then stay in the range as well.
pub fn conjugate_gradient<F>(apply: F, rhs: &[f64], tolerance: f64, max_iterations: usize) -> Result<CgOutcome>
where
    F: Fn(&[f64], &mut [f64]),
{
    let n = rhs.len();
    let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
    let rhs_norm = dot(rhs, rhs).sqrt();
    let mut x = vec![0.0; n];
    if rhs_norm == 0.0 {
        return Ok(CgOutcome { solution: x, iterations: 0, relative_residual: 0.0 });
    }
    let mut r = rhs.to_vec();
    let mut p = r.clone();
    let mut ap = vec![0.0; n];
    let mut rr = dot(&r, &r);
    for iteration in 1..=max_iterations {
        apply(&p, &mut ap);
        let alpha = rr / dot(&p, &ap);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rr_next = dot(&r, &r);
        let relative = rr_next.sqrt() / rhs_norm;
        if relative <= tolerance {
            return Ok(CgOutcome { solution: x, iterations: iteration, relative_residual: relative });
        }
        let beta = rr_next / rr;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
        rr = rr_next;
    }
    Err(Error::NonConvergence { iterations: max_iterations, residual: rr.sqrt() / rhs_norm })
}
