//! The `K x K` system fixing the gradient increments of a stationary potential
//! by requiring zero flux of `A - grad f` between the half-cubes `{a_i = 1}`
//! and `{a_i = -1}`.

use num::{BigInt, BigRational, One};

use crate::error::{Error, Result};

use super::linalg::solve_dense_rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemarkSystem {
    pub k: u32,
    pub matrix: Vec<Vec<BigInt>>,
    pub rhs: Vec<BigInt>,
}

fn pow3(e: u32) -> BigInt {
    num::pow(BigInt::from(3), e as usize)
}

/// Diagonal `3^(K-1)`, off-diagonal `-3^(K-1-|i-j|)`, right-hand side `3^(K-j)`.
pub fn remark_system(k: u32) -> Result<RemarkSystem> {
    if k == 0 {
        return Err(Error::InvalidArgument("the flux system needs K >= 1".into()));
    }
    let n = k as usize;
    let matrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { pow3(k - 1) } else { -pow3(k - 1 - i.abs_diff(j) as u32) }).collect())
        .collect();
    let rhs = (1..=k).map(|j| pow3(k - j)).collect();
    Ok(RemarkSystem { k, matrix, rhs })
}

/// Exact solution of the system; the matrix is never singular for systems
/// built by [`remark_system`].
pub fn solve_remark_system(system: &RemarkSystem) -> Result<Vec<BigRational>> {
    let to_rational = |v: &BigInt| BigRational::new(v.clone(), BigInt::one());
    let matrix = system.matrix.iter().map(|row| row.iter().map(to_rational).collect()).collect();
    let rhs = system.rhs.iter().map(to_rational).collect();
    solve_dense_rational(matrix, rhs)
}
