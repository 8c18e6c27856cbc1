//! Gradient plus divergence-free splitting of an edge field.
//!
//! The potential solves the vertex equation `div(grad f) = div S`, fixed by
//! the gauge `f(1, ..., 1) = 0`. The divergence-free part is `S - grad f`.

use num::{BigInt, BigRational, Integer, One, Zero};

use crate::error::{Error, Result};
use crate::graph::ShapeGraph;
use crate::scalar::Scalar;
use crate::shape::Shape;

use super::linalg::{conjugate_gradient, solve_bareiss};
use super::{divergence, gradient, inner_product, EdgeField, Potential};

/// Largest order the exact elimination handles by default.
pub const EXACT_SOLVE_MAX_ORDER: u32 = 8;

/// Relative residual target for the float solve.
pub const CG_RELATIVE_TOLERANCE: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq)]
pub struct SolveStats {
    pub method: &'static str,
    pub iterations: usize,
    pub relative_residual: f64,
}

/// Scalars that know how to solve the gauge-fixed graph Poisson equation.
pub trait HodgeScalar: Scalar {
    /// Solves `div(grad f) = rhs` with `f(1, ..., 1) = 0`.
    fn solve_poisson(g: &ShapeGraph, rhs: &Potential<Self>) -> Result<(Potential<Self>, SolveStats)>;
}

impl HodgeScalar for BigRational {
    fn solve_poisson(g: &ShapeGraph, rhs: &Potential<Self>) -> Result<(Potential<Self>, SolveStats)> {
        let k = g.order();
        if k > EXACT_SOLVE_MAX_ORDER {
            return Err(Error::Capacity { k, max: EXACT_SOLVE_MAX_ORDER, what: "exact Hodge solve" });
        }
        let len = k as usize;
        let ground = Shape::all_ones(len).bits() as usize;
        // The all-ones mask is the largest one, so the remaining unknowns are
        // the masks 0..ground in order.
        debug_assert_eq!(ground, g.vertex_count() - 1);
        let n = ground;

        let scale = rhs.iter().fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
        let scale = BigRational::from_integer(scale);
        let mut matrix = vec![vec![BigInt::zero(); n]; n];
        let mut b = Vec::with_capacity(n);
        for (row_index, row) in matrix.iter_mut().enumerate() {
            let a = Shape::from_bits(row_index as u32, len);
            // -div(grad f)(a) = sum over moves of f(a) - f(head)
            let mut diagonal = 0i64;
            for m in g.moves_from(a) {
                diagonal += 1;
                let col = m.head.bits() as usize;
                if col != ground {
                    row[col] -= 1;
                }
            }
            row[row_index] += diagonal;
            let value = -(rhs.get(a).clone() * scale.clone());
            debug_assert!(value.is_integer());
            b.push(value.to_integer());
        }
        let solution = solve_bareiss(matrix, b)?;
        let potential = Potential::from_fn(k, |a| {
            let v = a.bits() as usize;
            if v == ground {
                BigRational::zero()
            } else {
                solution[v].clone() / scale.clone()
            }
        });
        Ok((potential, SolveStats { method: "fraction-free elimination", iterations: 0, relative_residual: 0.0 }))
    }
}

impl HodgeScalar for f64 {
    fn solve_poisson(g: &ShapeGraph, rhs: &Potential<Self>) -> Result<(Potential<Self>, SolveStats)> {
        let k = g.order();
        let len = k as usize;
        let n = g.vertex_count();
        // Project onto the range of the Laplacian (mean zero).
        let mut b: Vec<f64> = (0..n).map(|v| -*rhs.get(Shape::from_bits(v as u32, len))).collect();
        let mean = b.iter().sum::<f64>() / n as f64;
        b.iter_mut().for_each(|x| *x -= mean);

        let apply = |x: &[f64], out: &mut [f64]| {
            for (v, slot) in out.iter_mut().enumerate() {
                let a = Shape::from_bits(v as u32, len);
                *slot = g.moves_from(a).map(|m| x[v] - x[m.head.bits() as usize]).sum();
            }
        };
        let outcome = conjugate_gradient(apply, &b, CG_RELATIVE_TOLERANCE, 10 * n + 100)?;
        let gauge = outcome.solution[Shape::all_ones(len).bits() as usize];
        let potential = Potential::from_fn(k, |a| outcome.solution[a.bits() as usize] - gauge);
        Ok((
            potential,
            SolveStats {
                method: "conjugate gradient",
                iterations: outcome.iterations,
                relative_residual: outcome.relative_residual,
            },
        ))
    }
}

#[derive(Clone, Debug)]
pub struct HodgeDecomposition<T> {
    pub potential: Potential<T>,
    pub gradient: EdgeField<T>,
    pub divergence_free: EdgeField<T>,
    pub stats: SolveStats,
}

impl<T: Scalar> HodgeDecomposition<T> {
    /// Largest `|div B|` over all vertices.
    pub fn divergence_residual(&self, g: &ShapeGraph) -> Result<f64> {
        Ok(divergence(g, &self.divergence_free)?.max_abs())
    }

    /// `<grad f, B>`, zero for an exact decomposition.
    pub fn orthogonality(&self, g: &ShapeGraph) -> Result<T> {
        inner_product(g, &self.gradient, &self.divergence_free)
    }
}

pub fn hodge_decompose<T: HodgeScalar>(g: &ShapeGraph, s: &EdgeField<T>) -> Result<HodgeDecomposition<T>> {
    let rhs = divergence(g, s)?;
    let (potential, stats) = T::solve_poisson(g, &rhs)?;
    let grad = gradient(g, &potential)?;
    let divergence_free = s.sub(&grad)?;
    Ok(HodgeDecomposition { potential, gradient: grad, divergence_free, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::field_a;
    use crate::graph::build_graph;
    use crate::scalar::ratio;

    #[test]
    fn k1_decomposition_of_a() {
        let g = build_graph(1).unwrap();
        let a = field_a::<BigRational>(&g);
        let h = hodge_decompose(&g, &a).unwrap();
        let plus = Shape::all_ones(1);
        let minus = Shape::all_minus_ones(1);
        assert_eq!(*h.potential.get(plus), ratio(0, 1));
        assert_eq!(*h.potential.get(minus), ratio(1, 1));
        assert_eq!(*h.divergence_free.positive_loop(plus), ratio(1, 1));
        assert_eq!(*h.divergence_free.positive_loop(minus), ratio(1, 1));
        assert_eq!(*h.divergence_free.canonical_move(0), ratio(0, 1));
        let b = &h.divergence_free;
        assert_eq!(inner_product(&g, b, b).unwrap(), ratio(2, 3));
    }

    #[test]
    fn gradient_input_has_no_divergence_free_part() {
        let g = build_graph(4).unwrap();
        let f = Potential::from_fn(4, |a| ratio(a.bits() as i64 * 3 - 7, 5));
        let grad = gradient(&g, &f).unwrap();
        let h = hodge_decompose(&g, &grad).unwrap();
        assert!(h.divergence_free.is_zero());
        let shift = f.get(Shape::all_ones(4)).clone();
        assert_eq!(h.potential, f.map(|v| v.clone() - shift.clone()));
    }

    #[test]
    fn float_gradient_input() {
        let g = build_graph(5).unwrap();
        let f = Potential::from_fn(5, |a| (a.bits() as f64).sin());
        let h = hodge_decompose(&g, &gradient(&g, &f).unwrap()).unwrap();
        assert!(h.divergence_free.is_zero());
        assert!(h.stats.relative_residual <= 1e-12);
    }

    #[test]
    fn exact_solve_respects_cap() {
        let g = build_graph(EXACT_SOLVE_MAX_ORDER + 1).unwrap();
        let a = field_a::<BigRational>(&g);
        assert!(matches!(hodge_decompose(&g, &a), Err(Error::Capacity { .. })));
    }
}
