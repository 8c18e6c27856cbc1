//! Exact limit diffusivity `sigma_K^2 = |A|^2 - <A, grad f> = |B|^2`.

use num::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{build_graph_with_limit, ShapeGraph};
use crate::scalar::{ratio, Scalar};
use crate::shape::Shape;

use super::hodge::{hodge_decompose, EXACT_SOLVE_MAX_ORDER};
use super::{closed_form_potential, divergence, field_a, gradient, inner_product, EdgeField, Potential};

/// Largest order for which [`sigma_squared_exact`] materializes the graph.
pub const SIGMA_EXACT_MAX_ORDER: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialSource {
    /// Solved by exact elimination.
    HodgeSolve,
    /// The closed-form potential, accepted after checking exactly that
    /// `A - grad f` is divergence-free (which makes it the unique Hodge
    /// potential).
    CertifiedClosedForm,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SigmaReport {
    pub k: u32,
    pub sigma_squared: BigRational,
    pub a_norm_squared: BigRational,
    pub a_dot_grad_f: BigRational,
    pub b_norm_squared: BigRational,
    pub source: PotentialSource,
}

/// `2 / (K + 2)` without touching the graph.
pub fn sigma_squared_closed_form(k: u32) -> BigRational {
    ratio(2, k as i64 + 2)
}

/// Computes the diffusivity on the materialized graph in exact arithmetic.
///
/// Up to [`EXACT_SOLVE_MAX_ORDER`] the potential comes from the exact Hodge
/// solve; above it, up to [`SIGMA_EXACT_MAX_ORDER`], the closed-form potential
/// is used once `A - grad f` has been verified divergence-free at every vertex.
pub fn sigma_squared_exact(k: u32) -> Result<SigmaReport> {
    let g = build_graph_with_limit(k, SIGMA_EXACT_MAX_ORDER).map_err(|_| Error::Capacity {
        k,
        max: SIGMA_EXACT_MAX_ORDER,
        what: "exact diffusivity",
    })?;
    sigma_squared_on(&g)
}

pub(crate) fn sigma_squared_on(g: &ShapeGraph) -> Result<SigmaReport> {
    let k = g.order();
    let a = field_a::<BigRational>(g);
    let (grad, b, source) = if k <= EXACT_SOLVE_MAX_ORDER {
        let h = hodge_decompose(g, &a)?;
        (h.gradient, h.divergence_free, PotentialSource::HodgeSolve)
    } else {
        let f: Potential<BigRational> = closed_form_potential(k);
        let grad = gradient(g, &f)?;
        let b = a.sub(&grad)?;
        if !divergence(g, &b)?.is_zero() {
            return Err(Error::InvalidArgument(format!("closed-form potential is not the Hodge potential at K = {k}")));
        }
        (grad, b, PotentialSource::CertifiedClosedForm)
    };
    let a_norm_squared = inner_product(g, &a, &a)?;
    let a_dot_grad_f = inner_product(g, &a, &grad)?;
    let b_norm_squared = inner_product(g, &b, &b)?;
    Ok(SigmaReport {
        k,
        sigma_squared: a_norm_squared.clone() - a_dot_grad_f.clone(),
        a_norm_squared,
        a_dot_grad_f,
        b_norm_squared,
        source,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct FacetCheck<T> {
    /// `(2 / D_K) * sum of grad f over positive edges`
    pub direct: T,
    /// `(4 / D_K) |E_{K-1}^+| F_1 - 2 delta_K / D_K`
    pub facet_formula: T,
    /// `grad f` on the edge `(1, ..., 1) -> (-1, 1, ..., 1)`.
    pub first_increment: T,
}

/// Evaluates `<A, grad f>` both by direct summation over positive edges and
/// through the split into the two first-digit facets and the crossing edges.
pub fn facet_decomposition<T: Scalar>(g: &ShapeGraph, grad: &EdgeField<T>) -> Result<FacetCheck<T>> {
    grad.check_graph(g)?;
    let k = g.order();
    let d_k = g.total_directed_edges() as i64;
    let direct = grad.canonical_entries(g).fold(T::zero(), |acc, (_, _, _, v)| acc + v.clone()) * T::from_ratio(2, d_k);
    let ones = Shape::all_ones(k as usize);
    let first_flip = Shape::from_bits(ones.bits() & !1, k as usize);
    let edge =
        g.moves_from(ones).find(|m| m.head == first_flip).expect("single flips from the all-ones vertex are edges");
    let first_increment = grad.on_move(&edge);
    // |E_{K-1}^+| counts loops too: half of D_{K-1} = 3^(K-1).
    let previous_positive = 3i64.pow(k - 1);
    let facet_formula = T::from_ratio(4 * previous_positive, d_k) * first_increment.clone()
        - T::from_ratio(2 * g.crossing_count() as i64, d_k);
    Ok(FacetCheck { direct, facet_formula, first_increment })
}
