use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::ShapeGraph;
use crate::scalar::Scalar;

use super::{EdgeField, Potential, VertexSet};

/// The step field: `+1` on positive edges, `-1` on negative ones.
pub fn field_a<T: Scalar>(g: &ShapeGraph) -> EdgeField<T> {
    EdgeField::from_canonical(g, |_| T::one(), |_, _| T::one())
}

/// `(a, b) -> f(b) - f(a)`; zero on loops.
pub fn gradient<T: Scalar>(g: &ShapeGraph, f: &Potential<T>) -> Result<EdgeField<T>> {
    if f.order() != g.order() {
        return Err(Error::Incompatible { left: f.order(), right: g.order() });
    }
    Ok(EdgeField::from_canonical(g, |_| T::zero(), |a, b| f.get(b).clone() - f.get(a).clone()))
}

/// Sum of the field over every edge leaving each vertex.
pub fn divergence<T: Scalar>(g: &ShapeGraph, s: &EdgeField<T>) -> Result<Potential<T>> {
    s.check_graph(g)?;
    // The two loops at a vertex carry opposite values and cancel.
    Ok(Potential::from_fn(g.order(), |a| g.moves_from(a).fold(T::zero(), |acc, m| acc + s.on_move(&m))))
}

/// `(1 / D_K) * sum over all directed edges of S * S'`, evaluated on
/// canonical edges as `(2 / D_K) * sum`.
pub fn inner_product<T: Scalar>(g: &ShapeGraph, s: &EdgeField<T>, t: &EdgeField<T>) -> Result<T> {
    s.check_graph(g)?;
    t.check_graph(g)?;
    let sum = s
        .loops
        .iter()
        .zip(&t.loops)
        .chain(s.moves.iter().zip(&t.moves))
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone());
    Ok(T::from_ratio(2, g.total_directed_edges() as i64) * sum)
}

/// Sum of `S(a, b)` over edges with `a` in `from` and `b` in `to`.
pub fn flux<T: Scalar>(g: &ShapeGraph, s: &EdgeField<T>, from: &VertexSet, to: &VertexSet) -> Result<T> {
    s.check_graph(g)?;
    for set in [from, to] {
        if set.order() != g.order() {
            return Err(Error::Incompatible { left: set.order(), right: g.order() });
        }
    }
    if !from.is_disjoint(to) {
        return Err(Error::OverlappingSets);
    }
    let mut total = T::zero();
    for a in from.iter() {
        for m in g.moves_from(a) {
            if to.contains(m.head) {
                total = total + s.on_move(&m);
            }
        }
    }
    Ok(total)
}

/// Whether the value on every non-loop edge depends only on its displacement.
///
/// Loops are not part of the test. A negative edge has the opposite
/// displacement of its positive reverse and the opposite value, so checking
/// canonical edges covers both orientations.
pub fn is_stationary<T: Scalar>(g: &ShapeGraph, s: &EdgeField<T>) -> Result<bool> {
    s.check_graph(g)?;
    let mut by_displacement: HashMap<(u32, u32), &T> = HashMap::new();
    for (index, (a, b)) in g.canonical_moves().enumerate() {
        let changed = a.bits() ^ b.bits();
        let key = (changed, b.bits() & changed);
        let value = s.canonical_move(index);
        match by_displacement.get(&key) {
            Some(seen) if !seen.approx_eq(value) => return Ok(false),
            Some(_) => {}
            None => {
                by_displacement.insert(key, value);
            }
        }
    }
    Ok(true)
}
