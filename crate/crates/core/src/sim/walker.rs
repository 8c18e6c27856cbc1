use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{ShapeGraph, SignedEdge};
use crate::shape::{Shape, MAX_SHAPE_LEN};

/// Heights `(z_1, ..., z_{K+1})` with consecutive entries at distance one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct WalkerState {
    heights: Vec<i64>,
}

impl WalkerState {
    pub fn new(heights: Vec<i64>) -> Result<Self> {
        if heights.len() < 2 || heights.len() > MAX_SHAPE_LEN + 1 {
            return Err(Error::NotInStateSpace(heights));
        }
        if heights.windows(2).any(|w| (w[1] - w[0]).abs() != 1) {
            return Err(Error::NotInStateSpace(heights));
        }
        Ok(WalkerState { heights })
    }

    pub fn heights(&self) -> &[i64] {
        &self.heights
    }

    /// Height of the first walker.
    pub fn first(&self) -> i64 {
        self.heights[0]
    }

    /// Number of gaps `K`.
    pub fn order(&self) -> usize {
        self.heights.len() - 1
    }

    pub fn shifted(&self, by: i64) -> WalkerState {
        WalkerState { heights: self.heights.iter().map(|h| h + by).collect() }
    }

    pub fn shape(&self) -> Shape {
        let signs = self.heights.windows(2).map(|w| w[1] - w[0]);
        Shape::from_signs(signs).expect("validated on construction")
    }
}

/// The difference sequence `(z_2 - z_1, ..., z_{K+1} - z_K)` of raw heights.
pub fn shape_of(heights: &[i64]) -> Result<Shape> {
    Ok(WalkerState::new(heights.to_vec())?.shape())
}

/// The configuration with shape `a` and first height `first`.
pub fn walker_from_shape(a: Shape, first: i64) -> WalkerState {
    let mut heights = Vec::with_capacity(a.len() + 1);
    heights.push(first);
    for i in 0..a.len() {
        heights.push(heights[i] + a.entry(i) as i64);
    }
    WalkerState { heights }
}

/// Every configuration reachable by moving all walkers by `±1` at once, found
/// by scanning all `2^(K+1)` move vectors.
pub fn lattice_successors(z: &WalkerState) -> Vec<WalkerState> {
    let n = z.heights.len();
    (0..1u64 << n)
        .filter_map(|moves| {
            let heights: Vec<i64> =
                z.heights.iter().enumerate().map(|(i, h)| if moves >> i & 1 == 1 { h + 1 } else { h - 1 }).collect();
            WalkerState::new(heights).ok()
        })
        .collect()
}

/// The walker chain, with successors generated from the shape graph: edge
/// `(a, b)` with value `e` moves the first walker by `e` and lays out the rest
/// along `b`.
#[derive(Clone, Copy, Debug)]
pub struct WalkerChain<'g> {
    graph: &'g ShapeGraph,
}

impl<'g> WalkerChain<'g> {
    pub fn new(graph: &'g ShapeGraph) -> Self {
        WalkerChain { graph }
    }

    pub fn graph(&self) -> &'g ShapeGraph {
        self.graph
    }

    fn check(&self, z: &WalkerState) -> Result<Shape> {
        let a = z.shape();
        self.graph.check_vertex(a)?;
        Ok(a)
    }

    fn follow(z: &WalkerState, edge: &SignedEdge) -> WalkerState {
        let next = walker_from_shape(edge.head(), z.first() + edge.a_value as i64);
        debug_assert!(next.heights.iter().zip(&z.heights).all(|(x, y)| (x - y).abs() == 1));
        next
    }

    pub fn successors(&self, z: &WalkerState) -> Result<Vec<WalkerState>> {
        let a = self.check(z)?;
        Ok((0..self.graph.degree(a)).map(|i| Self::follow(z, &self.graph.edge_at(a, i))).collect())
    }

    /// Moves to a uniformly chosen successor.
    pub fn step<R: Rng + ?Sized>(&self, z: &WalkerState, rng: &mut R) -> Result<WalkerState> {
        let a = self.check(z)?;
        let index = rng.random_range(0..self.graph.degree(a));
        Ok(Self::follow(z, &self.graph.edge_at(a, index)))
    }

    /// `steps` transitions from `start`, start included.
    pub fn path<R: Rng + ?Sized>(&self, start: &WalkerState, steps: usize, rng: &mut R) -> Result<Vec<WalkerState>> {
        let mut path = Vec::with_capacity(steps + 1);
        path.push(start.clone());
        for _ in 0..steps {
            let next = self.step(path.last().unwrap(), rng)?;
            path.push(next);
        }
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::graph::build_graph;

    fn w(h: &[i64]) -> WalkerState {
        WalkerState::new(h.to_vec()).unwrap()
    }

    #[test]
    fn shape_examples() {
        assert_eq!(shape_of(&[0, 1, 0]).unwrap().signs(), vec![1, -1]);
        assert_eq!(shape_of(&[5, 6, 7, 8]).unwrap().signs(), vec![1, 1, 1]);
        assert_eq!(w(&[0, 1, 0]).shifted(9).shape(), w(&[0, 1, 0]).shape());
        assert!(matches!(shape_of(&[0, 2]), Err(Error::NotInStateSpace(_))));
        assert!(matches!(shape_of(&[0, 0]), Err(Error::NotInStateSpace(_))));
    }

    #[test]
    fn k1_successors() {
        let z = w(&[0, 1]);
        let brute: BTreeSet<Vec<i64>> = lattice_successors(&z).into_iter().map(|s| s.heights).collect();
        let expected: BTreeSet<Vec<i64>> = [vec![1, 2], vec![-1, 0], vec![1, 0]].into_iter().collect();
        assert_eq!(brute, expected);
        let g = build_graph(1).unwrap();
        let via_graph: BTreeSet<Vec<i64>> =
            WalkerChain::new(&g).successors(&z).unwrap().into_iter().map(|s| s.heights).collect();
        assert_eq!(via_graph, expected);
    }

    #[test]
    fn successor_counts_match_degree() {
        let g = build_graph(2).unwrap();
        let z = walker_from_shape(Shape::from_signs([1i64, -1]).unwrap(), 0);
        assert_eq!(lattice_successors(&z).len(), 5);
        for k in 1..=5 {
            let g = build_graph(k).unwrap();
            let z = walker_from_shape(Shape::all_ones(k as usize), 3);
            assert_eq!(lattice_successors(&z).len(), k as usize + 2);
            assert_eq!(WalkerChain::new(&g).successors(&z).unwrap().len(), k as usize + 2);
        }
        let _ = g;
    }

    #[test]
    fn graph_successors_equal_lattice_successors() {
        for k in 1..=5 {
            let g = build_graph(k).unwrap();
            let chain = WalkerChain::new(&g);
            for a in g.vertices() {
                let z = walker_from_shape(a, -2);
                let brute: BTreeSet<Vec<i64>> = lattice_successors(&z).into_iter().map(|s| s.heights).collect();
                let mapped: Vec<Vec<i64>> = chain.successors(&z).unwrap().into_iter().map(|s| s.heights).collect();
                assert_eq!(mapped.len(), brute.len());
                assert_eq!(mapped.into_iter().collect::<BTreeSet<_>>(), brute);
            }
        }
    }

    #[test]
    fn wrong_order_is_rejected() {
        let g = build_graph(2).unwrap();
        assert!(matches!(WalkerChain::new(&g).successors(&w(&[0, 1])), Err(Error::Dimension { .. })));
    }
}
