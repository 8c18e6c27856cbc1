//! Simulation of the constrained walker chain, both directly on heights and
//! as a simple random walk on the shape graph.
//!
//! Every randomized routine takes a 64-bit master seed. Independent trials
//! draw from ChaCha8 streams keyed by `(seed, trial index)`, so results do
//! not depend on scheduling.

mod estimate;
mod kernel;
mod trajectory;
mod walker;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::graph::{ShapeGraph, SignedEdge};
use crate::shape::Shape;

pub use estimate::{
    empirical_martingale_increments, estimate_sigma2, martingale_residuals, stationary_mean_square,
    ShapeIncrementStats, SimEstimate,
};
pub use kernel::{transition_kernel, Outcome, TransitionKernel, KERNEL_MAX_ORDER};
pub use trajectory::{simulate_trajectory, Trajectory, TrajectoryPoint};
pub use walker::{lattice_successors, shape_of, walker_from_shape, WalkerChain, WalkerState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    /// Heights of the `K + 1` walkers.
    Walker,
    /// Simple random walk on `G_K` with the running sum of `A`.
    Graph,
}

impl Representation {
    pub fn as_str(self) -> &'static str {
        match self {
            Representation::Walker => "walker",
            Representation::Graph => "graph",
        }
    }
}

/// The RNG for stream `stream` under master seed `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A shape together with the height of the first walker.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GraphWalkState {
    pub shape: Shape,
    pub height: i64,
}

/// Picks an outgoing edge of `a` uniformly; each loop counts once.
#[inline]
pub fn sample_edge<R: Rng + ?Sized>(g: &ShapeGraph, a: Shape, rng: &mut R) -> SignedEdge {
    let index = rng.random_range(0..g.degree(a));
    g.edge_at(a, index)
}

/// One step of the graph walk: move along a uniform outgoing edge and add its
/// `A` value to the height.
pub fn graph_walk_step<R: Rng + ?Sized>(g: &ShapeGraph, state: GraphWalkState, rng: &mut R) -> GraphWalkState {
    let edge = sample_edge(g, state.shape, rng);
    GraphWalkState { shape: edge.head(), height: state.height + edge.a_value as i64 }
}

/// The degree-proportional law on `V_K`, which is invariant for the shape
/// chain. Sampling inverts the cumulative degree table.
#[derive(Clone, Debug)]
pub struct StationaryLaw {
    order: u32,
    cumulative: Vec<u64>,
}

impl StationaryLaw {
    pub fn new(g: &ShapeGraph) -> Self {
        let len = g.order() as usize;
        let mut total = 0u64;
        let cumulative = (0..g.vertex_count() as u32)
            .map(|v| {
                total += g.degree(Shape::from_bits(v, len)) as u64;
                total
            })
            .collect();
        StationaryLaw { order: g.order(), cumulative }
    }

    /// Total weight, equal to `D_K`.
    pub fn total(&self) -> u64 {
        *self.cumulative.last().unwrap()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Shape {
        let u = rng.random_range(0..self.total());
        let v = self.cumulative.partition_point(|&c| c <= u);
        Shape::from_bits(v as u32, self.order as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    #[test]
    fn graph_step_k1_frequencies() {
        let g = build_graph(1).unwrap();
        let start = GraphWalkState { shape: Shape::all_ones(1), height: 0 };
        let mut rng = stream_rng(7, 0);
        let mut counts = [0usize; 3];
        let n = 30_000;
        for _ in 0..n {
            let next = graph_walk_step(&g, start, &mut rng);
            let slot = match (next.shape == start.shape, next.height) {
                (true, 1) => 0,
                (true, -1) => 1,
                (false, 1) => 2,
                other => panic!("impossible outcome {other:?}"),
            };
            counts[slot] += 1;
        }
        for c in counts {
            let p = c as f64 / n as f64;
            // 5 standard errors of a Bernoulli(1/3) frequency
            assert!((p - 1.0 / 3.0).abs() < 5.0 * (2.0f64 / 9.0 / n as f64).sqrt(), "{counts:?}");
        }
    }

    #[test]
    fn loop_plus_keeps_shape_and_raises_height() {
        let g = build_graph(3).unwrap();
        let a = Shape::all_ones(3);
        let e = g.edge_at(a, 0);
        assert_eq!((e.head(), e.a_value), (a, 1));
        assert_eq!(g.degree(a), 5);
    }

    #[test]
    fn stationary_law_matches_degrees() {
        let g = build_graph(2).unwrap();
        let law = StationaryLaw::new(&g);
        assert_eq!(law.total(), g.total_directed_edges());
        let mut rng = stream_rng(1, 3);
        let n = 60_000;
        let mut counts = [0usize; 4];
        for _ in 0..n {
            counts[law.sample(&mut rng).bits() as usize] += 1;
        }
        for v in 0..4u32 {
            let p = g.degree(Shape::from_bits(v, 2)) as f64 / 18.0;
            let se = (p * (1.0 - p) / n as f64).sqrt();
            assert!((counts[v as usize] as f64 / n as f64 - p).abs() < 5.0 * se);
        }
    }
}
