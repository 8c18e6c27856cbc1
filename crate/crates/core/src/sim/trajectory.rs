use std::fmt::Write as _;

use serde::Serialize;

use crate::error::Result;
use crate::graph::build_graph;
use crate::shape::Shape;

use super::walker::{walker_from_shape, WalkerChain};
use super::{graph_walk_step, stream_rng, GraphWalkState, Representation, StationaryLaw};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TrajectoryPoint {
    pub step: u64,
    /// Height of the first walker.
    pub height: i64,
    pub shape: Shape,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Trajectory {
    pub k: u32,
    pub seed: u64,
    pub representation: Representation,
    pub points: Vec<TrajectoryPoint>,
}

impl Trajectory {
    /// CSV with a leading `#` line carrying the run parameters.
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# k={} seed={} representation={} version={}\nstep,height,shape\n",
            self.k,
            self.seed,
            self.representation.as_str(),
            env!("CARGO_PKG_VERSION")
        );
        for p in &self.points {
            let _ = writeln!(out, "{},{},{}", p.step, p.height, p.shape.compact());
        }
        out
    }
}

/// A single path of `steps` transitions started from the stationary shape law
/// at height zero. Both representations consume the RNG identically, so the
/// same seed gives the same path either way.
pub fn simulate_trajectory(k: u32, steps: u64, seed: u64, representation: Representation) -> Result<Trajectory> {
    let g = build_graph(k)?;
    let mut rng = stream_rng(seed, 0);
    let start = StationaryLaw::new(&g).sample(&mut rng);
    let mut points = Vec::with_capacity(steps as usize + 1);
    points.push(TrajectoryPoint { step: 0, height: 0, shape: start });
    match representation {
        Representation::Graph => {
            let mut state = GraphWalkState { shape: start, height: 0 };
            for step in 1..=steps {
                state = graph_walk_step(&g, state, &mut rng);
                points.push(TrajectoryPoint { step, height: state.height, shape: state.shape });
            }
        }
        Representation::Walker => {
            let chain = WalkerChain::new(&g);
            let mut z = walker_from_shape(start, 0);
            for step in 1..=steps {
                z = chain.step(&z, &mut rng)?;
                points.push(TrajectoryPoint { step, height: z.first(), shape: z.shape() });
            }
        }
    }
    Ok(Trajectory { k, seed, representation, points })
}
