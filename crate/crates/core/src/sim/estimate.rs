use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{divergence, field_a, gradient, EdgeField, Potential};
use crate::graph::{build_graph, ShapeGraph};
use crate::scalar::Scalar;
use crate::shape::Shape;

use super::{sample_edge, stream_rng, StationaryLaw};

/// Monte Carlo estimate of the diffusivity of the first walker.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimEstimate {
    pub k: u32,
    pub steps_per_trial: u64,
    pub trials: u64,
    pub point_estimate: f64,
    pub std_error: f64,
    pub seed: u64,
    #[serde(skip)]
    pub elapsed: f64,
}

/// Runs `trials` independent graph walks of `steps` steps, each started from
/// the stationary shape law, and reports `mean((Z_n - Z_0)^2) / n`.
///
/// The increments have mean zero by symmetry, so the second moment about the
/// origin is the variance. The standard error is the sample standard
/// deviation of the squared displacements over `sqrt(trials)`, scaled by
/// `1 / n`. Output is a function of `(k, steps, trials, seed)` only.
pub fn estimate_sigma2(k: u32, steps: u64, trials: u64, seed: u64) -> Result<SimEstimate> {
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be at least 1".into()));
    }
    if trials < 2 {
        return Err(Error::InvalidArgument("trials must be at least 2".into()));
    }
    let start = Instant::now();
    let g = build_graph(k)?;
    let law = StationaryLaw::new(&g);
    let displacements: Vec<i64> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream_rng(seed, trial);
            let mut shape = law.sample(&mut rng);
            let mut height = 0i64;
            for _ in 0..steps {
                let edge = sample_edge(&g, shape, &mut rng);
                height += edge.a_value as i64;
                shape = edge.head();
            }
            height
        })
        .collect();

    let m = trials as f64;
    let squares: Vec<f64> = displacements.iter().map(|&d| (d * d) as f64).collect();
    let mean = squares.iter().sum::<f64>() / m;
    let spread = squares.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
    let n = steps as f64;
    Ok(SimEstimate {
        k,
        steps_per_trial: steps,
        trials,
        point_estimate: mean / n,
        std_error: (spread / m).sqrt() / n,
        seed,
        elapsed: start.elapsed().as_secs_f64(),
    })
}

/// Per vertex, the mean of `B = A - grad f` over outgoing edges, i.e.
/// `div(B)(a) / deg(a)`: the conditional drift of `Z_n - f(Y_n)`.
pub fn martingale_residuals<T: Scalar>(g: &ShapeGraph, f: &Potential<T>) -> Result<Potential<T>> {
    let b = field_a::<T>(g).sub(&gradient(g, f)?)?;
    let div = divergence(g, &b)?;
    Ok(Potential::from_fn(g.order(), |a| div.get(a).clone() * T::from_ratio(1, g.degree(a) as i64)))
}

/// `E[S(Y_0, Y_1)^2]` with `Y_0` drawn from the degree-proportional law and
/// `Y_1` a uniform neighbor.
pub fn stationary_mean_square<T: Scalar>(g: &ShapeGraph, s: &EdgeField<T>) -> Result<T> {
    s.check_graph(g)?;
    let total = g.total_directed_edges() as i64;
    let mut acc = T::zero();
    for a in g.vertices() {
        let degree = g.degree(a) as i64;
        let weight = T::from_ratio(degree, total) * T::from_ratio(1, degree);
        let loop_value = s.positive_loop(a).clone();
        let mut local = loop_value.clone() * loop_value.clone() + loop_value.clone() * loop_value;
        for m in g.moves_from(a) {
            let v = s.on_move(&m);
            local = local + v.clone() * v;
        }
        acc = acc + weight * local;
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShapeIncrementStats {
    pub shape: Shape,
    pub visits: u64,
    pub mean: f64,
    pub std_error: f64,
}

/// Runs one stationary graph walk of `steps` steps and groups the increments
/// `M_{n+1} - M_n = A(e_n) - (f(Y_{n+1}) - f(Y_n))` by the current shape.
pub fn empirical_martingale_increments(
    g: &ShapeGraph,
    f: &Potential<f64>,
    steps: u64,
    seed: u64,
) -> Result<Vec<ShapeIncrementStats>> {
    if f.order() != g.order() {
        return Err(Error::Incompatible { left: f.order(), right: g.order() });
    }
    let n = g.vertex_count();
    let mut count = vec![0u64; n];
    let mut sum = vec![0f64; n];
    let mut sum_sq = vec![0f64; n];
    let mut rng = stream_rng(seed, 0);
    let mut shape = StationaryLaw::new(g).sample(&mut rng);
    for _ in 0..steps {
        let edge = sample_edge(g, shape, &mut rng);
        let increment = edge.a_value as f64 - (f.get(edge.head()) - f.get(shape));
        let v = shape.bits() as usize;
        count[v] += 1;
        sum[v] += increment;
        sum_sq[v] += increment * increment;
        shape = edge.head();
    }
    Ok(g.vertices()
        .map(|a| {
            let v = a.bits() as usize;
            let c = count[v] as f64;
            let mean = if count[v] > 0 { sum[v] / c } else { 0.0 };
            let std_error = if count[v] > 1 {
                ((sum_sq[v] - c * mean * mean).max(0.0) / (c - 1.0) / c).sqrt()
            } else {
                f64::INFINITY
            };
            ShapeIncrementStats { shape: a, visits: count[v], mean, std_error }
        })
        .collect())
}
