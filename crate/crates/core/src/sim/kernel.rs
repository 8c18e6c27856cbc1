//! Exact one-step kernels over `(next shape, first-walker increment)`.

use std::collections::BTreeMap;

use num::{BigRational, One, Zero};

use crate::error::{Error, Result};
use crate::graph::build_graph;
use crate::scalar::ratio;
use crate::shape::Shape;

use super::walker::{lattice_successors, walker_from_shape};
use super::Representation;

pub const KERNEL_MAX_ORDER: u32 = 6;

/// `(next shape, increment of the first walker)`.
pub type Outcome = (Shape, i8);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionKernel {
    pub k: u32,
    pub rows: BTreeMap<Shape, BTreeMap<Outcome, BigRational>>,
}

/// Builds the kernel of either representation.
///
/// The walker kernel scans every simultaneous `±1` move of all `K + 1`
/// walkers and keeps those that stay in the state space; the graph kernel
/// reads the adjacency of `G_K`. Neither uses the other.
pub fn transition_kernel(k: u32, representation: Representation) -> Result<TransitionKernel> {
    if k == 0 || k > KERNEL_MAX_ORDER {
        return Err(Error::Capacity { k, max: KERNEL_MAX_ORDER, what: "transition kernel" });
    }
    let mut rows = BTreeMap::new();
    match representation {
        Representation::Walker => {
            for a in Shape::enumerate(k as usize) {
                let z = walker_from_shape(a, 0);
                let successors = lattice_successors(&z);
                let p = ratio(1, successors.len() as i64);
                let mut row: BTreeMap<Outcome, BigRational> = BTreeMap::new();
                for next in successors {
                    let step = (next.first() - z.first()) as i8;
                    *row.entry((next.shape(), step)).or_insert_with(BigRational::zero) += &p;
                }
                rows.insert(a, row);
            }
        }
        Representation::Graph => {
            let g = build_graph(k)?;
            for a in g.vertices() {
                let edges = g.neighbors(a)?;
                let p = ratio(1, edges.len() as i64);
                let mut row: BTreeMap<Outcome, BigRational> = BTreeMap::new();
                for e in edges {
                    *row.entry((e.head(), e.a_value)).or_insert_with(BigRational::zero) += &p;
                }
                rows.insert(a, row);
            }
        }
    }
    Ok(TransitionKernel { k, rows })
}

impl TransitionKernel {
    pub fn is_stochastic(&self) -> bool {
        self.rows.values().all(|row| row.values().fold(BigRational::zero(), |acc, p| acc + p) == BigRational::one())
    }

    /// Transition probabilities of the shape alone.
    pub fn shape_marginal(&self) -> BTreeMap<Shape, BTreeMap<Shape, BigRational>> {
        self.rows
            .iter()
            .map(|(a, row)| {
                let mut marginal: BTreeMap<Shape, BigRational> = BTreeMap::new();
                for ((b, _), p) in row {
                    *marginal.entry(*b).or_insert_with(BigRational::zero) += p;
                }
                (*a, marginal)
            })
            .collect()
    }

    /// Whether `law` is invariant under the shape marginal.
    pub fn preserves(&self, law: &BTreeMap<Shape, BigRational>) -> bool {
        let mut pushed: BTreeMap<Shape, BigRational> = BTreeMap::new();
        for (a, row) in self.shape_marginal() {
            let weight = law.get(&a).cloned().unwrap_or_else(BigRational::zero);
            for (b, p) in row {
                *pushed.entry(b).or_insert_with(BigRational::zero) += &weight * p;
            }
        }
        law.iter().all(|(a, w)| pushed.get(a).cloned().unwrap_or_else(BigRational::zero) == *w)
    }
}
