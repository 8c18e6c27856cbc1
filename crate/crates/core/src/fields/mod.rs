//! Vector-field calculus on the shape graph and the decomposition of the
//! step field `A` into a gradient and a divergence-free part.
//!
//! Fields are antisymmetric, so an [`EdgeField`] stores one value per
//! canonical edge: each positive non-loop edge and each positive loop
//! `(a, a)^+`. The value on a reversed edge, or on `(a, a)^-`, is the
//! negation of the stored one.

mod calculus;
mod hodge;
pub mod linalg;
mod potentials;
mod remark;
mod sigma;

use crate::error::{Error, Result};
use crate::graph::{EdgeKind, MoveRef, ShapeGraph, SignedEdge};
use crate::scalar::Scalar;
use crate::shape::Shape;

pub use calculus::{divergence, field_a, flux, gradient, inner_product, is_stationary};
pub use hodge::{hodge_decompose, HodgeDecomposition, HodgeScalar, SolveStats, EXACT_SOLVE_MAX_ORDER};
pub use potentials::{
    base_potentials, closed_form_increments, closed_form_potential, phi_closed_forms, phi_profiles, BasePotentials,
};
pub use remark::{remark_system, solve_remark_system, RemarkSystem};
pub use sigma::{
    facet_decomposition, sigma_squared_closed_form, sigma_squared_exact, FacetCheck, PotentialSource, SigmaReport,
    SIGMA_EXACT_MAX_ORDER,
};

/// A function on the vertices of `G_K`.
#[derive(Clone, Debug, PartialEq)]
pub struct Potential<T> {
    order: u32,
    values: Vec<T>,
}

impl<T: Scalar> Potential<T> {
    pub fn from_fn(order: u32, mut f: impl FnMut(Shape) -> T) -> Self {
        let len = order as usize;
        let values = (0..1u32 << order).map(|bits| f(Shape::from_bits(bits, len))).collect();
        Potential { order, values }
    }

    pub fn constant(order: u32, value: T) -> Self {
        Potential { order, values: vec![value; 1 << order] }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    #[inline]
    pub fn get(&self, a: Shape) -> &T {
        &self.values[a.bits() as usize]
    }

    /// `(vertex, value)` pairs in lexicographic vertex order.
    pub fn iter(&self) -> impl Iterator<Item = (Shape, &T)> {
        Shape::enumerate(self.order as usize).map(move |a| (a, self.get(a)))
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::Incompatible { left: self.order, right: other.order });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.clone() + b.clone()).collect();
        Ok(Potential { order: self.order, values })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.clone() - b.clone()).collect();
        Ok(Potential { order: self.order, values })
    }

    pub fn map(&self, f: impl Fn(&T) -> T) -> Self {
        Potential { order: self.order, values: self.values.iter().map(f).collect() }
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.order == other.order && self.values.iter().zip(&other.values).all(|(a, b)| a.approx_eq(b))
    }

    /// True when every value equals the first one.
    pub fn is_constant(&self) -> bool {
        self.values.iter().all(|v| v.approx_eq(&self.values[0]))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Scalar::is_negligible)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn to_float(&self) -> Potential<f64> {
        Potential { order: self.order, values: self.values.iter().map(Scalar::to_f64).collect() }
    }
}

/// An antisymmetric function on the edges of `G_K`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeField<T> {
    order: u32,
    loops: Vec<T>,
    moves: Vec<T>,
}

impl<T: Scalar> EdgeField<T> {
    /// Builds a field from its values on `(a, a)^+` and on the canonical
    /// positive edges `(tail, head)`.
    pub fn from_canonical(
        g: &ShapeGraph,
        mut on_loop: impl FnMut(Shape) -> T,
        mut on_move: impl FnMut(Shape, Shape) -> T,
    ) -> Self {
        let loops = (0..g.vertex_count() as u32).map(|v| on_loop(Shape::from_bits(v, g.order() as usize))).collect();
        let moves = g.canonical_moves().map(|(a, b)| on_move(a, b)).collect();
        EdgeField { order: g.order(), loops, moves }
    }

    pub fn zero(g: &ShapeGraph) -> Self {
        Self::from_canonical(g, |_| T::zero(), |_, _| T::zero())
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub(crate) fn check_graph(&self, g: &ShapeGraph) -> Result<()> {
        if self.order != g.order() || self.moves.len() != g.canonical_move_count() {
            return Err(Error::Incompatible { left: self.order, right: g.order() });
        }
        Ok(())
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.order != other.order || self.moves.len() != other.moves.len() {
            return Err(Error::Incompatible { left: self.order, right: other.order });
        }
        Ok(())
    }

    /// Value on `(a, a)^+`.
    #[inline]
    pub fn positive_loop(&self, a: Shape) -> &T {
        &self.loops[a.bits() as usize]
    }

    /// Value on the canonical positive edge with the given index.
    #[inline]
    pub fn canonical_move(&self, index: usize) -> &T {
        &self.moves[index]
    }

    /// Value on a non-loop edge leaving some vertex.
    #[inline]
    pub fn on_move(&self, m: &MoveRef) -> T {
        let v = self.moves[m.canonical].clone();
        if m.a_value > 0 {
            v
        } else {
            -v
        }
    }

    pub fn on_edge(&self, g: &ShapeGraph, e: &SignedEdge) -> T {
        match e.kind {
            EdgeKind::Loop { vertex, sign } => {
                let v = self.positive_loop(vertex).clone();
                if sign > 0 {
                    v
                } else {
                    -v
                }
            }
            EdgeKind::Move { tail, head } => {
                let m = g.moves_from(tail).find(|m| m.head == head).expect("edge belongs to the graph");
                self.on_move(&m)
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        self.check_same(other)?;
        Ok(EdgeField {
            order: self.order,
            loops: self.loops.iter().zip(&other.loops).map(|(a, b)| f(a, b)).collect(),
            moves: self.moves.iter().zip(&other.moves).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.check_same(other).is_ok()
            && self.loops.iter().zip(&other.loops).all(|(a, b)| a.approx_eq(b))
            && self.moves.iter().zip(&other.moves).all(|(a, b)| a.approx_eq(b))
    }

    pub fn is_zero(&self) -> bool {
        self.loops.iter().chain(&self.moves).all(Scalar::is_negligible)
    }

    pub fn to_float(&self) -> EdgeField<f64> {
        EdgeField {
            order: self.order,
            loops: self.loops.iter().map(Scalar::to_f64).collect(),
            moves: self.moves.iter().map(Scalar::to_f64).collect(),
        }
    }

    /// Canonical values as `(tail, head, is_loop, value)`, loops first.
    pub fn canonical_entries<'a>(
        &'a self,
        g: &'a ShapeGraph,
    ) -> impl Iterator<Item = (Shape, Shape, bool, &'a T)> + 'a {
        let len = self.order as usize;
        let loops = Shape::enumerate(len).map(move |a| (a, a, true, self.positive_loop(a)));
        let moves = g.canonical_moves().zip(&self.moves).map(|((a, b), v)| (a, b, false, v));
        loops.chain(moves)
    }
}

/// A subset of `V_K` as a membership table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSet {
    order: u32,
    members: Vec<bool>,
}

impl VertexSet {
    pub fn empty(order: u32) -> Self {
        VertexSet { order, members: vec![false; 1 << order] }
    }

    pub fn from_predicate(order: u32, mut keep: impl FnMut(Shape) -> bool) -> Self {
        let len = order as usize;
        VertexSet { order, members: (0..1u32 << order).map(|b| keep(Shape::from_bits(b, len))).collect() }
    }

    pub fn from_shapes(order: u32, shapes: impl IntoIterator<Item = Shape>) -> Result<Self> {
        let mut set = Self::empty(order);
        for s in shapes {
            if s.len() != order as usize {
                return Err(Error::Dimension { expected: order as usize, found: s.len() });
            }
            set.members[s.bits() as usize] = true;
        }
        Ok(set)
    }

    /// Vertices whose entry `digit` (0-based) equals `sign`.
    pub fn digit(order: u32, digit: usize, sign: i8) -> Self {
        Self::from_predicate(order, |a| a.entry(digit) == sign)
    }

    pub fn complement(&self) -> Self {
        VertexSet { order: self.order, members: self.members.iter().map(|m| !m).collect() }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    #[inline]
    pub fn contains(&self, a: Shape) -> bool {
        self.members[a.bits() as usize]
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = Shape> + '_ {
        let len = self.order as usize;
        Shape::enumerate(len).filter(move |a| self.contains(*a))
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.members.iter().zip(&other.members).all(|(a, b)| !(a & b))
    }
}
