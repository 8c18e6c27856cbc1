//! The shape multigraph `G_K` on `{-1, +1}^K` with its positive and negative
//! edge sets.
//!
//! An ordered pair `(a, b)`, `a != b`, is an edge when `b - a` lies in
//! `{-2, 0, 2}^K` and its nonzero entries alternate in sign. It is positive
//! when the first nonzero entry is `-2` and negative otherwise. Every vertex
//! also carries two signed loops `(a, a)^+` and `(a, a)^-`.
//!
//! Adjacency is stored once per vertex in compressed form. Queries list the
//! two loops first and then the non-loop edges in lexicographic order of
//! their heads, so that every walk driven by a fixed seed is reproducible.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::shape::Shape;

/// Hard ceiling on the order of a materialized graph.
pub const MAX_ORDER: u32 = 20;

/// Default ceiling used by builders that do not take an explicit limit.
pub const DEFAULT_ORDER_CAP: u32 = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Move { tail: Shape, head: Shape },
    Loop { vertex: Shape, sign: i8 },
}

/// An oriented edge of `G_K` together with the value of the step field on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignedEdge {
    pub kind: EdgeKind,
    pub a_value: i8,
}

impl SignedEdge {
    pub fn tail(&self) -> Shape {
        match self.kind {
            EdgeKind::Move { tail, .. } => tail,
            EdgeKind::Loop { vertex, .. } => vertex,
        }
    }

    pub fn head(&self) -> Shape {
        match self.kind {
            EdgeKind::Move { head, .. } => head,
            EdgeKind::Loop { vertex, .. } => vertex,
        }
    }

    pub fn is_loop(&self) -> bool {
        matches!(self.kind, EdgeKind::Loop { .. })
    }
}

/// Classifies the ordered pair `(a, b)`.
///
/// Returns `Some(+1)` for a positive edge, `Some(-1)` for a negative one and
/// `None` when the pair is not a non-loop edge (including `a == b`).
pub fn edge_sign(a: Shape, b: Shape) -> Result<Option<i8>> {
    if a.len() != b.len() {
        return Err(Error::Dimension { expected: a.len(), found: b.len() });
    }
    let mut diff = a.bits() ^ b.bits();
    if diff == 0 {
        return Ok(None);
    }
    // b_i - a_i = -2 a_i on every differing position, so the displacement
    // alternates iff a does along the differing positions.
    let first = diff.trailing_zeros() as usize;
    let lead = a.entry(first);
    let mut expected = lead;
    while diff != 0 {
        let i = diff.trailing_zeros() as usize;
        if a.entry(i) != expected {
            return Ok(None);
        }
        expected = -expected;
        diff &= diff - 1;
    }
    Ok(Some(lead))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct MoveSlot {
    head: u32,
    canonical: u32,
    positive: bool,
}

/// A non-loop edge leaving a vertex, with the index of its canonical
/// (positive) representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MoveRef {
    pub head: Shape,
    pub a_value: i8,
    pub canonical: usize,
}

/// The multigraph `G_K = (V_K, E_K^+, E_K^-)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeGraph {
    order: u32,
    offsets: Vec<usize>,
    slots: Vec<MoveSlot>,
    canonical: Vec<(u32, u32)>,
    crossing_count: u64,
}

fn check_order(k: u32, limit: u32) -> Result<()> {
    let limit = limit.min(MAX_ORDER);
    if k == 0 || k > limit {
        return Err(Error::Capacity { k, max: limit, what: "graph materialization" });
    }
    Ok(())
}

/// Builds `G_K` directly from the edge definition, up to [`DEFAULT_ORDER_CAP`].
pub fn build_graph(k: u32) -> Result<ShapeGraph> {
    build_graph_with_limit(k, DEFAULT_ORDER_CAP)
}

/// As [`build_graph`] with a caller-chosen cap (never above [`MAX_ORDER`]).
pub fn build_graph_with_limit(k: u32, limit: u32) -> Result<ShapeGraph> {
    check_order(k, limit)?;
    let len = k as usize;
    let mut positive = Vec::with_capacity(3usize.pow(k) - (1 << k));
    // Enumerate the position sets on which a alternates, starting from a +1
    // entry (those are exactly the positive edges out of a).
    let mut stack: Vec<(usize, i8, u32)> = Vec::new();
    for a in 0..1u32 << k {
        let shape = Shape::from_bits(a, len);
        for start in 0..len {
            if shape.entry(start) == 1 {
                stack.push((start, 1, 1 << start));
            }
        }
        while let Some((last, value, diff)) = stack.pop() {
            positive.push((a, a ^ diff));
            for next in last + 1..len {
                if shape.entry(next) == -value {
                    stack.push((next, -value, diff | 1 << next));
                }
            }
        }
    }
    let loops: Vec<u32> = (0..1u32 << k).collect();
    ShapeGraph::from_positive_edges(k, &positive, &loops)
}

/// Builds `G_K` by lifting the positive edges of `G_1` one level at a time:
/// `(a, b)` in `E^+` yields `(1a, 1b)` and `((-1)a, (-1)b)`, and `(a, b)` in
/// `E^-` (loops included) yields the crossing edge `(1a, (-1)b)`.
pub fn build_graph_inductive(k: u32) -> Result<ShapeGraph> {
    build_graph_inductive_with_limit(k, DEFAULT_ORDER_CAP)
}

pub fn build_graph_inductive_with_limit(k: u32, limit: u32) -> Result<ShapeGraph> {
    check_order(k, limit)?;
    // Level 1: loops at (1) and (-1), plus (1) -> (-1). Loops are pairs (x, x).
    let mut positive: Vec<(u32, u32)> = vec![(1, 1), (0, 0), (1, 0)];
    for _ in 1..k {
        let mut next = Vec::with_capacity(positive.len() * 3);
        for &(a, b) in &positive {
            next.push((a << 1 | 1, b << 1 | 1));
            next.push((a << 1, b << 1));
        }
        // E^- is the reversal of E^+ (a positive loop reverses to the negative one).
        for &(a, b) in &positive {
            next.push((b << 1 | 1, a << 1));
        }
        positive = next;
    }
    let (loops, moves): (Vec<_>, Vec<_>) = positive.into_iter().partition(|&(a, b)| a == b);
    let loops: Vec<u32> = loops.into_iter().map(|(a, _)| a).collect();
    ShapeGraph::from_positive_edges(k, &moves, &loops)
}

impl ShapeGraph {
    /// Assembles a graph from its positive non-loop edges and the list of
    /// positive loops, which must hold every vertex exactly once.
    fn from_positive_edges(k: u32, positive: &[(u32, u32)], loops: &[u32]) -> Result<Self> {
        let n = 1usize << k;
        let len = k as usize;
        let mut seen = vec![false; n];
        for &v in loops {
            let v = v as usize;
            if v >= n || seen[v] {
                return Err(Error::InvalidArgument(format!("loop set is not one loop per vertex (vertex {v})")));
            }
            seen[v] = true;
        }
        if loops.len() != n {
            return Err(Error::InvalidArgument("loop set is not one loop per vertex".into()));
        }

        let mut degree = vec![0usize; n];
        for &(a, b) in positive {
            if a == b || a as usize >= n || b as usize >= n {
                return Err(Error::InvalidArgument(format!("invalid positive edge ({a}, {b})")));
            }
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0usize);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let placeholder = MoveSlot { head: 0, canonical: 0, positive: false };
        let mut slots = vec![placeholder; offsets[n]];
        for &(a, b) in positive {
            slots[fill[a as usize]] = MoveSlot { head: b, canonical: 0, positive: true };
            fill[a as usize] += 1;
            slots[fill[b as usize]] = MoveSlot { head: a, canonical: 0, positive: false };
            fill[b as usize] += 1;
        }
        for v in 0..n {
            let row = &mut slots[offsets[v]..offsets[v + 1]];
            row.sort_unstable_by_key(|s| Shape::from_bits(s.head, len).lex_key());
            if row.windows(2).any(|w| w[0].head == w[1].head) {
                return Err(Error::InvalidArgument(format!("parallel non-loop edges at vertex {v}")));
            }
        }

        let mut canonical = Vec::with_capacity(positive.len());
        for v in 0..n {
            for slot in &mut slots[offsets[v]..offsets[v + 1]] {
                if slot.positive {
                    slot.canonical = canonical.len() as u32;
                    canonical.push((v as u32, slot.head));
                }
            }
        }
        for v in 0..n {
            for i in offsets[v]..offsets[v + 1] {
                if slots[i].positive {
                    continue;
                }
                let tail = slots[i].head as usize;
                let key = Shape::from_bits(v as u32, len).lex_key();
                let row = &slots[offsets[tail]..offsets[tail + 1]];
                let j = row
                    .binary_search_by_key(&key, |s| Shape::from_bits(s.head, len).lex_key())
                    .expect("reverse of a negative edge is stored");
                slots[i].canonical = row[j].canonical;
            }
        }

        let lead = 1u32;
        let crossing_count = canonical.iter().filter(|&&(a, b)| a & lead == 1 && b & lead == 0).count() as u64;

        Ok(ShapeGraph { order: k, offsets, slots, canonical, crossing_count })
    }

    /// The order `K` (shape length).
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn vertex_count(&self) -> usize {
        1 << self.order
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> impl Iterator<Item = Shape> {
        Shape::enumerate(self.order as usize)
    }

    /// `D_K`: the number of directed edges, both loops at every vertex included.
    pub fn total_directed_edges(&self) -> u64 {
        self.slots.len() as u64 + 2 * self.vertex_count() as u64
    }

    /// `delta_K`: positive edges from the facet `{1a}` to the facet `{(-1)b}`.
    pub fn crossing_count(&self) -> u64 {
        self.crossing_count
    }

    /// Number of positive non-loop edges.
    pub fn canonical_move_count(&self) -> usize {
        self.canonical.len()
    }

    /// The positive non-loop edge with the given canonical index.
    pub fn canonical_move(&self, index: usize) -> (Shape, Shape) {
        let (a, b) = self.canonical[index];
        let len = self.order as usize;
        (Shape::from_bits(a, len), Shape::from_bits(b, len))
    }

    pub fn canonical_moves(&self) -> impl ExactSizeIterator<Item = (Shape, Shape)> + '_ {
        let len = self.order as usize;
        self.canonical.iter().map(move |&(a, b)| (Shape::from_bits(a, len), Shape::from_bits(b, len)))
    }

    pub(crate) fn check_vertex(&self, a: Shape) -> Result<()> {
        if a.len() != self.order as usize {
            return Err(Error::Dimension { expected: self.order as usize, found: a.len() });
        }
        Ok(())
    }

    /// Number of outgoing edges of `a`, both loops included.
    #[inline]
    pub fn degree(&self, a: Shape) -> usize {
        let v = a.bits() as usize;
        2 + self.offsets[v + 1] - self.offsets[v]
    }

    /// Non-loop edges leaving `a`, in lexicographic order of the head.
    pub fn moves_from(&self, a: Shape) -> impl ExactSizeIterator<Item = MoveRef> + '_ {
        let v = a.bits() as usize;
        let len = self.order as usize;
        self.slots[self.offsets[v]..self.offsets[v + 1]].iter().map(move |s| MoveRef {
            head: Shape::from_bits(s.head, len),
            a_value: if s.positive { 1 } else { -1 },
            canonical: s.canonical as usize,
        })
    }

    /// The `index`-th outgoing edge of `a` in [`ShapeGraph::neighbors`] order.
    #[inline]
    pub fn edge_at(&self, a: Shape, index: usize) -> SignedEdge {
        match index {
            0 => SignedEdge { kind: EdgeKind::Loop { vertex: a, sign: 1 }, a_value: 1 },
            1 => SignedEdge { kind: EdgeKind::Loop { vertex: a, sign: -1 }, a_value: -1 },
            _ => {
                let slot = self.slots[self.offsets[a.bits() as usize] + index - 2];
                SignedEdge {
                    kind: EdgeKind::Move { tail: a, head: Shape::from_bits(slot.head, a.len()) },
                    a_value: if slot.positive { 1 } else { -1 },
                }
            }
        }
    }

    /// Every edge with tail `a`: `(a, a)^+`, `(a, a)^-`, then the non-loop
    /// edges in lexicographic order of the head.
    pub fn neighbors(&self, a: Shape) -> Result<Vec<SignedEdge>> {
        self.check_vertex(a)?;
        Ok((0..self.degree(a)).map(|i| self.edge_at(a, i)).collect())
    }

    pub fn degree_profile(&self, a: Shape) -> Result<DegreeProfile> {
        self.check_vertex(a)?;
        let k = self.order as usize;
        let mut alpha = vec![0u64; k + 1];
        let mut alpha_bar = vec![0u64; k + 1];
        alpha[0] = 1;
        alpha_bar[0] = 1;
        for m in self.moves_from(a) {
            let digits = a.hamming(m.head);
            if m.a_value > 0 {
                alpha[digits] += 1;
            } else {
                alpha_bar[digits] += 1;
            }
        }
        Ok(DegreeProfile { alpha, alpha_bar })
    }

    /// Serializable listing of the whole graph.
    pub fn dump(&self) -> GraphDump {
        let vertices: Vec<Shape> = self.vertices().collect();
        let edges = vertices
            .iter()
            .flat_map(|&a| (0..self.degree(a)).map(move |i| self.edge_at(a, i)))
            .map(|e| EdgeRecord { tail: e.tail(), head: e.head(), a: e.a_value, is_loop: e.is_loop() })
            .collect();
        GraphDump { k: self.order, vertices, edges, d_k: self.total_directed_edges(), delta_k: self.crossing_count }
    }
}

/// Per-vertex counts of positive (`alpha`) and negative (`alpha_bar`) edges
/// by the number of digits the head differs from the tail in. Index 0 holds
/// the loop.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeProfile {
    pub alpha: Vec<u64>,
    pub alpha_bar: Vec<u64>,
}

impl DegreeProfile {
    pub fn alpha_k(&self, k: usize) -> u64 {
        self.alpha.get(k).copied().unwrap_or(0)
    }

    pub fn alpha_bar_k(&self, k: usize) -> u64 {
        self.alpha_bar.get(k).copied().unwrap_or(0)
    }

    pub fn alpha_total(&self) -> u64 {
        self.alpha.iter().sum()
    }

    pub fn alpha_bar_total(&self) -> u64 {
        self.alpha_bar.iter().sum()
    }

    pub fn alpha_even(&self) -> u64 {
        self.alpha.iter().step_by(2).sum()
    }

    pub fn alpha_odd(&self) -> u64 {
        self.alpha.iter().skip(1).step_by(2).sum()
    }

    pub fn alpha_bar_even(&self) -> u64 {
        self.alpha_bar.iter().step_by(2).sum()
    }

    pub fn alpha_bar_odd(&self) -> u64 {
        self.alpha_bar.iter().skip(1).step_by(2).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeRecord {
    pub tail: Shape,
    pub head: Shape,
    pub a: i8,
    #[serde(rename = "loop")]
    pub is_loop: bool,
}

/// JSON form of a graph: `{k, vertices, edges, d_k, delta_k}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphDump {
    pub k: u32,
    pub vertices: Vec<Shape>,
    pub edges: Vec<EdgeRecord>,
    pub d_k: u64,
    pub delta_k: u64,
}
