//! Reference computations written independently of the library internals.
#![allow(dead_code)]

use chainwalk::fields::EdgeField;
use chainwalk::{Shape, ShapeGraph};
use num::{BigInt, BigRational, Zero};

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Classifies `(a, b)` straight from the difference vector: an edge when
/// every entry of `b - a` is in {-2, 0, 2}, at least one is nonzero and the
/// nonzero ones alternate in sign. Positive when the first nonzero is -2.
pub fn classify(a: &[i64], b: &[i64]) -> Option<i8> {
    let d: Vec<i64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
    if d.iter().any(|x| ![-2, 0, 2].contains(x)) {
        return None;
    }
    let nonzero: Vec<i64> = d.into_iter().filter(|&x| x != 0).collect();
    if nonzero.is_empty() || nonzero.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(if nonzero[0] == -2 { 1 } else { -1 })
}

/// All vectors in {-1, 1}^k, in lexicographic order with -1 first.
pub fn cube(k: usize) -> Vec<Vec<i64>> {
    (0..1u32 << k).map(|m| (0..k).map(|i| if m >> (k - 1 - i) & 1 == 1 { 1 } else { -1 }).collect()).collect()
}

pub fn shape(v: &[i64]) -> Shape {
    Shape::from_signs(v.iter().copied()).unwrap()
}

pub fn signs(a: Shape) -> Vec<i64> {
    a.signs().into_iter().map(i64::from).collect()
}

/// `(3 + 2(K - i)) / (K + 2)` for 1-based `i`.
pub fn increment(k: i64, i: i64) -> BigRational {
    q(3 + 2 * (k - i), k + 2)
}

/// `f(a) = sum of F_i over the -1 digits of a`.
pub fn reference_potential(a: &[i64]) -> BigRational {
    let k = a.len() as i64;
    a.iter()
        .enumerate()
        .filter(|(_, &x)| x < 0)
        .fold(BigRational::zero(), |acc, (i, _)| acc + increment(k, i as i64 + 1))
}

/// Divergence at `a` by summing the field over every outgoing edge record.
pub fn divergence_by_edges(g: &ShapeGraph, s: &EdgeField<BigRational>, a: Shape) -> BigRational {
    g.neighbors(a).unwrap().iter().fold(BigRational::zero(), |acc, e| acc + s.on_edge(g, e))
}

/// `(alpha, alpha_bar)` split by the number of differing digits, counted
/// from the classifier over all heads (loops at index 0).
pub fn digit_profile(a: &[i64]) -> (Vec<i64>, Vec<i64>) {
    let k = a.len();
    let mut alpha = vec![0i64; k + 1];
    let mut alpha_bar = vec![0i64; k + 1];
    alpha[0] = 1;
    alpha_bar[0] = 1;
    for b in cube(k) {
        let digits = a.iter().zip(&b).filter(|(x, y)| x != y).count();
        match classify(a, &b) {
            Some(1) => alpha[digits] += 1,
            Some(_) => alpha_bar[digits] += 1,
            None => {}
        }
    }
    (alpha, alpha_bar)
}

pub fn even(v: &[i64]) -> i64 {
    v.iter().step_by(2).sum()
}

pub fn odd(v: &[i64]) -> i64 {
    v.iter().skip(1).step_by(2).sum()
}

/// `E[(Z_n - Z_0)^2]` for the walk started from the degree-proportional law,
/// by summing over every edge path of length `n`.
pub fn exact_second_moment(g: &ShapeGraph, n: usize) -> BigRational {
    fn walk(g: &ShapeGraph, a: Shape, left: usize, height: i64, weight: BigRational, acc: &mut BigRational) {
        if left == 0 {
            *acc += weight * BigRational::from_integer((height * height).into());
            return;
        }
        let edges = g.neighbors(a).unwrap();
        let p = q(1, edges.len() as i64);
        for e in edges {
            walk(g, e.head(), left - 1, height + e.a_value as i64, weight.clone() * p.clone(), acc);
        }
    }
    let total = g.total_directed_edges() as i64;
    let mut acc = BigRational::zero();
    for a in g.vertices() {
        walk(g, a, n, 0, q(g.degree(a) as i64, total), &mut acc);
    }
    acc
}
