//! Serializable documents for the Hodge decomposition of `A`.
//!
//! Exact values are written as `"p/q"` strings and float values as plain
//! JSON numbers. Potentials are keyed by the vertex written as a `±1` array,
//! e.g. `"[1,-1]"`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::error::Result;
use crate::fields::{base_potentials, divergence, field_a, hodge_decompose, inner_product, HodgeScalar, Potential};
use crate::graph::{build_graph, ShapeGraph};
use crate::scalar::{Mode, Scalar};
use crate::shape::Shape;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

fn json_value<T: Scalar>(v: &T) -> Value {
    match T::MODE {
        Mode::Exact => Value::String(v.render()),
        Mode::Float => serde_json::Number::from_f64(v.to_f64()).map(Value::Number).unwrap_or(Value::Null),
    }
}

fn vertex_key(a: Shape) -> String {
    serde_json::to_string(&a).expect("shapes serialize as integer arrays")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeValue {
    pub tail: Shape,
    pub head: Shape,
    #[serde(rename = "loop")]
    pub is_loop: bool,
    pub value: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Residuals {
    /// Largest `|div B|` over the vertices.
    pub max_divergence_b: f64,
    /// `<grad f, B>`
    pub orthogonality: Value,
    pub solver: &'static str,
    pub iterations: usize,
    pub relative_residual: f64,
}

/// The decomposition `A = grad f + B` with its summary scalars.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HodgeDocument {
    pub version: &'static str,
    pub k: u32,
    pub mode: Mode,
    pub potential: BTreeMap<String, Value>,
    /// `B` on canonical edges (positive loops, then positive moves).
    pub divergence_free: Vec<EdgeValue>,
    pub residuals: Residuals,
    pub a_norm_squared: Value,
    pub a_dot_grad_f: Value,
    pub b_norm_squared: Value,
    pub sigma_squared: Value,
}

pub fn hodge_document<T: HodgeScalar>(k: u32) -> Result<HodgeDocument> {
    let g = build_graph(k)?;
    let a = field_a::<T>(&g);
    let h = hodge_decompose(&g, &a)?;
    let a_norm = inner_product(&g, &a, &a)?;
    let a_dot = inner_product(&g, &a, &h.gradient)?;
    let b_norm = inner_product(&g, &h.divergence_free, &h.divergence_free)?;
    Ok(HodgeDocument {
        version: VERSION,
        k,
        mode: T::MODE,
        potential: h.potential.iter().map(|(v, x)| (vertex_key(v), json_value(x))).collect(),
        divergence_free: h
            .divergence_free
            .canonical_entries(&g)
            .map(|(tail, head, is_loop, x)| EdgeValue { tail, head, is_loop, value: json_value(x) })
            .collect(),
        residuals: Residuals {
            max_divergence_b: h.divergence_residual(&g)?,
            orthogonality: json_value(&h.orthogonality(&g)?),
            solver: h.stats.method,
            iterations: h.stats.iterations,
            relative_residual: h.stats.relative_residual,
        },
        sigma_squared: json_value(&(a_norm.clone() - a_dot.clone())),
        a_norm_squared: json_value(&a_norm),
        a_dot_grad_f: json_value(&a_dot),
        b_norm_squared: json_value(&b_norm),
    })
}

/// Plot table with columns `vertex,f,f1,f2,div_A`, where `f` is the solved
/// potential. The first line is a `#` comment with the run parameters.
pub fn potential_table_csv<T: HodgeScalar>(k: u32) -> Result<String> {
    let g = build_graph(k)?;
    let a = field_a::<T>(&g);
    let f = hodge_decompose(&g, &a)?.potential;
    let base = base_potentials::<T>(k);
    let div_a = divergence(&g, &a)?;
    Ok(render_table(&g, &[&f, &base.f1, &base.f2, &div_a]))
}

fn render_table<T: Scalar>(g: &ShapeGraph, columns: &[&Potential<T>]) -> String {
    let mut out = format!("# k={} mode={} version={VERSION}\nvertex,f,f1,f2,div_A\n", g.order(), T::MODE.as_str());
    for a in g.vertices() {
        out.push_str(&a.compact());
        for c in columns {
            let x = c.get(a);
            let _ = match T::MODE {
                Mode::Exact => write!(out, ",{}", x.render()),
                Mode::Float => write!(out, ",{}", x.to_f64()),
            };
        }
        out.push('\n');
    }
    out
}
