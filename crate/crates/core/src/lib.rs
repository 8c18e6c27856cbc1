pub mod error;
pub mod export;
pub mod fields;
pub mod graph;
pub mod scalar;
pub mod shape;
pub mod sim;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{build_graph, build_graph_inductive, edge_sign, ShapeGraph, SignedEdge};
pub use scalar::{Mode, Scalar};
pub use shape::Shape;
