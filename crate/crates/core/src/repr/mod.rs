//! Downstream representations of extracted label sets: dense fixed-point arrays,
//! centerline connectivity graphs, and the JSON, binary tensor and SVG
//! serializations. All writers are canonical: equal inputs give identical bytes.

pub mod fixed;
pub mod graph;
pub mod json;
pub mod svg;
pub mod tensors;

pub use fixed::{to_fixed_point_set, FixedPointSet};
pub use graph::{to_centerline_graph, CenterlineGraph, CenterlineNode, EdgeKind, GraphEdge};
pub use json::{parse_json, serialize_json};
pub use svg::render_svg;
pub use tensors::{parse_tensors, serialize_tensors, TensorFile};
