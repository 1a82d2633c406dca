//! Lanelet connectivity, spatial lookup, and path enumeration.

pub mod graph;
pub mod paths;
pub mod submap;

pub use graph::{build_routing_graph, Connectivity, RoutingGraph};
pub use paths::{enumerate_paths, LaneletPath, PathLimits};
pub use submap::{extract_submap, extract_submap_scan, SpatialIndex};
