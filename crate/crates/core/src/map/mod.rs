//! Immutable map data model: points, linestrings and lanelets with ID resolution,
//! boundary classification, centerline computation and structural validation.

pub mod centerline;
pub mod classify;
pub mod model;
pub mod validate;

pub use centerline::centerline;
pub use classify::{classify_boundary, BoundaryClass};
pub use model::{
    attrs, Attributes, BoundaryRef, Element, ElementId, Lanelet, LaneletMap, LineString3d,
    MapBuilder, MapMetadata, Point3d, Side,
};
pub use validate::{error_findings, validate_map, Finding, Severity};
