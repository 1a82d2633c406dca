//! Local map instance labels from layered vector road maps.
//!
//! The library loads lanelet-style maps (points, linestrings, lanelets), derives a
//! routing graph from shared-boundary topology, and converts the map region around a
//! vehicle pose into compound polyline labels: road borders, lane dividers and lane
//! centerlines, each carrying trace records that tie every arc-length span of the
//! label back to the source map elements.
//!
//! The typical call sequence:
//!
//! ```
//! use lanemark::geometry::RoiSpec;
//! use lanemark::label::{ExtractConfig, Extractor, Stage};
//! use lanemark::pose::ReferencePose;
//!
//! let map = lanemark::fixtures::map_s2();
//! let extractor = Extractor::new(map).unwrap();
//! let pose = ReferencePose::planar(10.0, 1.5, 0.0);
//! let cfg = ExtractConfig { stage: Stage::Resampled, point_count: 8, ..Default::default() };
//! let instances = extractor.generate(&pose, &RoiSpec::default(), &cfg).unwrap();
//! assert_eq!(instances.labels.len(), 3);
//! ```
//!
//! All types are immutable after construction and all operations are pure reads, so a
//! single map, routing graph and extractor can be shared freely across threads. With
//! the `parallel` feature (on by default) [`label::Extractor::generate_batch`] fans a
//! pose stream out over a thread pool without changing any output byte.

pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod io;
pub mod label;
pub mod map;
pub mod pose;
pub mod repr;
pub mod routing;

pub use error::Error;
