//! Map serialization: projection plus OSM XML subset reading and writing.

pub mod osm_read;
pub mod osm_write;
pub mod projector;

pub use osm_read::{parse_osm, read_osm_file, ParseReport};
pub use osm_write::write_osm;
pub use projector::Projector;
