//! Regenerates the checked-in fixture maps under fixtures/maps/.
//!
//! Run from the workspace root: `cargo run -p lanemark --example gen_fixtures`.
//! The golden tests compare these files byte-for-byte against the writer
//! output, so regeneration after an intentional fixture change keeps them in
//! sync.

use std::path::PathBuf;

use lanemark::fixtures;
use lanemark::io::{write_osm, Projector};

fn main() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/maps");
    std::fs::create_dir_all(&dir).expect("create fixtures/maps");
    let projector = Projector::parse_spec("local").unwrap();
    for (name, map) in fixtures::canonical_maps() {
        let bytes = write_osm(&map, &projector).expect("serialize map");
        let path = dir.join(format!("{name}.osm"));
        std::fs::write(&path, bytes).expect("write fixture");
        println!("wrote {}", path.display());
    }
}
