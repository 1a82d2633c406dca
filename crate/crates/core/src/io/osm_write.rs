//! Deterministic OSM XML subset writer.

use std::fmt::Write as _;

use quick_xml::escape::escape;

use crate::error::{Error, Result};
use crate::io::Projector;
use crate::map::{LaneletMap, Severity};

/// Serializes a map to the OSM XML subset. Output is byte-identical for equal
/// maps: elements in ascending ID order per kind, fixed attribute order, fixed
/// numeric formatting. Boundary orientation flags are not part of the format;
/// they are re-inferred on parse from geometry.
pub fn write_osm(map: &LaneletMap, projector: &Projector) -> Result<Vec<u8>> {
    let findings: Vec<_> = crate::map::validate_map(map)
        .into_iter()
        .filter(|f| f.severity == Severity::Error)
        .collect();
    if !findings.is_empty() {
        return Err(Error::Invalid { findings });
    }

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    if map.is_empty() {
        out.push_str("<osm version=\"0.6\"/>\n");
        return Ok(out.into_bytes());
    }
    out.push_str("<osm version=\"0.6\">\n");

    for p in map.points() {
        let (lat, lon, local) = match projector {
            Projector::LocalMetric => (0.0, 0.0, true),
            Projector::TangentPlane { .. } => {
                let (lat, lon) = projector.unproject(p.position.x, p.position.y)?;
                (lat, lon, false)
            }
        };
        write!(out, "  <node id=\"{}\" lat=\"{lat:.12}\" lon=\"{lon:.12}\"", p.id).unwrap();
        let has_ele = p.position.z != 0.0;
        if local || has_ele {
            out.push_str(">\n");
            if local {
                writeln!(out, "    <tag k=\"local_x\" v=\"{:.9}\"/>", p.position.x).unwrap();
                writeln!(out, "    <tag k=\"local_y\" v=\"{:.9}\"/>", p.position.y).unwrap();
            }
            if has_ele {
                writeln!(out, "    <tag k=\"ele\" v=\"{:.9}\"/>", p.position.z).unwrap();
            }
            out.push_str("  </node>\n");
        } else {
            out.push_str("/>\n");
        }
    }

    for ls in map.linestrings() {
        writeln!(out, "  <way id=\"{}\">", ls.id).unwrap();
        for r in &ls.point_ids {
            writeln!(out, "    <nd ref=\"{r}\"/>").unwrap();
        }
        for (k, v) in &ls.attributes {
            writeln!(out, "    <tag k=\"{}\" v=\"{}\"/>", escape(k), escape(v)).unwrap();
        }
        out.push_str("  </way>\n");
    }

    for ll in map.lanelets() {
        writeln!(out, "  <relation id=\"{}\">", ll.id).unwrap();
        writeln!(out, "    <member type=\"way\" role=\"left\" ref=\"{}\"/>", ll.left.linestring)
            .unwrap();
        writeln!(out, "    <member type=\"way\" role=\"right\" ref=\"{}\"/>", ll.right.linestring)
            .unwrap();
        out.push_str("    <tag k=\"type\" v=\"lanelet\"/>\n");
        for (k, v) in &ll.attributes {
            writeln!(out, "    <tag k=\"{}\" v=\"{}\"/>", escape(k), escape(v)).unwrap();
        }
        out.push_str("  </relation>\n");
    }

    out.push_str("</osm>\n");
    Ok(out.into_bytes())
}
