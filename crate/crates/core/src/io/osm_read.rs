//! OSM XML subset reader: nodes, ways, and lanelet relations.

use std::collections::BTreeMap;
use std::path::Path;

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::io::Projector;
use crate::map::{Attributes, LaneletMap, MapMetadata};

/// Element counts and per-line warnings from one parse.
#[derive(Debug, Default, Clone)]
pub struct ParseReport {
    pub points: usize,
    pub linestrings: usize,
    pub lanelets: usize,
    /// (line number, message) pairs for recoverable oddities.
    pub warnings: Vec<(usize, String)>,
}

/// Reads and parses an OSM map file.
pub fn read_osm_file(path: &Path, projector: &Projector) -> Result<(LaneletMap, ParseReport)> {
    let bytes = std::fs::read(path)?;
    parse_osm(&bytes, projector)
}

/// Parses the OSM XML subset into a map. Sibling element order does not affect
/// the result.
pub fn parse_osm(input: &[u8], projector: &Projector) -> Result<(LaneletMap, ParseReport)> {
    let lines = LineTable::new(input);
    let mut reader = Reader::from_reader(input);
    let mut buf = Vec::new();

    let mut nodes: BTreeMap<u64, RawNode> = BTreeMap::new();
    let mut ways: BTreeMap<u64, RawWay> = BTreeMap::new();
    let mut relations: BTreeMap<u64, RawRelation> = BTreeMap::new();
    let mut pending: Option<Pending> = None;

    loop {
        buf.clear();
        let start = reader.buffer_position() as usize;
        let event = match reader.read_event_into(&mut buf) {
            Ok(event) => event,
            Err(err) => {
                let line = lines.line_of(reader.buffer_position() as usize);
                return Err(parse_err(line, format!("malformed XML: {err}")));
            }
        };
        let line = lines.line_of(start);
        match event {
            Event::Start(ref e) | Event::Empty(ref e) => {
                let closed = matches!(event, Event::Empty(_));
                match e.name().as_ref() {
                    b"node" => {
                        let raw = open_node(e, line)?;
                        open(&mut pending, Pending::Node(raw.0, raw.1), closed, &mut nodes, &mut ways, &mut relations, line)?;
                    }
                    b"way" => {
                        let attrs = attr_map(e, line)?;
                        let id = req_u64(&attrs, "id", "way", line)?;
                        let raw = RawWay { line, refs: Vec::new(), tags: Attributes::new() };
                        open(&mut pending, Pending::Way(id, raw), closed, &mut nodes, &mut ways, &mut relations, line)?;
                    }
                    b"relation" => {
                        let attrs = attr_map(e, line)?;
                        let id = req_u64(&attrs, "id", "relation", line)?;
                        let raw = RawRelation { line, members: Vec::new(), tags: Attributes::new() };
                        open(&mut pending, Pending::Relation(id, raw), closed, &mut nodes, &mut ways, &mut relations, line)?;
                    }
                    b"tag" => {
                        let attrs = attr_map(e, line)?;
                        let k = req_str(&attrs, "k", "tag", line)?;
                        let v = req_str(&attrs, "v", "tag", line)?;
                        match pending.as_mut() {
                            Some(Pending::Node(id, raw)) => {
                                let slot = match k {
                                    "local_x" => Some(&mut raw.local_x),
                                    "local_y" => Some(&mut raw.local_y),
                                    "ele" => Some(&mut raw.ele),
                                    _ => None,
                                };
                                if let Some(slot) = slot {
                                    let value = v.parse::<f64>().ok().filter(|f| f.is_finite());
                                    match value {
                                        Some(f) => *slot = Some(f),
                                        None => {
                                            return Err(parse_err(
                                                line,
                                                format!("node {id} tag {k:?} is not a number: {v:?}"),
                                            ))
                                        }
                                    }
                                }
                            }
                            Some(Pending::Way(_, raw)) => {
                                raw.tags.insert(k.to_string(), v.to_string());
                            }
                            Some(Pending::Relation(_, raw)) => {
                                raw.tags.insert(k.to_string(), v.to_string());
                            }
                            None => {}
                        }
                    }
                    b"nd" => {
                        if let Some(Pending::Way(_, raw)) = pending.as_mut() {
                            let attrs = attr_map(e, line)?;
                            raw.refs.push(req_u64(&attrs, "ref", "nd", line)?);
                        }
                    }
                    b"member" => {
                        if let Some(Pending::Relation(_, raw)) = pending.as_mut() {
                            let attrs = attr_map(e, line)?;
                            raw.members.push(Member {
                                kind: attrs.get("type").cloned().unwrap_or_default(),
                                role: attrs.get("role").cloned().unwrap_or_default(),
                                reference: req_u64(&attrs, "ref", "member", line)?,
                            });
                        }
                    }
                    _ => {}
                }
            }
            Event::End(ref e) => {
                if matches!(e.name().as_ref(), b"node" | b"way" | b"relation") {
                    if let Some(done) = pending.take() {
                        close(done, &mut nodes, &mut ways, &mut relations)?;
                    }
                }
            }
            Event::Eof => break,
            _ => {}
        }
    }

    assemble(nodes, ways, relations, projector)
}

struct RawNode {
    line: usize,
    lat: f64,
    lon: f64,
    local_x: Option<f64>,
    local_y: Option<f64>,
    ele: Option<f64>,
}

struct RawWay {
    line: usize,
    refs: Vec<u64>,
    tags: Attributes,
}

struct RawRelation {
    line: usize,
    members: Vec<Member>,
    tags: Attributes,
}

struct Member {
    kind: String,
    role: String,
    reference: u64,
}

enum Pending {
    Node(u64, RawNode),
    Way(u64, RawWay),
    Relation(u64, RawRelation),
}

fn open_node(e: &BytesStart, line: usize) -> Result<(u64, RawNode)> {
    let attrs = attr_map(e, line)?;
    let id = req_u64(&attrs, "id", "node", line)?;
    let lat = req_f64(&attrs, "lat", "node", line)?;
    let lon = req_f64(&attrs, "lon", "node", line)?;
    Ok((id, RawNode { line, lat, lon, local_x: None, local_y: None, ele: None }))
}

#[allow(clippy::too_many_arguments)]
fn open(
    pending: &mut Option<Pending>,
    next: Pending,
    closed: bool,
    nodes: &mut BTreeMap<u64, RawNode>,
    ways: &mut BTreeMap<u64, RawWay>,
    relations: &mut BTreeMap<u64, RawRelation>,
    line: usize,
) -> Result<()> {
    if pending.is_some() {
        return Err(parse_err(line, "unexpected nested element".to_string()));
    }
    if closed {
        close(next, nodes, ways, relations)
    } else {
        *pending = Some(next);
        Ok(())
    }
}

fn close(
    done: Pending,
    nodes: &mut BTreeMap<u64, RawNode>,
    ways: &mut BTreeMap<u64, RawWay>,
    relations: &mut BTreeMap<u64, RawRelation>,
) -> Result<()> {
    match done {
        Pending::Node(id, raw) => insert_unique(nodes, id, raw, "node"),
        Pending::Way(id, raw) => insert_unique(ways, id, raw, "way"),
        Pending::Relation(id, raw) => insert_unique(relations, id, raw, "relation"),
    }
}

fn insert_unique<T: HasLine>(map: &mut BTreeMap<u64, T>, id: u64, value: T, kind: &str) -> Result<()> {
    let line = value.line();
    if map.insert(id, value).is_some() {
        return Err(parse_err(line, format!("duplicate {kind} id {id}")));
    }
    Ok(())
}

trait HasLine {
    fn line(&self) -> usize;
}

impl HasLine for RawNode {
    fn line(&self) -> usize {
        self.line
    }
}

impl HasLine for RawWay {
    fn line(&self) -> usize {
        self.line
    }
}

impl HasLine for RawRelation {
    fn line(&self) -> usize {
        self.line
    }
}

fn assemble(
    nodes: BTreeMap<u64, RawNode>,
    ways: BTreeMap<u64, RawWay>,
    relations: BTreeMap<u64, RawRelation>,
    projector: &Projector,
) -> Result<(LaneletMap, ParseReport)> {
    let mut report = ParseReport::default();
    let mut builder = LaneletMap::builder()
        .metadata(MapMetadata { projector: projector.describe(), origin: projector.origin() });

    let mut positions: BTreeMap<u64, Vec3> = BTreeMap::new();
    for (id, raw) in nodes {
        let (x, y) = match projector {
            Projector::LocalMetric => match (raw.local_x, raw.local_y) {
                (Some(x), Some(y)) => (x, y),
                _ => {
                    return Err(parse_err(
                        raw.line,
                        format!("node {id} lacks local_x/local_y tags required by the local-metric projector"),
                    ))
                }
            },
            Projector::TangentPlane { .. } => projector.project(raw.lat, raw.lon)?,
        };
        let z = raw.ele.unwrap_or(0.0);
        positions.insert(id, Vec3::new(x, y, z));
        builder = builder.point(id, x, y, z)?;
    }

    let mut lanelet_specs: Vec<(u64, (u64, bool), (u64, bool), Attributes)> = Vec::new();
    for (id, mut raw) in relations {
        if raw.tags.get("type").map(String::as_str) != Some("lanelet") {
            let kind = raw.tags.get("type").cloned().unwrap_or_else(|| "<none>".to_string());
            report.warnings.push((raw.line, format!("relation {id} has unhandled type {kind:?}; skipped")));
            continue;
        }
        raw.tags.remove("type");
        let pick = |role: &str| -> Vec<u64> {
            raw.members
                .iter()
                .filter(|m| m.kind == "way" && m.role == role)
                .map(|m| m.reference)
                .collect()
        };
        let (lefts, rights) = (pick("left"), pick("right"));
        if lefts.len() != 1 || rights.len() != 1 {
            report.warnings.push((
                raw.line,
                format!("lanelet relation {id} needs exactly one left and one right way member; skipped"),
            ));
            continue;
        }
        let (Some(left_way), Some(right_way)) = (ways.get(&lefts[0]), ways.get(&rights[0])) else {
            report
                .warnings
                .push((raw.line, format!("lanelet relation {id} references a missing way; skipped")));
            continue;
        };
        let left_geom = resolve_geometry(&left_way.refs, &positions);
        let right_geom = resolve_geometry(&right_way.refs, &positions);
        let (linv, rinv) = infer_inversion(&left_geom, &right_geom);
        lanelet_specs.push((id, (lefts[0], linv), (rights[0], rinv), raw.tags));
    }

    for (id, raw) in ways {
        builder = builder.linestring(id, &raw.refs, raw.tags)?;
    }
    for (id, left, right, tags) in lanelet_specs {
        builder = builder.lanelet(id, left, right, tags)?;
    }

    let map = builder.build();
    report.points = map.point_count();
    report.linestrings = map.linestring_count();
    report.lanelets = map.lanelet_count();
    Ok((map, report))
}

/// Orients boundaries so both point in the driving direction: first flag
/// combination, preferring non-inverted, where the directed left start is
/// nearer the directed right start than the directed right end. One right
/// orientation always qualifies, so the stored left order wins and defines the
/// driving direction; swapped annotations surface in validation instead.
fn infer_inversion(left: &[Vec3], right: &[Vec3]) -> (bool, bool) {
    if left.is_empty() || right.is_empty() {
        return (false, false);
    }
    let ends = |geom: &[Vec3], inv: bool| -> (Vec3, Vec3) {
        if inv {
            (geom[geom.len() - 1], geom[0])
        } else {
            (geom[0], geom[geom.len() - 1])
        }
    };
    for (linv, rinv) in [(false, false), (false, true), (true, false), (true, true)] {
        let (lf, _) = ends(left, linv);
        let (rf, rl) = ends(right, rinv);
        if lf.dist(rf) <= lf.dist(rl) {
            return (linv, rinv);
        }
    }
    (false, false)
}

fn resolve_geometry(refs: &[u64], positions: &BTreeMap<u64, Vec3>) -> Vec<Vec3> {
    refs.iter().filter_map(|r| positions.get(r).copied()).collect()
}

struct LineTable(Vec<usize>);

impl LineTable {
    fn new(input: &[u8]) -> Self {
        Self(input.iter().enumerate().filter(|&(_, &b)| b == b'\n').map(|(i, _)| i).collect())
    }

    fn line_of(&self, byte: usize) -> usize {
        self.0.partition_point(|&o| o < byte) + 1
    }
}

fn parse_err(line: usize, message: String) -> Error {
    Error::Parse { line, message }
}

fn attr_map(e: &BytesStart, line: usize) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for attr in e.attributes() {
        let attr = attr.map_err(|err| parse_err(line, format!("bad attribute: {err}")))?;
        let key = String::from_utf8_lossy(attr.key.as_ref()).into_owned();
        let value = attr
            .unescape_value()
            .map_err(|err| parse_err(line, format!("bad attribute value: {err}")))?
            .into_owned();
        out.insert(key, value);
    }
    Ok(out)
}

fn req_str<'a>(
    attrs: &'a BTreeMap<String, String>,
    key: &str,
    what: &str,
    line: usize,
) -> Result<&'a str> {
    attrs
        .get(key)
        .map(String::as_str)
        .ok_or_else(|| parse_err(line, format!("{what} missing attribute {key:?}")))
}

fn req_u64(attrs: &BTreeMap<String, String>, key: &str, what: &str, line: usize) -> Result<u64> {
    let raw = req_str(attrs, key, what, line)?;
    raw.parse::<u64>()
        .map_err(|_| parse_err(line, format!("{what} attribute {key:?} is not a positive integer: {raw:?}")))
}

fn req_f64(attrs: &BTreeMap<String, String>, key: &str, what: &str, line: usize) -> Result<f64> {
    let raw = req_str(attrs, key, what, line)?;
    raw.parse::<f64>()
        .ok()
        .filter(|f| f.is_finite())
        .ok_or_else(|| parse_err(line, format!("{what} attribute {key:?} is not a number: {raw:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::ElementId;

    const S2_XML: &str = r#"<?xml version="1.0" encoding="UTF-8"?>
<osm version="0.6">
  <node id="101" lat="0" lon="0"><tag k="local_x" v="0"/><tag k="local_y" v="0"/></node>
  <node id="102" lat="0" lon="0"><tag k="local_x" v="10"/><tag k="local_y" v="0"/></node>
  <node id="103" lat="0" lon="0"><tag k="local_x" v="20"/><tag k="local_y" v="0"/></node>
  <node id="104" lat="0" lon="0"><tag k="local_x" v="0"/><tag k="local_y" v="3"/></node>
  <node id="105" lat="0" lon="0"><tag k="local_x" v="10"/><tag k="local_y" v="3"/></node>
  <node id="106" lat="0" lon="0"><tag k="local_x" v="20"/><tag k="local_y" v="3"/></node>
  <node id="107" lat="0" lon="0"><tag k="local_x" v="5"/><tag k="local_y" v="0"/></node>
  <node id="108" lat="0" lon="0"><tag k="local_x" v="15"/><tag k="local_y" v="3"/></node>
  <way id="201"><nd ref="104"/><nd ref="105"/><tag k="type" v="road_border"/></way>
  <way id="202"><nd ref="101"/><nd ref="107"/><nd ref="102"/><tag k="type" v="road_border"/></way>
  <way id="203"><nd ref="105"/><nd ref="108"/><nd ref="106"/><tag k="type" v="road_border"/></way>
  <way id="204"><nd ref="102"/><nd ref="103"/><tag k="type" v="road_border"/></way>
  <relation id="301"><member type="way" role="left" ref="201"/><member type="way" role="right" ref="202"/><tag k="type" v="lanelet"/></relation>
  <relation id="302"><member type="way" role="left" ref="203"/><member type="way" role="right" ref="204"/><tag k="type" v="lanelet"/></relation>
</osm>
"#;

    #[test]
    fn two_segment_fixture_counts() {
        let (map, report) = parse_osm(S2_XML.as_bytes(), &Projector::LocalMetric).unwrap();
        assert_eq!((report.points, report.linestrings, report.lanelets), (8, 4, 2));
        assert!(report.warnings.is_empty());
        assert_eq!(map.point(ElementId(107)).unwrap().position, Vec3::new(5.0, 0.0, 0.0));
        let a = map.lanelet(ElementId(301)).unwrap();
        assert_eq!(a.left.linestring, ElementId(201));
        assert_eq!(a.right.linestring, ElementId(202));
        assert!(!a.left.inverted && !a.right.inverted);
        assert_eq!(map.metadata.projector, "local");
    }

    #[test]
    fn empty_document() {
        let xml = "<?xml version=\"1.0\"?>\n<osm version=\"0.6\"/>\n";
        let (map, report) = parse_osm(xml.as_bytes(), &Projector::LocalMetric).unwrap();
        assert!(map.is_empty());
        assert_eq!((report.points, report.linestrings, report.lanelets), (0, 0, 0));
    }

    #[test]
    fn sibling_order_does_not_matter() {
        let mut lines: Vec<&str> = S2_XML.lines().collect();
        // Reverse the element block (everything between <osm> and </osm>).
        lines[2..16].reverse();
        let scrambled = lines.join("\n");
        let (a, _) = parse_osm(S2_XML.as_bytes(), &Projector::LocalMetric).unwrap();
        let (b, _) = parse_osm(scrambled.as_bytes(), &Projector::LocalMetric).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn relation_with_only_left_is_skipped_with_warning() {
        let xml = r#"<osm version="0.6">
  <node id="1" lat="0" lon="0"><tag k="local_x" v="0"/><tag k="local_y" v="0"/></node>
  <node id="2" lat="0" lon="0"><tag k="local_x" v="1"/><tag k="local_y" v="0"/></node>
  <way id="10"><nd ref="1"/><nd ref="2"/></way>
  <relation id="20"><member type="way" role="left" ref="10"/><tag k="type" v="lanelet"/></relation>
</osm>"#;
        let (map, report) = parse_osm(xml.as_bytes(), &Projector::LocalMetric).unwrap();
        assert_eq!(map.lanelet_count(), 0);
        assert_eq!(report.warnings.len(), 1);
        assert_eq!(report.warnings[0].0, 5);
        assert!(report.warnings[0].1.contains("relation 20"));
    }

    #[test]
    fn unknown_relation_type_warns() {
        let xml = r#"<osm version="0.6">
  <relation id="20"><member type="way" role="left" ref="10"/><tag k="type" v="regulatory_element"/></relation>
  <relation id="21"><member type="way" role="left" ref="10"/></relation>
</osm>"#;
        let (map, report) = parse_osm(xml.as_bytes(), &Projector::LocalMetric).unwrap();
        assert_eq!(map.lanelet_count(), 0);
        assert_eq!(report.warnings.len(), 2);
        assert!(report.warnings[0].1.contains("regulatory_element"));
    }

    #[test]
    fn malformed_xml_reports_line() {
        let xml = "<?xml version=\"1.0\"?>\n<osm version=\"0.6\">\n  <node id=\"1\" lat=\"0\" lon=\"0\">\n</osm>\n";
        let err = parse_osm(xml.as_bytes(), &Projector::LocalMetric).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn local_metric_requires_local_tags() {
        let xml = "<osm version=\"0.6\">\n  <node id=\"1\" lat=\"49.0\" lon=\"8.4\"/>\n</osm>";
        let err = parse_osm(xml.as_bytes(), &Projector::LocalMetric).unwrap_err();
        match err {
            Error::Parse { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("local_x"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn reversed_right_way_is_flagged_inverted() {
        let xml = r#"<osm version="0.6">
  <node id="1" lat="0" lon="0"><tag k="local_x" v="0"/><tag k="local_y" v="3"/></node>
  <node id="2" lat="0" lon="0"><tag k="local_x" v="10"/><tag k="local_y" v="3"/></node>
  <node id="3" lat="0" lon="0"><tag k="local_x" v="10"/><tag k="local_y" v="0"/></node>
  <node id="4" lat="0" lon="0"><tag k="local_x" v="0"/><tag k="local_y" v="0"/></node>
  <way id="10"><nd ref="1"/><nd ref="2"/></way>
  <way id="11"><nd ref="3"/><nd ref="4"/></way>
  <relation id="20"><member type="way" role="left" ref="10"/><member type="way" role="right" ref="11"/><tag k="type" v="lanelet"/></relation>
</osm>"#;
        let (map, _) = parse_osm(xml.as_bytes(), &Projector::LocalMetric).unwrap();
        let ll = map.lanelet(ElementId(20)).unwrap().clone();
        assert!(!ll.left.inverted);
        assert!(ll.right.inverted);
        let right = map.directed_boundary(&ll, crate::map::Side::Right).unwrap();
        assert_eq!(right[0], Vec3::new(0.0, 0.0, 0.0));
        assert_eq!(right[1], Vec3::new(10.0, 0.0, 0.0));
    }

    #[test]
    fn tangent_projection_places_nodes() {
        let xml = r#"<osm version="0.6">
  <node id="1" lat="49.0" lon="8.4"/>
  <node id="2" lat="49.00001" lon="8.4"/>
</osm>"#;
        let projector = Projector::tangent(49.0, 8.4).unwrap();
        let (map, _) = parse_osm(xml.as_bytes(), &projector).unwrap();
        assert_eq!(map.point(ElementId(1)).unwrap().position, Vec3::new(0.0, 0.0, 0.0));
        let p2 = map.point(ElementId(2)).unwrap().position;
        assert!((p2.y - 1.113).abs() < 1e-3);
        assert_eq!(map.metadata.origin, Some((49.0, 8.4)));
    }

    #[test]
    fn elevation_tag_becomes_z() {
        let xml = r#"<osm version="0.6">
  <node id="1" lat="0" lon="0"><tag k="local_x" v="2"/><tag k="local_y" v="3"/><tag k="ele" v="1.5"/></node>
</osm>"#;
        let (map, _) = parse_osm(xml.as_bytes(), &Projector::LocalMetric).unwrap();
        assert_eq!(map.point(ElementId(1)).unwrap().position, Vec3::new(2.0, 3.0, 1.5));
    }

    #[test]
    fn duplicate_node_id_is_an_error() {
        let xml = "<osm version=\"0.6\">\n  <node id=\"1\" lat=\"0\" lon=\"0\"/>\n  <node id=\"1\" lat=\"0\" lon=\"0\"/>\n</osm>";
        let err = parse_osm(xml.as_bytes(), &Projector::tangent(0.0, 0.0).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
    }
}
