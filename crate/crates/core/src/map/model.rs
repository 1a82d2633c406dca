//! Core map element types and the ID-indexed map container.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::Vec3;

/// Identifier of a map element. IDs are unique within one map across all element
/// kinds and are always >= 1.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementId(pub u64);

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub type Attributes = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq)]
pub struct Point3d {
    pub id: ElementId,
    pub position: Vec3,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LineString3d {
    pub id: ElementId,
    pub point_ids: Vec<ElementId>,
    pub attributes: Attributes,
}

/// Reference to a boundary linestring plus the flag that reverses its stored point
/// order so the materialized boundary points in driving direction.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct BoundaryRef {
    pub linestring: ElementId,
    pub inverted: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lanelet {
    pub id: ElementId,
    pub left: BoundaryRef,
    pub right: BoundaryRef,
    pub attributes: Attributes,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Lanelet {
    pub fn boundary(&self, side: Side) -> BoundaryRef {
        match side {
            Side::Left => self.left,
            Side::Right => self.right,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct MapMetadata {
    /// Human-readable description of the projector the coordinates came from.
    pub projector: String,
    /// Geodetic origin (lat, lon) for tangent-plane maps.
    pub origin: Option<(f64, f64)>,
}

/// Layered map container. Construct through [`MapBuilder`]; immutable afterwards.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LaneletMap {
    points: BTreeMap<ElementId, Point3d>,
    linestrings: BTreeMap<ElementId, LineString3d>,
    lanelets: BTreeMap<ElementId, Lanelet>,
    pub metadata: MapMetadata,
}

#[derive(Debug)]
pub enum Element<'a> {
    Point(&'a Point3d),
    LineString(&'a LineString3d),
    Lanelet(&'a Lanelet),
}

impl LaneletMap {
    pub fn builder() -> MapBuilder {
        MapBuilder::default()
    }

    /// Looks an ID up across all three layers; `None` when no element has it.
    pub fn resolve(&self, id: ElementId) -> Option<Element<'_>> {
        if let Some(p) = self.points.get(&id) {
            return Some(Element::Point(p));
        }
        if let Some(l) = self.linestrings.get(&id) {
            return Some(Element::LineString(l));
        }
        self.lanelets.get(&id).map(Element::Lanelet)
    }

    pub fn point(&self, id: ElementId) -> Option<&Point3d> {
        self.points.get(&id)
    }

    pub fn linestring(&self, id: ElementId) -> Option<&LineString3d> {
        self.linestrings.get(&id)
    }

    pub fn lanelet(&self, id: ElementId) -> Option<&Lanelet> {
        self.lanelets.get(&id)
    }

    pub fn points(&self) -> impl Iterator<Item = &Point3d> {
        self.points.values()
    }

    pub fn linestrings(&self) -> impl Iterator<Item = &LineString3d> {
        self.linestrings.values()
    }

    pub fn lanelets(&self) -> impl Iterator<Item = &Lanelet> {
        self.lanelets.values()
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    pub fn linestring_count(&self) -> usize {
        self.linestrings.len()
    }

    pub fn lanelet_count(&self) -> usize {
        self.lanelets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.linestrings.is_empty() && self.lanelets.is_empty()
    }

    /// Largest ID over all layers; 0 for an empty map.
    pub fn max_id(&self) -> u64 {
        let p = self.points.keys().next_back().map_or(0, |id| id.0);
        let l = self.linestrings.keys().next_back().map_or(0, |id| id.0);
        let a = self.lanelets.keys().next_back().map_or(0, |id| id.0);
        p.max(l).max(a)
    }

    /// Materializes a linestring's stored point sequence.
    pub fn linestring_geometry(&self, id: ElementId) -> Result<Vec<Vec3>> {
        let ls = self.linestrings.get(&id).ok_or(Error::Structural {
            element: id.0,
            message: "unknown linestring".into(),
        })?;
        ls.point_ids
            .iter()
            .map(|pid| {
                self.points.get(pid).map(|p| p.position).ok_or(Error::Structural {
                    element: id.0,
                    message: format!("linestring references missing point {pid}"),
                })
            })
            .collect()
    }

    /// Boundary point sequence in driving direction: the stored linestring order,
    /// reversed when the boundary's inversion flag is set.
    pub fn directed_boundary(&self, lanelet: &Lanelet, side: Side) -> Result<Vec<Vec3>> {
        let b = lanelet.boundary(side);
        let mut pts = self.linestring_geometry(b.linestring)?;
        if b.inverted {
            pts.reverse();
        }
        Ok(pts)
    }

    /// Point IDs of a boundary in driving direction.
    pub fn directed_boundary_ids(&self, lanelet: &Lanelet, side: Side) -> Result<Vec<ElementId>> {
        let b = lanelet.boundary(side);
        let ls = self.linestring(b.linestring).ok_or(Error::Structural {
            element: b.linestring.0,
            message: format!("lanelet {} references missing linestring", lanelet.id),
        })?;
        let mut ids = ls.point_ids.clone();
        if b.inverted {
            ids.reverse();
        }
        Ok(ids)
    }
}

/// Accumulates elements and enforces cross-kind ID uniqueness. Dangling references
/// are allowed at build time; [`crate::map::validate_map`] reports them.
#[derive(Debug, Default)]
pub struct MapBuilder {
    map: LaneletMap,
    seen: BTreeMap<ElementId, &'static str>,
}

impl MapBuilder {
    pub fn metadata(mut self, metadata: MapMetadata) -> Self {
        self.map.metadata = metadata;
        self
    }

    fn claim(&mut self, id: ElementId, kind: &'static str) -> Result<()> {
        if id.0 == 0 {
            return Err(Error::Structural { element: 0, message: format!("{kind} ID must be >= 1") });
        }
        if let Some(prev) = self.seen.insert(id, kind) {
            return Err(Error::Structural {
                element: id.0,
                message: format!("duplicate ID: already used by a {prev}"),
            });
        }
        Ok(())
    }

    pub fn point(mut self, id: u64, x: f64, y: f64, z: f64) -> Result<Self> {
        let id = ElementId(id);
        self.claim(id, "point")?;
        self.map.points.insert(id, Point3d { id, position: Vec3::new(x, y, z) });
        Ok(self)
    }

    pub fn linestring(mut self, id: u64, point_ids: &[u64], attributes: Attributes) -> Result<Self> {
        let id = ElementId(id);
        self.claim(id, "linestring")?;
        self.map.linestrings.insert(
            id,
            LineString3d { id, point_ids: point_ids.iter().map(|&p| ElementId(p)).collect(), attributes },
        );
        Ok(self)
    }

    pub fn lanelet(
        mut self,
        id: u64,
        left: (u64, bool),
        right: (u64, bool),
        attributes: Attributes,
    ) -> Result<Self> {
        let id = ElementId(id);
        self.claim(id, "lanelet")?;
        self.map.lanelets.insert(
            id,
            Lanelet {
                id,
                left: BoundaryRef { linestring: ElementId(left.0), inverted: left.1 },
                right: BoundaryRef { linestring: ElementId(right.0), inverted: right.1 },
                attributes,
            },
        );
        Ok(self)
    }

    pub fn build(self) -> LaneletMap {
        self.map
    }
}

/// Shorthand for building attribute maps in fixtures and tests.
pub fn attrs(pairs: &[(&str, &str)]) -> Attributes {
    pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::model::attrs;

    fn two_lane_map() -> LaneletMap {
        // A single lanelet: left border from (0,3) to (10,3), right from (0,0) to (10,0).
        LaneletMap::builder()
            .point(1, 0.0, 0.0, 0.0).unwrap()
            .point(2, 10.0, 0.0, 0.0).unwrap()
            .point(3, 0.0, 3.0, 0.0).unwrap()
            .point(4, 10.0, 3.0, 0.0).unwrap()
            .linestring(11, &[3, 4], attrs(&[("type", "road_border")])).unwrap()
            .linestring(12, &[1, 2], attrs(&[("type", "road_border")])).unwrap()
            .lanelet(21, (11, false), (12, false), Attributes::new()).unwrap()
            .build()
    }

    #[test]
    fn resolve_finds_each_kind() {
        let map = two_lane_map();
        assert!(matches!(map.resolve(ElementId(1)), Some(Element::Point(_))));
        assert!(matches!(map.resolve(ElementId(11)), Some(Element::LineString(_))));
        assert!(matches!(map.resolve(ElementId(21)), Some(Element::Lanelet(_))));
        assert!(map.resolve(ElementId(999999)).is_none());
        assert!(LaneletMap::default().resolve(ElementId(1)).is_none());
    }

    #[test]
    fn duplicate_ids_rejected_across_kinds() {
        let err = LaneletMap::builder()
            .point(5, 0.0, 0.0, 0.0)
            .unwrap()
            .linestring(5, &[1, 2], Attributes::new())
            .unwrap_err();
        assert!(matches!(err, Error::Structural { element: 5, .. }));
        assert!(LaneletMap::builder().point(0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn directed_boundary_applies_inversion() {
        let mut map = two_lane_map();
        let fwd = map.directed_boundary(&map.lanelet(ElementId(21)).unwrap().clone(), Side::Right).unwrap();
        assert_eq!(fwd[0], Vec3::new(0.0, 0.0, 0.0));
        // Flip the flag: the same linestring materializes reversed.
        let mut ll = map.lanelet(ElementId(21)).unwrap().clone();
        ll.right.inverted = true;
        let rev = map.directed_boundary(&ll, Side::Right).unwrap();
        assert_eq!(rev, fwd.iter().rev().copied().collect::<Vec<_>>());
        // Reversing the stored points AND setting the flag restores the output.
        let stored = map.linestrings.get_mut(&ElementId(12)).unwrap();
        stored.point_ids.reverse();
        let back = map.directed_boundary(&ll, Side::Right).unwrap();
        assert_eq!(back, fwd);
    }

    #[test]
    fn directed_boundary_reports_dangling_linestring() {
        let map = LaneletMap::builder()
            .lanelet(7, (100, false), (101, false), Attributes::new())
            .unwrap()
            .build();
        let ll = map.lanelet(ElementId(7)).unwrap().clone();
        assert!(matches!(map.directed_boundary(&ll, Side::Left), Err(Error::Structural { element: 100, .. })));
    }

    #[test]
    fn max_id_spans_layers() {
        assert_eq!(two_lane_map().max_id(), 21);
        assert_eq!(LaneletMap::default().max_id(), 0);
    }
}
