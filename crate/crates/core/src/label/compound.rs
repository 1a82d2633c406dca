//! Builds compound labels along one lanelet path, in the map frame.

use crate::error::{Error, Result};
use crate::geometry::{polyline_length, Vec3};
use crate::label::{CompoundLabel, LabelClass, TraceRecord};
use crate::map::{centerline, classify_boundary, BoundaryClass, ElementId, LaneletMap, Side};
use crate::routing::LaneletPath;

/// Junction points closer than this are merged when chaining members.
pub const JUNCTION_EPS: f64 = 1e-6;

struct ChainMember {
    element: ElementId,
    inverted: bool,
    class: BoundaryClass,
    geometry: Vec<Vec3>,
}

fn label_for(class: BoundaryClass) -> Option<(LabelClass, Option<&'static str>)> {
    match class {
        BoundaryClass::RoadBorder => Some((LabelClass::RoadBorder, None)),
        BoundaryClass::LaneDividerDashed => Some((LabelClass::LaneDivider, Some("dashed"))),
        BoundaryClass::LaneDividerSolid => Some((LabelClass::LaneDivider, Some("solid"))),
        BoundaryClass::Virtual | BoundaryClass::Unknown => None,
    }
}

fn boundary_members(map: &LaneletMap, path: &LaneletPath, side: Side) -> Result<Vec<ChainMember>> {
    let mut members = Vec::with_capacity(path.lanelets.len());
    for &id in &path.lanelets {
        let ll = map
            .lanelet(id)
            .ok_or(Error::Structural { element: id.0, message: "path lanelet not in map".into() })?;
        let bref = match side {
            Side::Left => ll.left,
            Side::Right => ll.right,
        };
        let ls = map.linestring(bref.linestring).ok_or(Error::Structural {
            element: bref.linestring.0,
            message: "boundary linestring not in map".into(),
        })?;
        members.push(ChainMember {
            element: bref.linestring,
            inverted: bref.inverted,
            class: classify_boundary(&ls.attributes),
            geometry: map.directed_boundary(ll, side)?,
        });
    }
    Ok(members)
}

fn centerline_members(map: &LaneletMap, path: &LaneletPath) -> Result<Vec<ChainMember>> {
    let mut members = Vec::with_capacity(path.lanelets.len());
    for &id in &path.lanelets {
        let ll = map
            .lanelet(id)
            .ok_or(Error::Structural { element: id.0, message: "path lanelet not in map".into() })?;
        members.push(ChainMember {
            element: id,
            inverted: false,
            class: BoundaryClass::Unknown,
            geometry: centerline(map, ll)?,
        });
    }
    Ok(members)
}

/// Concatenates member geometries into one compound, skipping duplicated
/// junction points and recording per-member arc ranges.
fn assemble(
    members: &[ChainMember],
    class: LabelClass,
    subtype: Option<&'static str>,
    source_path_index: usize,
) -> Result<CompoundLabel> {
    let mut points: Vec<Vec3> = Vec::new();
    let mut trace = Vec::with_capacity(members.len());
    let mut total = 0.0;
    for m in members {
        let len = polyline_length(&m.geometry);
        if len <= 0.0 {
            return Err(Error::Structural {
                element: m.element.0,
                message: "zero-length chain member".into(),
            });
        }
        let mut geom = m.geometry.iter();
        if let Some(last) = points.last() {
            if last.dist(m.geometry[0]) <= JUNCTION_EPS {
                geom.next();
            }
        }
        points.extend(geom.copied());
        trace.push(TraceRecord {
            element: m.element,
            arc_start: total,
            arc_end: total + len,
            inverted: m.inverted,
            member_start: 0.0,
            member_end: len,
        });
        total += len;
    }
    Ok(CompoundLabel {
        class,
        subtype: subtype.map(str::to_string),
        points,
        trace,
        source_path_index,
    })
}

/// Builds all compound labels for one path: per boundary side one compound per
/// maximal run of a constant boundary class (virtual and unknown runs are
/// dropped), plus one centerline compound spanning the whole path.
pub fn build_path_compounds(
    map: &LaneletMap,
    path: &LaneletPath,
    source_path_index: usize,
) -> Result<Vec<CompoundLabel>> {
    let mut out = Vec::new();
    for side in [Side::Left, Side::Right] {
        let members = boundary_members(map, path, side)?;
        for run in members.chunk_by(|a, b| a.class == b.class) {
            if let Some((class, subtype)) = label_for(run[0].class) {
                out.push(assemble(run, class, subtype, source_path_index)?);
            }
        }
    }
    let center = centerline_members(map, path)?;
    out.push(assemble(&center, LabelClass::Centerline, None, source_path_index)?);
    Ok(out)
}
