//! ROI submap selection backed by a uniform grid index.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::Result;
use crate::geometry::{Aabb, RoiSpec, Vec3};
use crate::map::{ElementId, LaneletMap, Side};
use crate::pose::ReferencePose;

const CELL_SIZE: f64 = 25.0;
const LARGE_DIAGONAL: f64 = 50.0;
/// Map-frame query inflation. A lanelet whose local-frame box touches the
/// selection rectangle has a boundary point within sqrt(2) times its own box
/// diagonal of that rectangle, so 75 m covers every non-large lanelet.
const QUERY_SLACK: f64 = 75.0;

/// Uniform-grid index over map-frame lanelet bounding boxes. Lanelets with a
/// diagonal over 50 m go to an always-checked list, keeping the grid query a
/// proven superset; exact filtering happens in [`extract_submap`].
#[derive(Debug, Default, Clone)]
pub struct SpatialIndex {
    cells: BTreeMap<(i64, i64), Vec<ElementId>>,
    large: Vec<ElementId>,
    boxes: BTreeMap<ElementId, Aabb>,
}

impl SpatialIndex {
    pub fn build(map: &LaneletMap) -> Result<SpatialIndex> {
        let mut index = SpatialIndex::default();
        for ll in map.lanelets() {
            let mut bounds = Aabb::empty();
            for side in [Side::Left, Side::Right] {
                for p in map.linestring_geometry(ll.boundary(side).linestring)? {
                    bounds.expand(p);
                }
            }
            if bounds.is_empty() {
                continue;
            }
            if bounds.diagonal() > LARGE_DIAGONAL {
                index.large.push(ll.id);
            } else {
                let (c0, r0) = cell_of(bounds.min_x, bounds.min_y);
                let (c1, r1) = cell_of(bounds.max_x, bounds.max_y);
                for c in c0..=c1 {
                    for r in r0..=r1 {
                        index.cells.entry((c, r)).or_default().push(ll.id);
                    }
                }
            }
            index.boxes.insert(ll.id, bounds);
        }
        Ok(index)
    }

    /// Superset of the lanelets whose map-frame box can touch `rect`.
    pub fn candidates(&self, rect: &Aabb) -> BTreeSet<ElementId> {
        let mut out: BTreeSet<ElementId> = self.large.iter().copied().collect();
        if rect.is_empty() {
            return out;
        }
        let query = rect.inflate(QUERY_SLACK);
        let (c0, r0) = cell_of(query.min_x, query.min_y);
        let (c1, r1) = cell_of(query.max_x, query.max_y);
        for ((c, r), ids) in self.cells.range((c0, r0)..=(c1, r1)) {
            if *c < c0 || *c > c1 || *r < r0 || *r > r1 {
                continue;
            }
            out.extend(ids.iter().copied());
        }
        out
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }
}

fn cell_of(x: f64, y: f64) -> (i64, i64) {
    ((x / CELL_SIZE).floor() as i64, (y / CELL_SIZE).floor() as i64)
}

/// Lanelets whose boundary polylines, transformed to the pose's local frame,
/// have an axis-aligned bounding box intersecting the ROI rectangle inflated
/// by its margin.
pub fn extract_submap(
    map: &LaneletMap,
    index: &SpatialIndex,
    pose: &ReferencePose,
    roi: &RoiSpec,
) -> Result<BTreeSet<ElementId>> {
    let selection = roi.selection_rect();
    let corners = [
        Vec3::new(selection.min_x, selection.min_y, 0.0),
        Vec3::new(selection.max_x, selection.min_y, 0.0),
        Vec3::new(selection.min_x, selection.max_y, 0.0),
        Vec3::new(selection.max_x, selection.max_y, 0.0),
    ];
    let map_rect = Aabb::from_points(corners.map(|c| pose.local_to_world(c)).iter());
    filter_exact(map, index.candidates(&map_rect), pose, &selection)
}

/// Index-free reference implementation scanning every lanelet.
pub fn extract_submap_scan(
    map: &LaneletMap,
    pose: &ReferencePose,
    roi: &RoiSpec,
) -> Result<BTreeSet<ElementId>> {
    let all = map.lanelets().map(|ll| ll.id).collect();
    filter_exact(map, all, pose, &roi.selection_rect())
}

fn filter_exact(
    map: &LaneletMap,
    candidates: BTreeSet<ElementId>,
    pose: &ReferencePose,
    selection: &Aabb,
) -> Result<BTreeSet<ElementId>> {
    let mut out = BTreeSet::new();
    for id in candidates {
        let Some(ll) = map.lanelet(id) else { continue };
        let mut local = Aabb::empty();
        for side in [Side::Left, Side::Right] {
            for p in map.linestring_geometry(ll.boundary(side).linestring)? {
                local.expand(pose.world_to_local(p));
            }
        }
        if local.intersects(selection) {
            out.insert(id);
        }
    }
    Ok(out)
}
