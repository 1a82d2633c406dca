//! Built-in sample maps and synthetic generators, shared by unit tests,
//! integration tests, benches, and the CLI's synthetic benchmark mode.
//!
//! All maps use metric coordinates (`local` projector), straight boundary
//! segments, and boundaries stored in driving direction (no inversion flags),
//! so they survive OSM round-trips unchanged.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{cumulative_arcs, Vec3};
use crate::io::{write_osm, Projector};
use crate::map::{attrs, Attributes, ElementId, LaneletMap, MapBuilder, MapMetadata};

fn local_builder() -> MapBuilder {
    LaneletMap::builder()
        .metadata(MapMetadata { projector: "local".to_string(), origin: None })
}

fn border() -> Attributes {
    attrs(&[("type", "road_border")])
}

fn dashed() -> Attributes {
    attrs(&[("type", "line_thin"), ("subtype", "dashed")])
}

/// Two straight lanelets in sequence: A from x=0 to 10, B from 10 to 20, lane
/// width 3. A's right boundary and B's left boundary carry one interior vertex
/// each, giving 8 nodes total.
pub fn map_s2() -> LaneletMap {
    s2_with_elevation(|_, _| 0.0)
}

/// [`map_s2`] on a constant grade: z = x / 10.
pub fn map_s2_ramp() -> LaneletMap {
    s2_with_elevation(|x, _| x / 10.0)
}

fn s2_with_elevation(z: impl Fn(f64, f64) -> f64) -> LaneletMap {
    let pt = |b: MapBuilder, id: u64, x: f64, y: f64| b.point(id, x, y, z(x, y)).unwrap();
    let mut b = local_builder();
    b = pt(b, 101, 0.0, 0.0);
    b = pt(b, 102, 10.0, 0.0);
    b = pt(b, 103, 20.0, 0.0);
    b = pt(b, 104, 0.0, 3.0);
    b = pt(b, 105, 10.0, 3.0);
    b = pt(b, 106, 20.0, 3.0);
    b = pt(b, 107, 5.0, 0.0);
    b = pt(b, 108, 15.0, 3.0);
    b.linestring(201, &[104, 105], border()).unwrap()
        .linestring(202, &[101, 107, 102], border()).unwrap()
        .linestring(203, &[105, 108, 106], border()).unwrap()
        .linestring(204, &[102, 103], border()).unwrap()
        .lanelet(301, (201, false), (202, false), attrs(&[])).unwrap()
        .lanelet(302, (203, false), (204, false), attrs(&[])).unwrap()
        .build()
}

/// A branch: lanelet A continues straight into B and also forks right into C.
pub fn map_b3() -> LaneletMap {
    local_builder()
        .point(101, 0.0, 0.0, 0.0).unwrap()
        .point(102, 10.0, 0.0, 0.0).unwrap()
        .point(103, 20.0, 0.0, 0.0).unwrap()
        .point(104, 0.0, 3.0, 0.0).unwrap()
        .point(105, 10.0, 3.0, 0.0).unwrap()
        .point(106, 20.0, 3.0, 0.0).unwrap()
        .point(107, 20.0, 6.0, 0.0).unwrap()
        .point(108, 19.0, 9.0, 0.0).unwrap()
        .linestring(201, &[104, 105], border()).unwrap()
        .linestring(202, &[101, 102], border()).unwrap()
        .linestring(203, &[105, 106], border()).unwrap()
        .linestring(204, &[102, 103], border()).unwrap()
        .linestring(205, &[105, 108], border()).unwrap()
        .linestring(206, &[102, 107], border()).unwrap()
        .lanelet(301, (201, false), (202, false), attrs(&[])).unwrap()
        .lanelet(302, (203, false), (204, false), attrs(&[])).unwrap()
        .lanelet(303, (205, false), (206, false), attrs(&[])).unwrap()
        .build()
}

/// Two parallel lanes, each split into two segments, sharing a dashed divider:
///
/// ```text
/// y=6  101--102--103   (road border)
/// y=3  104--105--106   (dashed divider)          lane A: 301, 302
/// y=0  107--108--109   (road border)             lane B: 303, 304
/// ```
pub fn map_p4() -> LaneletMap {
    local_builder()
        .point(101, 0.0, 6.0, 0.0).unwrap()
        .point(102, 10.0, 6.0, 0.0).unwrap()
        .point(103, 20.0, 6.0, 0.0).unwrap()
        .point(104, 0.0, 3.0, 0.0).unwrap()
        .point(105, 10.0, 3.0, 0.0).unwrap()
        .point(106, 20.0, 3.0, 0.0).unwrap()
        .point(107, 0.0, 0.0, 0.0).unwrap()
        .point(108, 10.0, 0.0, 0.0).unwrap()
        .point(109, 20.0, 0.0, 0.0).unwrap()
        .linestring(201, &[101, 102], border()).unwrap()
        .linestring(202, &[102, 103], border()).unwrap()
        .linestring(203, &[104, 105], dashed()).unwrap()
        .linestring(204, &[105, 106], dashed()).unwrap()
        .linestring(205, &[107, 108], border()).unwrap()
        .linestring(206, &[108, 109], border()).unwrap()
        .lanelet(301, (201, false), (203, false), attrs(&[])).unwrap()
        .lanelet(302, (202, false), (204, false), attrs(&[])).unwrap()
        .lanelet(303, (203, false), (205, false), attrs(&[])).unwrap()
        .lanelet(304, (204, false), (206, false), attrs(&[])).unwrap()
        .build()
}

/// Two sequential lanelets whose right boundary changes class mid-way: road
/// border on the first, dashed line on the second.
pub fn map_t() -> LaneletMap {
    local_builder()
        .point(101, 0.0, 3.0, 0.0).unwrap()
        .point(102, 10.0, 3.0, 0.0).unwrap()
        .point(103, 20.0, 3.0, 0.0).unwrap()
        .point(104, 0.0, 0.0, 0.0).unwrap()
        .point(105, 10.0, 0.0, 0.0).unwrap()
        .point(106, 20.0, 0.0, 0.0).unwrap()
        .linestring(201, &[101, 102], border()).unwrap()
        .linestring(202, &[104, 105], border()).unwrap()
        .linestring(203, &[102, 103], border()).unwrap()
        .linestring(204, &[105, 106], dashed()).unwrap()
        .lanelet(301, (201, false), (202, false), attrs(&[])).unwrap()
        .lanelet(302, (203, false), (204, false), attrs(&[])).unwrap()
        .build()
}

/// Closed square ring of four lanelets, driven counter-clockwise. Every lanelet
/// has a predecessor, exercising cycle seeding.
pub fn map_r() -> LaneletMap {
    local_builder()
        .point(101, -10.0, -10.0, 0.0).unwrap()
        .point(102, 10.0, -10.0, 0.0).unwrap()
        .point(103, 10.0, 10.0, 0.0).unwrap()
        .point(104, -10.0, 10.0, 0.0).unwrap()
        .point(105, -7.0, -7.0, 0.0).unwrap()
        .point(106, 7.0, -7.0, 0.0).unwrap()
        .point(107, 7.0, 7.0, 0.0).unwrap()
        .point(108, -7.0, 7.0, 0.0).unwrap()
        .linestring(201, &[105, 106], border()).unwrap()
        .linestring(202, &[101, 102], border()).unwrap()
        .linestring(203, &[106, 107], border()).unwrap()
        .linestring(204, &[102, 103], border()).unwrap()
        .linestring(205, &[107, 108], border()).unwrap()
        .linestring(206, &[103, 104], border()).unwrap()
        .linestring(207, &[108, 105], border()).unwrap()
        .linestring(208, &[104, 101], border()).unwrap()
        .lanelet(301, (201, false), (202, false), attrs(&[])).unwrap()
        .lanelet(302, (203, false), (204, false), attrs(&[])).unwrap()
        .lanelet(303, (205, false), (206, false), attrs(&[])).unwrap()
        .lanelet(304, (207, false), (208, false), attrs(&[])).unwrap()
        .build()
}

/// A main lane of two segments plus an exit lanelet forking right after the
/// first segment: one branching path pair with partially shared boundaries.
pub fn map_exit() -> LaneletMap {
    local_builder()
        .point(101, 0.0, 3.0, 0.0).unwrap()
        .point(102, 10.0, 3.0, 0.0).unwrap()
        .point(103, 20.0, 3.0, 0.0).unwrap()
        .point(104, 0.0, 0.0, 0.0).unwrap()
        .point(105, 10.0, 0.0, 0.0).unwrap()
        .point(106, 20.0, 0.0, 0.0).unwrap()
        .point(107, 20.0, -1.0, 0.0).unwrap()
        .point(108, 20.0, -4.0, 0.0).unwrap()
        .linestring(201, &[101, 102], border()).unwrap()
        .linestring(202, &[104, 105], border()).unwrap()
        .linestring(203, &[102, 103], border()).unwrap()
        .linestring(204, &[105, 106], dashed()).unwrap()
        .linestring(205, &[102, 107], dashed()).unwrap()
        .linestring(206, &[105, 108], border()).unwrap()
        .lanelet(301, (201, false), (202, false), attrs(&[])).unwrap()
        .lanelet(302, (203, false), (204, false), attrs(&[])).unwrap()
        .lanelet(303, (205, false), (206, false), attrs(&[])).unwrap()
        .build()
}

/// All canonical maps by short name.
pub fn canonical_maps() -> Vec<(&'static str, LaneletMap)> {
    vec![
        ("s2", map_s2()),
        ("s2-ramp", map_s2_ramp()),
        ("b3", map_b3()),
        ("p4", map_p4()),
        ("t", map_t()),
        ("r", map_r()),
        ("exit", map_exit()),
    ]
}

/// Rectangular lane grid with `lanelets` cells (roughly 15 m by 3.5 m each),
/// filled row-major, with seeded sub-meter node jitter. Interior horizontal
/// boundaries are dashed dividers shared by the lanes above and below them;
/// outer ones are road borders.
pub fn synthetic_grid(lanelets: usize, seed: u64) -> LaneletMap {
    const CELL_W: f64 = 15.0;
    const CELL_H: f64 = 3.5;
    assert!(lanelets >= 1);
    let cols = (lanelets as f64 * 1.6).sqrt().ceil() as usize;
    let rows = lanelets.div_ceil(cols);
    let cell_exists = |r: usize, c: usize| r < rows && c < cols && r * cols + c < lanelets;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut next_id = 1u64;
    let alloc = |n: &mut u64| {
        let id = *n;
        *n += 1;
        id
    };

    // Nodes at cell corners, jittered once so shared boundaries stay shared.
    let mut nodes: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut builder = local_builder();
    for level in 0..=rows {
        for corner in 0..=cols {
            let needed = (corner < cols && (cell_exists(level, corner) || level > 0 && cell_exists(level - 1, corner)))
                || (corner > 0 && (cell_exists(level, corner - 1) || level > 0 && cell_exists(level - 1, corner - 1)));
            if !needed {
                continue;
            }
            let id = alloc(&mut next_id);
            let x = corner as f64 * CELL_W + rng.gen_range(-0.5..=0.5);
            let y = level as f64 * CELL_H + rng.gen_range(-0.3..=0.3);
            builder = builder.point(id, x, y, 0.0).unwrap();
            nodes.insert((level, corner), id);
        }
    }

    let mut ways: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for level in 0..=rows {
        for cell in 0..cols {
            let above = cell_exists(level, cell);
            let below = level > 0 && cell_exists(level - 1, cell);
            if !above && !below {
                continue;
            }
            let id = alloc(&mut next_id);
            let tags = if above && below { dashed() } else { border() };
            builder = builder
                .linestring(id, &[nodes[&(level, cell)], nodes[&(level, cell + 1)]], tags)
                .unwrap();
            ways.insert((level, cell), id);
        }
    }

    for r in 0..rows {
        for c in 0..cols {
            if !cell_exists(r, c) {
                continue;
            }
            let id = alloc(&mut next_id);
            builder = builder
                .lanelet(id, (ways[&(r + 1, c)], false), (ways[&(r, c)], false), attrs(&[]))
                .unwrap();
        }
    }
    builder.build()
}

/// Splits a lanelet into two consecutive lanelets at the given arc fraction of
/// each boundary, cascading through every lanelet that shares a split boundary.
/// A split landing on an existing interior vertex reuses it. Requires all
/// affected boundaries stored in driving direction.
pub fn split_lanelet(map: &LaneletMap, lanelet: u64, fraction: f64) -> Result<LaneletMap> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::Degenerate(format!("split fraction {fraction} outside (0, 1)")));
    }
    let start = ElementId(lanelet);
    if map.lanelet(start).is_none() {
        return Err(Error::Structural { element: lanelet, message: "no such lanelet".to_string() });
    }

    // Closure over shared boundaries.
    let mut affected: BTreeSet<ElementId> = BTreeSet::new();
    let mut split_ways: BTreeSet<ElementId> = BTreeSet::new();
    let mut queue = vec![start];
    while let Some(id) = queue.pop() {
        if !affected.insert(id) {
            continue;
        }
        let ll = map.lanelet(id).unwrap();
        for b in [ll.left, ll.right] {
            if b.inverted {
                return Err(Error::Unsupported(
                    "splitting inverted boundaries is not supported".to_string(),
                ));
            }
            if split_ways.insert(b.linestring) {
                for other in map.lanelets() {
                    if other.left.linestring == b.linestring || other.right.linestring == b.linestring {
                        queue.push(other.id);
                    }
                }
            }
        }
    }

    let mut next_id = map.max_id() + 1;
    let mut alloc = || {
        let id = next_id;
        next_id += 1;
        id
    };

    // Split each way at its own arc fraction.
    struct WaySplit {
        first_id: u64,
        second_id: u64,
        first: Vec<u64>,
        second: Vec<u64>,
        new_node: Option<(u64, Vec3)>,
    }
    let mut halves: BTreeMap<ElementId, WaySplit> = BTreeMap::new();
    for &way in &split_ways {
        let ls = map
            .linestring(way)
            .ok_or(Error::Structural { element: way.0, message: "missing linestring".to_string() })?;
        let geom = map.linestring_geometry(way)?;
        let arcs = cumulative_arcs(&geom);
        let total = *arcs.last().unwrap();
        if total <= 0.0 {
            return Err(Error::Degenerate(format!("cannot split zero-length way {way}")));
        }
        let target = fraction * total;
        let ids: Vec<u64> = ls.point_ids.iter().map(|p| p.0).collect();
        let at_vertex = arcs
            .iter()
            .position(|&a| (a - target).abs() < 1e-9)
            .filter(|&i| i > 0 && i + 1 < ids.len());
        let (first, second, new_node) = match at_vertex {
            Some(i) => (ids[..=i].to_vec(), ids[i..].to_vec(), None),
            None => {
                let seg = arcs.partition_point(|&a| a < target).min(ids.len() - 1);
                let t = (target - arcs[seg - 1]) / (arcs[seg] - arcs[seg - 1]);
                let pos = geom[seg - 1].lerp(geom[seg], t);
                let node = alloc();
                let mut first = ids[..seg].to_vec();
                first.push(node);
                let mut second = vec![node];
                second.extend_from_slice(&ids[seg..]);
                (first, second, Some((node, pos)))
            }
        };
        let (first_id, second_id) = (alloc(), alloc());
        halves.insert(way, WaySplit { first_id, second_id, first, second, new_node });
    }

    let mut lanelet_ids: BTreeMap<ElementId, (u64, u64)> = BTreeMap::new();
    for &id in &affected {
        lanelet_ids.insert(id, (alloc(), alloc()));
    }

    let mut builder = LaneletMap::builder().metadata(map.metadata.clone());
    for p in map.points() {
        builder = builder.point(p.id.0, p.position.x, p.position.y, p.position.z)?;
    }
    for split in halves.values() {
        if let Some((id, pos)) = split.new_node {
            builder = builder.point(id, pos.x, pos.y, pos.z)?;
        }
    }
    for ls in map.linestrings() {
        match halves.get(&ls.id) {
            None => {
                let ids: Vec<u64> = ls.point_ids.iter().map(|p| p.0).collect();
                builder = builder.linestring(ls.id.0, &ids, ls.attributes.clone())?;
            }
            Some(split) => {
                builder = builder.linestring(split.first_id, &split.first, ls.attributes.clone())?;
                builder = builder.linestring(split.second_id, &split.second, ls.attributes.clone())?;
            }
        }
    }
    for ll in map.lanelets() {
        match lanelet_ids.get(&ll.id) {
            None => {
                builder = builder.lanelet(
                    ll.id.0,
                    (ll.left.linestring.0, ll.left.inverted),
                    (ll.right.linestring.0, ll.right.inverted),
                    ll.attributes.clone(),
                )?;
            }
            Some(&(first, second)) => {
                let left = &halves[&ll.left.linestring];
                let right = &halves[&ll.right.linestring];
                builder = builder
                    .lanelet(first, (left.first_id, false), (right.first_id, false), ll.attributes.clone())?;
                builder = builder
                    .lanelet(second, (left.second_id, false), (right.second_id, false), ll.attributes.clone())?;
            }
        }
    }
    Ok(builder.build())
}

/// Serializes a map to OSM XML with element order shuffled by `seed`, for
/// order-insensitivity checks.
pub fn write_osm_scrambled(map: &LaneletMap, seed: u64) -> Result<Vec<u8>> {
    let canonical = write_osm(map, &Projector::LocalMetric)?;
    let text = String::from_utf8(canonical).expect("writer emits UTF-8");
    let mut head = Vec::new();
    let mut blocks: Vec<Vec<&str>> = Vec::new();
    let mut tail = Vec::new();
    for line in text.lines() {
        let trimmed = line.trim_start();
        if line.starts_with("  <") && !trimmed.starts_with("</") && !line.starts_with("    ") {
            blocks.push(vec![line]);
        } else if let Some(block) = blocks.last_mut() {
            if line.starts_with("  </") || line.starts_with("    ") {
                block.push(line);
            } else {
                tail.push(line);
            }
        } else if blocks.is_empty() && tail.is_empty() {
            head.push(line);
        } else {
            tail.push(line);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    blocks.shuffle(&mut rng);
    let mut out = head.join("\n");
    for block in &blocks {
        out.push('\n');
        out.push_str(&block.join("\n"));
    }
    if !tail.is_empty() {
        out.push('\n');
        out.push_str(&tail.join("\n"));
    }
    out.push('\n');
    Ok(out.into_bytes())
}
