//! Overlap elimination: every border/divider linestring survives in exactly
//! one compound label.

use std::collections::BTreeSet;

use crate::geometry::slice_by_arc;
use crate::label::{CompoundLabel, TraceRecord};
use crate::map::ElementId;

/// Cuts `label` down to the trace records `i..=j`, rebasing arc positions.
fn slice_members(label: &CompoundLabel, i: usize, j: usize) -> CompoundLabel {
    let a0 = label.trace[i].arc_start;
    let a1 = label.trace[j].arc_end;
    let trace: Vec<TraceRecord> = label.trace[i..=j]
        .iter()
        .map(|r| TraceRecord {
            element: r.element,
            arc_start: r.arc_start - a0,
            arc_end: r.arc_end - a0,
            inverted: r.inverted,
            member_start: r.member_start,
            member_end: r.member_end,
        })
        .collect();
    CompoundLabel {
        class: label.class,
        subtype: label.subtype.clone(),
        points: slice_by_arc(&label.points, a0, a1),
        trace,
        source_path_index: label.source_path_index,
    }
}

/// Reduces border/divider compounds so each member linestring ends up in
/// exactly one output compound. Compounds are processed largest first (total
/// arc length, ties by smaller first-member ID, then smaller path index); a
/// compound whose members are all claimed is dropped, a partially claimed one
/// is trimmed to its maximal unclaimed member runs. Centerlines must not be
/// passed here; they are exempt from elimination.
pub fn eliminate_overlaps(compounds: Vec<CompoundLabel>) -> Vec<CompoundLabel> {
    let mut order: Vec<usize> = (0..compounds.len()).collect();
    order.sort_by(|&a, &b| {
        let (ca, cb) = (&compounds[a], &compounds[b]);
        cb.arc_length()
            .total_cmp(&ca.arc_length())
            .then(ca.trace[0].element.cmp(&cb.trace[0].element))
            .then(ca.source_path_index.cmp(&cb.source_path_index))
    });

    let mut claimed: BTreeSet<ElementId> = BTreeSet::new();
    let mut kept: Vec<CompoundLabel> = Vec::new();
    for idx in order {
        let label = &compounds[idx];
        let free: Vec<bool> = label.trace.iter().map(|r| !claimed.contains(&r.element)).collect();
        let mut i = 0;
        while i < free.len() {
            if !free[i] {
                i += 1;
                continue;
            }
            let mut j = i;
            while j + 1 < free.len() && free[j + 1] {
                j += 1;
            }
            if i == 0 && j == free.len() - 1 {
                kept.push(label.clone());
            } else {
                kept.push(slice_members(label, i, j));
            }
            claimed.extend(label.trace[i..=j].iter().map(|r| r.element));
            i = j + 1;
        }
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::label::{build_path_compounds, LabelClass};
    use crate::map::LaneletMap;
    use crate::routing::{build_routing_graph, enumerate_paths, PathLimits};

    fn path_compounds(map: &LaneletMap) -> Vec<CompoundLabel> {
        let graph = build_routing_graph(map).unwrap();
        let submap = map.lanelets().map(|ll| ll.id).collect();
        let paths = enumerate_paths(&graph, &submap, &PathLimits::default()).unwrap();
        let mut out = Vec::new();
        for (i, path) in paths.iter().enumerate() {
            out.extend(
                build_path_compounds(map, path, i)
                    .unwrap()
                    .into_iter()
                    .filter(|l| l.class != LabelClass::Centerline),
            );
        }
        out
    }

    fn member_sets(labels: &[CompoundLabel]) -> Vec<Vec<u64>> {
        labels.iter().map(|l| l.member_ids().map(|id| id.0).collect()).collect()
    }

    #[test]
    fn disjoint_compounds_unchanged() {
        let input = path_compounds(&fixtures::map_t());
        let n = input.len();
        let kept = eliminate_overlaps(input);
        assert_eq!(kept.len(), n);
        let mut seen = BTreeSet::new();
        for label in &kept {
            for id in label.member_ids() {
                assert!(seen.insert(id));
            }
        }
    }

    #[test]
    fn identical_divider_compounds_collapse_to_one() {
        let input = path_compounds(&fixtures::map_p4());
        let dividers_before =
            input.iter().filter(|l| l.class == LabelClass::LaneDivider).count();
        assert_eq!(dividers_before, 2);
        let kept = eliminate_overlaps(input);
        let dividers: Vec<_> =
            kept.iter().filter(|l| l.class == LabelClass::LaneDivider).collect();
        assert_eq!(dividers.len(), 1);
        assert_eq!(dividers[0].member_ids().map(|id| id.0).collect::<Vec<_>>(), vec![203, 204]);
        assert_eq!(dividers[0].source_path_index, 0);
        assert_eq!(kept.len(), 3);
    }

    #[test]
    fn contained_border_compounds_are_eliminated() {
        let input = path_compounds(&fixtures::map_exit());
        assert_eq!(input.len(), 6);
        let kept = eliminate_overlaps(input);
        assert_eq!(
            member_sets(&kept),
            vec![vec![202, 206], vec![201, 203], vec![205], vec![204]]
        );
        let classes: Vec<_> = kept.iter().map(|l| l.class).collect();
        assert_eq!(
            classes,
            vec![
                LabelClass::RoadBorder,
                LabelClass::RoadBorder,
                LabelClass::LaneDivider,
                LabelClass::LaneDivider
            ]
        );
    }

    #[test]
    fn member_union_is_preserved() {
        for (name, map) in fixtures::canonical_maps() {
            let input = path_compounds(&map);
            let before: BTreeSet<ElementId> =
                input.iter().flat_map(|l| l.member_ids()).collect();
            let kept = eliminate_overlaps(input);
            let mut after = BTreeSet::new();
            for label in &kept {
                for id in label.member_ids() {
                    assert!(after.insert(id), "{name}: duplicate member {id:?}");
                }
            }
            assert_eq!(before, after, "{name}");
        }
    }

    fn straight_compound(members: &[u64], x0: f64, path: usize) -> CompoundLabel {
        use crate::geometry::Vec3;
        use crate::label::TraceRecord;
        let mut points = vec![Vec3::new(x0, 0.0, 0.0)];
        let mut trace = Vec::new();
        for (k, &m) in members.iter().enumerate() {
            let a = 10.0 * k as f64;
            points.push(Vec3::new(x0 + a + 10.0, 0.0, 0.0));
            trace.push(TraceRecord {
                element: ElementId(m),
                arc_start: a,
                arc_end: a + 10.0,
                inverted: false,
                member_start: 0.0,
                member_end: 10.0,
            });
        }
        CompoundLabel {
            class: LabelClass::RoadBorder,
            subtype: None,
            points,
            trace,
            source_path_index: path,
        }
    }

    #[test]
    fn partial_overlap_is_trimmed_with_rebased_trace() {
        // Equal lengths: the smaller first member wins, the loser keeps only
        // its unclaimed tail.
        let x = straight_compound(&[101, 102], 0.0, 0);
        let y = straight_compound(&[102, 103], 10.0, 1);
        let kept = eliminate_overlaps(vec![y, x]);
        assert_eq!(member_sets(&kept), vec![vec![101, 102], vec![103]]);
        let tail = &kept[1];
        assert_eq!(tail.trace[0].arc_start, 0.0);
        assert_eq!(tail.trace[0].arc_end, 10.0);
        assert_eq!(tail.trace[0].member_start, 0.0);
        assert_eq!(tail.trace[0].member_end, 10.0);
        assert_eq!(tail.points.first().map(|p| p.x), Some(20.0));
        assert_eq!(tail.points.last().map(|p| p.x), Some(30.0));
    }

    #[test]
    fn interior_claim_splits_into_two_runs() {
        // The longer compound claims 102 out of the middle of the shorter one,
        // leaving two disconnected runs that become separate compounds.
        let long = straight_compound(&[101, 102, 103], 0.0, 0);
        let wide = straight_compound(&[102, 104, 105, 106], 10.0, 1);
        let kept = eliminate_overlaps(vec![long, wide]);
        assert_eq!(member_sets(&kept), vec![vec![102, 104, 105, 106], vec![101], vec![103]]);
        let head = &kept[1];
        assert_eq!(head.points.first().map(|p| p.x), Some(0.0));
        assert_eq!(head.points.last().map(|p| p.x), Some(10.0));
        let tail = &kept[2];
        assert_eq!(tail.points.first().map(|p| p.x), Some(20.0));
        assert_eq!(tail.points.last().map(|p| p.x), Some(30.0));
        assert_eq!(tail.trace[0].element, ElementId(103));
    }

    #[test]
    fn tie_breaks_prefer_smaller_first_member() {
        let map = fixtures::map_p4();
        let mut input = path_compounds(&map);
        // Reverse the vector; ordering must not depend on input order.
        input.reverse();
        let kept = eliminate_overlaps(input);
        let divider = kept.iter().find(|l| l.class == LabelClass::LaneDivider).unwrap();
        assert_eq!(divider.source_path_index, 0);
    }
}
