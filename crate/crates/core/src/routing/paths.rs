//! Exhaustive lanelet path enumeration over a submap.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::map::ElementId;
use crate::routing::RoutingGraph;

/// Ordered lanelet sequence; consecutive entries are successor pairs and no
/// lanelet repeats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaneletPath {
    pub lanelets: Vec<ElementId>,
}

impl LaneletPath {
    pub fn first(&self) -> ElementId {
        self.lanelets[0]
    }

    pub fn last(&self) -> ElementId {
        *self.lanelets.last().unwrap()
    }
}

/// Guards against combinatorial blow-up on dense interchanges.
#[derive(Debug, Clone, Copy)]
pub struct PathLimits {
    pub max_paths: usize,
    pub max_len: usize,
}

impl Default for PathLimits {
    fn default() -> Self {
        PathLimits { max_paths: 1024, max_len: 64 }
    }
}

/// Enumerates every maximal lanelet path within the submap.
///
/// Seeds are the submap lanelets with no in-submap predecessor; lanelets
/// unreachable that way (cycle components) are seeded at their lowest
/// uncovered ID until every submap lanelet is covered. Paths extend along
/// in-submap successors, branch on multiplicity, and stop before revisiting a
/// lanelet on the current path. Output is grouped by seed ID ascending, then
/// by branch successor IDs.
pub fn enumerate_paths(
    graph: &RoutingGraph,
    submap: &BTreeSet<ElementId>,
    limits: &PathLimits,
) -> Result<Vec<LaneletPath>> {
    let mut groups: Vec<(ElementId, Vec<LaneletPath>)> = Vec::new();
    let mut covered: BTreeSet<ElementId> = BTreeSet::new();
    let mut total = 0usize;

    let run_seed = |seed: ElementId,
                        covered: &mut BTreeSet<ElementId>,
                        total: &mut usize|
     -> Result<Vec<LaneletPath>> {
        let mut paths = Vec::new();
        let mut stack = vec![vec![seed]];
        while let Some(path) = stack.pop() {
            let extensions: Vec<ElementId> = graph
                .successors(*path.last().unwrap())
                .iter()
                .copied()
                .filter(|s| submap.contains(s) && !path.contains(s))
                .collect();
            if extensions.is_empty() {
                *total += 1;
                if *total > limits.max_paths {
                    return Err(Error::PathLimit { what: "path count", limit: limits.max_paths });
                }
                covered.extend(path.iter().copied());
                paths.push(LaneletPath { lanelets: path });
                continue;
            }
            if path.len() >= limits.max_len {
                return Err(Error::PathLimit { what: "path length", limit: limits.max_len });
            }
            // Reverse so the stack pops branches in ascending successor order.
            for next in extensions.into_iter().rev() {
                let mut longer = path.clone();
                longer.push(next);
                stack.push(longer);
            }
        }
        Ok(paths)
    };

    for &seed in submap {
        let has_inside_predecessor =
            graph.predecessors(seed).iter().any(|p| submap.contains(p));
        if !has_inside_predecessor {
            let paths = run_seed(seed, &mut covered, &mut total)?;
            groups.push((seed, paths));
        }
    }
    loop {
        let Some(&seed) = submap.iter().find(|id| !covered.contains(id)) else { break };
        let paths = run_seed(seed, &mut covered, &mut total)?;
        groups.push((seed, paths));
    }

    groups.sort_by_key(|(seed, _)| *seed);
    Ok(groups.into_iter().flat_map(|(_, paths)| paths).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::map::LaneletMap;
    use crate::routing::build_routing_graph;

    fn ids(raw: &[u64]) -> Vec<ElementId> {
        raw.iter().map(|&i| ElementId(i)).collect()
    }

    fn all_lanelets(map: &LaneletMap) -> BTreeSet<ElementId> {
        map.lanelets().map(|ll| ll.id).collect()
    }

    fn paths_of(map: &LaneletMap, submap: &BTreeSet<ElementId>) -> Vec<Vec<ElementId>> {
        let graph = build_routing_graph(map).unwrap();
        enumerate_paths(&graph, submap, &PathLimits::default())
            .unwrap()
            .into_iter()
            .map(|p| p.lanelets)
            .collect()
    }

    #[test]
    fn single_chain() {
        let map = fixtures::map_s2();
        assert_eq!(paths_of(&map, &all_lanelets(&map)), vec![ids(&[301, 302])]);
    }

    #[test]
    fn branch_spawns_two_paths() {
        let map = fixtures::map_b3();
        assert_eq!(paths_of(&map, &all_lanelets(&map)), vec![ids(&[301, 302]), ids(&[301, 303])]);
    }

    #[test]
    fn parallel_lanes_stay_separate() {
        let map = fixtures::map_p4();
        assert_eq!(
            paths_of(&map, &all_lanelets(&map)),
            vec![ids(&[301, 302]), ids(&[303, 304])]
        );
    }

    #[test]
    fn ring_is_seeded_at_lowest_id() {
        let map = fixtures::map_r();
        assert_eq!(paths_of(&map, &all_lanelets(&map)), vec![ids(&[301, 302, 303, 304])]);
    }

    #[test]
    fn ring_fragment_starts_at_submap_edge() {
        // With part of the ring cut away, the remaining chain starts at the
        // lanelet whose predecessor is outside the submap.
        let map = fixtures::map_r();
        let submap: BTreeSet<ElementId> = ids(&[302, 303]).into_iter().collect();
        assert_eq!(paths_of(&map, &submap), vec![ids(&[302, 303])]);
    }

    #[test]
    fn every_submap_lanelet_is_covered() {
        for (name, map) in fixtures::canonical_maps() {
            let submap = all_lanelets(&map);
            let paths = paths_of(&map, &submap);
            let covered: BTreeSet<ElementId> = paths.iter().flatten().copied().collect();
            assert_eq!(covered, submap, "{name}");
        }
    }

    #[test]
    fn consecutive_entries_are_successors() {
        for (name, map) in fixtures::canonical_maps() {
            let graph = build_routing_graph(&map).unwrap();
            let submap = all_lanelets(&map);
            for path in enumerate_paths(&graph, &submap, &PathLimits::default()).unwrap() {
                for pair in path.lanelets.windows(2) {
                    assert!(graph.successors(pair[0]).contains(&pair[1]), "{name}: {path:?}");
                }
            }
        }
    }

    #[test]
    fn repeated_calls_are_identical() {
        let map = fixtures::map_exit();
        let submap = all_lanelets(&map);
        assert_eq!(paths_of(&map, &submap), paths_of(&map, &submap));
    }

    #[test]
    fn split_preserves_traversed_geometry() {
        use crate::geometry::polyline_hausdorff;
        use crate::map::Side;

        let original = fixtures::map_s2();
        let split = fixtures::split_lanelet(&original, 302, 0.3).unwrap();
        let chain = |map: &LaneletMap, side: Side| {
            let path = &paths_of(map, &all_lanelets(map))[0];
            let mut out = Vec::new();
            for &id in path {
                let ll = map.lanelet(id).unwrap().clone();
                let geom = map.directed_boundary(&ll, side).unwrap();
                for p in geom {
                    if out.last() != Some(&p) {
                        out.push(p);
                    }
                }
            }
            out
        };
        let before = paths_of(&original, &all_lanelets(&original));
        let after = paths_of(&split, &all_lanelets(&split));
        assert_eq!(before[0].len(), 2);
        assert_eq!(after[0].len(), 3);
        for side in [Side::Left, Side::Right] {
            let a = chain(&original, side);
            let b = chain(&split, side);
            assert!(polyline_hausdorff(&a, &b) < 1e-9);
        }
    }

    #[test]
    fn path_length_limit_aborts() {
        let map = fixtures::synthetic_grid(80, 2);
        let graph = build_routing_graph(&map).unwrap();
        let submap = all_lanelets(&map);
        let limits = PathLimits { max_paths: 1024, max_len: 4 };
        match enumerate_paths(&graph, &submap, &limits) {
            Err(Error::PathLimit { what: "path length", limit: 4 }) => {}
            other => panic!("expected length limit, got {other:?}"),
        }
    }

    #[test]
    fn path_count_limit_aborts() {
        let map = fixtures::map_b3();
        let graph = build_routing_graph(&map).unwrap();
        let submap = all_lanelets(&map);
        let limits = PathLimits { max_paths: 1, max_len: 64 };
        match enumerate_paths(&graph, &submap, &limits) {
            Err(Error::PathLimit { what: "path count", limit: 1 }) => {}
            other => panic!("expected count limit, got {other:?}"),
        }
    }
}
