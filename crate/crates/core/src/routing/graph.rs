//! Lanelet connectivity from shared-boundary topology.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::map::{ElementId, LaneletMap, Side};

/// Per-lanelet edges. Successor/predecessor lists are sorted by ID and mutually
/// consistent; adjacency is mutual; no self-edges.
#[derive(Debug, Default, Clone)]
pub struct Connectivity {
    pub successors: Vec<ElementId>,
    pub predecessors: Vec<ElementId>,
    pub left_adjacent: Option<ElementId>,
    pub right_adjacent: Option<ElementId>,
}

/// Directed successor graph plus lateral adjacency. Immutable after build; all
/// queries are pure reads.
#[derive(Debug, Default, Clone)]
pub struct RoutingGraph {
    nodes: BTreeMap<ElementId, Connectivity>,
}

/// A lanelet b succeeds a iff a's directed left boundary ends on the point ID
/// where b's begins and likewise on the right. b is right-adjacent to a iff a's
/// right and b's left resolve to the same linestring.
///
/// Assumes a map free of validation errors.
pub fn build_routing_graph(map: &LaneletMap) -> Result<RoutingGraph> {
    let mut nodes: BTreeMap<ElementId, Connectivity> = BTreeMap::new();
    let mut ends: BTreeMap<ElementId, (ElementId, ElementId, ElementId, ElementId)> = BTreeMap::new();
    for ll in map.lanelets() {
        nodes.insert(ll.id, Connectivity::default());
        let left = map.directed_boundary_ids(ll, Side::Left)?;
        let right = map.directed_boundary_ids(ll, Side::Right)?;
        if left.is_empty() || right.is_empty() {
            continue;
        }
        ends.insert(ll.id, (left[0], *left.last().unwrap(), right[0], *right.last().unwrap()));
    }

    let mut starts: BTreeMap<(ElementId, ElementId), Vec<ElementId>> = BTreeMap::new();
    for (&id, &(lf, _, rf, _)) in &ends {
        starts.entry((lf, rf)).or_default().push(id);
    }
    for (&id, &(_, ll_last, _, r_last)) in &ends {
        if let Some(next) = starts.get(&(ll_last, r_last)) {
            for &b in next {
                if b == id {
                    continue;
                }
                nodes.get_mut(&id).unwrap().successors.push(b);
                nodes.get_mut(&b).unwrap().predecessors.push(id);
            }
        }
    }

    let mut by_left_boundary: BTreeMap<ElementId, Vec<ElementId>> = BTreeMap::new();
    for ll in map.lanelets() {
        by_left_boundary.entry(ll.left.linestring).or_default().push(ll.id);
    }
    for ll in map.lanelets() {
        if nodes[&ll.id].right_adjacent.is_some() {
            continue;
        }
        let Some(candidates) = by_left_boundary.get(&ll.right.linestring) else { continue };
        for &b in candidates {
            if b != ll.id && nodes[&b].left_adjacent.is_none() {
                nodes.get_mut(&ll.id).unwrap().right_adjacent = Some(b);
                nodes.get_mut(&b).unwrap().left_adjacent = Some(ll.id);
                break;
            }
        }
    }

    for edges in nodes.values_mut() {
        edges.successors.sort_unstable();
        edges.predecessors.sort_unstable();
    }
    Ok(RoutingGraph { nodes })
}

impl RoutingGraph {
    pub fn contains(&self, id: ElementId) -> bool {
        self.nodes.contains_key(&id)
    }

    pub fn successors(&self, id: ElementId) -> &[ElementId] {
        self.nodes.get(&id).map_or(&[], |n| &n.successors)
    }

    pub fn predecessors(&self, id: ElementId) -> &[ElementId] {
        self.nodes.get(&id).map_or(&[], |n| &n.predecessors)
    }

    pub fn left_adjacent(&self, id: ElementId) -> Option<ElementId> {
        self.nodes.get(&id).and_then(|n| n.left_adjacent)
    }

    pub fn right_adjacent(&self, id: ElementId) -> Option<ElementId> {
        self.nodes.get(&id).and_then(|n| n.right_adjacent)
    }

    pub fn lanelet_ids(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.nodes.keys().copied()
    }

    /// (directed successor edges, mutual adjacency pairs)
    pub fn edge_counts(&self) -> (usize, usize) {
        let succ = self.nodes.values().map(|n| n.successors.len()).sum();
        let adj = self.nodes.values().filter(|n| n.right_adjacent.is_some()).count();
        (succ, adj)
    }

    #[cfg(test)]
    fn check_invariants(&self) {
        for (&id, edges) in &self.nodes {
            assert!(!edges.successors.contains(&id), "self successor on {id}");
            assert!(edges.left_adjacent != Some(id) && edges.right_adjacent != Some(id));
            for s in &edges.successors {
                assert!(self.predecessors(*s).contains(&id), "{id} -> {s} not mirrored");
            }
            for p in &edges.predecessors {
                assert!(self.successors(*p).contains(&id), "{p} -> {id} not mirrored");
            }
            if let Some(r) = edges.right_adjacent {
                assert_eq!(self.left_adjacent(r), Some(id));
            }
            if let Some(l) = edges.left_adjacent {
                assert_eq!(self.right_adjacent(l), Some(id));
            }
        }
    }
}
