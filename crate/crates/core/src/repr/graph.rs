//! Centerline connectivity graphs over extracted label sets.

use crate::label::{LabelClass, LocalInstanceSet};
use crate::map::ElementId;
use crate::routing::RoutingGraph;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum EdgeKind {
    Successor,
    LeftNeighbour,
    RightNeighbour,
}

/// Directed edge between node indices of a [`CenterlineGraph`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    pub kind: EdgeKind,
}

/// One node per centerline label, keeping its position in the instance set and
/// the lanelet IDs its trace runs through.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterlineNode {
    pub label_index: usize,
    pub lanelets: Vec<ElementId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterlineGraph {
    pub nodes: Vec<CenterlineNode>,
    pub edges: Vec<GraphEdge>,
}

/// Builds the connectivity graph over the set's centerline labels.
///
/// A successor edge a→b exists iff the last lanelet of a's trace has b's first
/// lanelet as routing successor (a closed loop yields a self edge). Neighbour
/// edges compare the last lanelets: a→b is a left neighbour edge iff b's
/// terminal lanelet lies directly left of a's. Edges are sorted by
/// (from, to, kind).
pub fn to_centerline_graph(instances: &LocalInstanceSet, graph: &RoutingGraph) -> CenterlineGraph {
    let nodes: Vec<CenterlineNode> = instances
        .labels
        .iter()
        .enumerate()
        .filter(|(_, l)| l.class == LabelClass::Centerline && !l.trace.is_empty())
        .map(|(i, l)| CenterlineNode {
            label_index: i,
            lanelets: l.trace.iter().map(|r| r.element).collect(),
        })
        .collect();

    let mut edges = Vec::new();
    for (a, na) in nodes.iter().enumerate() {
        let last = *na.lanelets.last().unwrap();
        for (b, nb) in nodes.iter().enumerate() {
            let first = *nb.lanelets.first().unwrap();
            if graph.successors(last).contains(&first) {
                edges.push(GraphEdge { from: a, to: b, kind: EdgeKind::Successor });
            }
            if a != b {
                let terminal = *nb.lanelets.last().unwrap();
                if graph.left_adjacent(last) == Some(terminal) {
                    edges.push(GraphEdge { from: a, to: b, kind: EdgeKind::LeftNeighbour });
                }
                if graph.right_adjacent(last) == Some(terminal) {
                    edges.push(GraphEdge { from: a, to: b, kind: EdgeKind::RightNeighbour });
                }
            }
        }
    }
    edges.sort_unstable();
    CenterlineGraph { nodes, edges }
}
