//! Structural map validation. Findings are values, not errors: callers decide
//! whether warnings are acceptable, while error findings preclude label generation.

use std::collections::BTreeSet;
use std::fmt;

use crate::map::classify::{classify_boundary, BoundaryClass};
use crate::map::model::{ElementId, LaneletMap, Side};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Severity::Error => write!(f, "error"),
            Severity::Warning => write!(f, "warning"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Finding {
    pub severity: Severity,
    pub element: ElementId,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on element {}: {}", self.severity, self.element, self.message)
    }
}

/// Structural checks over one map. An empty result means structurally valid;
/// warnings alone do not block label generation.
pub fn validate_map(map: &LaneletMap) -> Vec<Finding> {
    fn err(findings: &mut Vec<Finding>, element: ElementId, message: String) {
        findings.push(Finding { severity: Severity::Error, element, message });
    }
    let mut findings = Vec::new();

    for p in map.points() {
        if !p.position.finite() {
            err(&mut findings, p.id, "point has non-finite coordinates".into());
        }
    }

    for ls in map.linestrings() {
        if ls.point_ids.len() < 2 {
            err(&mut findings, ls.id, format!("linestring has {} point(s), need at least 2", ls.point_ids.len()));
        }
        for pid in &ls.point_ids {
            if map.point(*pid).is_none() {
                err(&mut findings, ls.id, format!("linestring references missing point {pid}"));
            }
        }
        for w in ls.point_ids.windows(2) {
            if w[0] == w[1] {
                err(&mut findings, ls.id, format!("consecutive duplicate point reference {}", w[0]));
            }
        }
    }

    for ll in map.lanelets() {
        let mut dangling = false;
        for (side, b) in [("left", ll.left), ("right", ll.right)] {
            if map.linestring(b.linestring).is_none() {
                err(&mut findings, ll.id, format!("{side} boundary references missing linestring {}", b.linestring));
                dangling = true;
            }
        }
        if ll.left.linestring == ll.right.linestring {
            err(
                &mut findings,
                ll.id,
                format!("left and right boundary reference the same linestring {}", ll.left.linestring),
            );
            continue;
        }
        if dangling {
            continue;
        }

        let left_ls = map.linestring(ll.left.linestring).unwrap();
        let right_ls = map.linestring(ll.right.linestring).unwrap();
        let left_set: BTreeSet<ElementId> = left_ls.point_ids.iter().copied().collect();
        let shared: Vec<ElementId> =
            right_ls.point_ids.iter().filter(|p| left_set.contains(p)).copied().collect();
        if let Some(first) = shared.first() {
            err(&mut findings, ll.id, format!("left and right boundary share point {first} (boundaries touch)"));
        }

        for (side, ls) in [("left", left_ls), ("right", right_ls)] {
            if classify_boundary(&ls.attributes) == BoundaryClass::Unknown {
                findings.push(Finding {
                    severity: Severity::Warning,
                    element: ll.id,
                    message: format!("{side} boundary {} has unrecognized classification tags", ls.id),
                });
            }
        }

        if ll.attributes.get("one_way").map(String::as_str) == Some("no") {
            findings.push(Finding {
                severity: Severity::Warning,
                element: ll.id,
                message: "bidirectional lanelet is treated as one-way in tag direction".into(),
            });
        }

        // Sidedness: the right boundary should lie to the right of the driving
        // direction. A positive cross product means the roles look swapped.
        if let (Ok(left), Ok(right)) =
            (map.directed_boundary(ll, Side::Left), map.directed_boundary(ll, Side::Right))
        {
            if left.len() >= 2 && right.len() >= 2 {
                let dir = left.last().unwrap().sub(left[0]).add(right.last().unwrap().sub(right[0]));
                let mid_l = left[0].midpoint(*left.last().unwrap());
                let mid_r = right[0].midpoint(*right.last().unwrap());
                let w = mid_r.sub(mid_l);
                let cross = dir.x * w.y - dir.y * w.x;
                if cross > 1e-9 {
                    findings.push(Finding {
                        severity: Severity::Warning,
                        element: ll.id,
                        message: "right boundary lies left of the driving direction (roles may be swapped)"
                            .into(),
                    });
                }
            }
        }
    }

    findings
}

/// Error-severity findings only.
pub fn error_findings(findings: &[Finding]) -> Vec<Finding> {
    findings.iter().filter(|f| f.severity == Severity::Error).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::model::{attrs, Attributes};

    fn base() -> crate::map::model::MapBuilder {
        LaneletMap::builder()
    }

    #[test]
    fn valid_straight_lane_has_no_findings() {
        let map = base()
            .point(1, 0.0, 0.0, 0.0).unwrap()
            .point(2, 10.0, 0.0, 0.0).unwrap()
            .point(3, 0.0, 3.0, 0.0).unwrap()
            .point(4, 10.0, 3.0, 0.0).unwrap()
            .linestring(11, &[3, 4], attrs(&[("type", "road_border")])).unwrap()
            .linestring(12, &[1, 2], attrs(&[("type", "road_border")])).unwrap()
            .lanelet(21, (11, false), (12, false), Attributes::new()).unwrap()
            .build();
        assert_eq!(validate_map(&map), vec![]);
    }

    #[test]
    fn dangling_point_reference() {
        let map = base().linestring(11, &[1, 2], Attributes::new()).unwrap().build();
        let f = validate_map(&map);
        assert_eq!(f.iter().filter(|f| f.severity == Severity::Error).count(), 2);
        assert!(f[0].message.contains("missing point"));
    }

    #[test]
    fn short_linestring() {
        let map = base()
            .point(1, 0.0, 0.0, 0.0).unwrap()
            .linestring(11, &[1], Attributes::new()).unwrap()
            .build();
        let f = validate_map(&map);
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].severity, Severity::Error);
        assert!(f[0].message.contains("at least 2"));
    }

    #[test]
    fn boundaries_sharing_a_point() {
        let map = base()
            .point(1, 0.0, 0.0, 0.0).unwrap()
            .point(2, 10.0, 0.0, 0.0).unwrap()
            .point(3, 0.0, 3.0, 0.0).unwrap()
            .linestring(11, &[3, 2], attrs(&[("type", "road_border")])).unwrap()
            .linestring(12, &[1, 2], attrs(&[("type", "road_border")])).unwrap()
            .lanelet(21, (11, false), (12, false), Attributes::new()).unwrap()
            .build();
        let f = validate_map(&map);
        assert!(f.iter().any(|f| f.severity == Severity::Error && f.message.contains("share point 2")));
    }

    #[test]
    fn same_linestring_both_sides() {
        let map = base()
            .point(1, 0.0, 0.0, 0.0).unwrap()
            .point(2, 10.0, 0.0, 0.0).unwrap()
            .linestring(11, &[1, 2], attrs(&[("type", "road_border")])).unwrap()
            .lanelet(21, (11, false), (11, true), Attributes::new()).unwrap()
            .build();
        let f = validate_map(&map);
        assert!(f.iter().any(|f| f.severity == Severity::Error && f.message.contains("same linestring")));
    }

    #[test]
    fn unknown_class_and_bidirectional_are_warnings() {
        let map = base()
            .point(1, 0.0, 0.0, 0.0).unwrap()
            .point(2, 10.0, 0.0, 0.0).unwrap()
            .point(3, 0.0, 3.0, 0.0).unwrap()
            .point(4, 10.0, 3.0, 0.0).unwrap()
            .linestring(11, &[3, 4], Attributes::new()).unwrap()
            .linestring(12, &[1, 2], attrs(&[("type", "road_border")])).unwrap()
            .lanelet(21, (11, false), (12, false), attrs(&[("one_way", "no")])).unwrap()
            .build();
        let f = validate_map(&map);
        assert!(f.iter().all(|f| f.severity == Severity::Warning));
        assert!(f.iter().any(|f| f.message.contains("unrecognized classification")));
        assert!(f.iter().any(|f| f.message.contains("treated as one-way")));
    }

    #[test]
    fn swapped_sides_warn() {
        // "Left" below the "right": the cross product gives the swap away.
        let map = base()
            .point(1, 0.0, 0.0, 0.0).unwrap()
            .point(2, 10.0, 0.0, 0.0).unwrap()
            .point(3, 0.0, 3.0, 0.0).unwrap()
            .point(4, 10.0, 3.0, 0.0).unwrap()
            .linestring(11, &[1, 2], attrs(&[("type", "road_border")])).unwrap()
            .linestring(12, &[3, 4], attrs(&[("type", "road_border")])).unwrap()
            .lanelet(21, (11, false), (12, false), Attributes::new()).unwrap()
            .build();
        let f = validate_map(&map);
        assert!(f.iter().any(|f| f.severity == Severity::Warning && f.message.contains("roles may be swapped")));
    }

    #[test]
    fn consecutive_duplicate_reference() {
        let map = base()
            .point(1, 0.0, 0.0, 0.0).unwrap()
            .point(2, 10.0, 0.0, 0.0).unwrap()
            .linestring(11, &[1, 1, 2], Attributes::new()).unwrap()
            .build();
        let f = validate_map(&map);
        assert!(f.iter().any(|f| f.severity == Severity::Error && f.message.contains("consecutive duplicate")));
    }

    #[test]
    fn non_finite_point() {
        let map = base().point(1, f64::NAN, 0.0, 0.0).unwrap().build();
        let f = validate_map(&map);
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].severity, Severity::Error);
    }
}
