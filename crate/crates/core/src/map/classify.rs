//! Boundary classification from linestring attributes.

use crate::map::model::Attributes;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundaryClass {
    RoadBorder,
    LaneDividerDashed,
    LaneDividerSolid,
    Virtual,
    Unknown,
}

impl BoundaryClass {
    /// Whether this boundary has a physical counterpart that becomes a label.
    pub fn is_physical(self) -> bool {
        matches!(self, BoundaryClass::RoadBorder | BoundaryClass::LaneDividerDashed | BoundaryClass::LaneDividerSolid)
    }
}

/// Classification table: (type, subtype pattern, class). A `None` subtype matches any
/// subtype value including an absent one; rows are tried in order.
const TABLE: &[(&str, Option<&str>, BoundaryClass)] = &[
    ("road_border", None, BoundaryClass::RoadBorder),
    ("curbstone", None, BoundaryClass::RoadBorder),
    ("line_thin", Some("dashed"), BoundaryClass::LaneDividerDashed),
    ("line_thick", Some("dashed"), BoundaryClass::LaneDividerDashed),
    ("line_thin", Some("solid"), BoundaryClass::LaneDividerSolid),
    ("line_thick", Some("solid"), BoundaryClass::LaneDividerSolid),
    ("line_thin", Some("solid_dashed"), BoundaryClass::LaneDividerSolid),
    ("line_thick", Some("solid_dashed"), BoundaryClass::LaneDividerSolid),
    ("line_thin", Some("dashed_solid"), BoundaryClass::LaneDividerSolid),
    ("line_thick", Some("dashed_solid"), BoundaryClass::LaneDividerSolid),
    ("virtual", None, BoundaryClass::Virtual),
];

/// Total, deterministic classification; attribute combinations outside the table map
/// to [`BoundaryClass::Unknown`].
pub fn classify_boundary(attributes: &Attributes) -> BoundaryClass {
    let ty = attributes.get("type").map(String::as_str);
    let subtype = attributes.get("subtype").map(String::as_str);
    let Some(ty) = ty else { return BoundaryClass::Unknown };
    for (row_ty, row_subtype, class) in TABLE {
        if *row_ty != ty {
            continue;
        }
        match row_subtype {
            None => return *class,
            Some(s) if Some(*s) == subtype => return *class,
            Some(_) => continue,
        }
    }
    BoundaryClass::Unknown
}
