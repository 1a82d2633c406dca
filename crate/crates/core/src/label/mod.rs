//! Compound label generation: the pipeline from map geometry to local-frame
//! instance labels with full element-level traceability.

pub mod compound;
pub mod crop;
pub mod overlap;
pub mod pipeline;
pub mod trace;

pub use compound::build_path_compounds;
pub use crop::crop_to_roi;
pub use overlap::eliminate_overlaps;
pub use pipeline::{ExtractConfig, Extractor};
pub use trace::reconstruct_from_trace;

use crate::geometry::{RoiSpec, Vec3};
use crate::map::ElementId;
use crate::pose::ReferencePose;

/// Coarse class of an emitted label. Dashed and solid dividers collapse into
/// one class; the distinction survives in [`CompoundLabel::subtype`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LabelClass {
    RoadBorder,
    LaneDivider,
    Centerline,
}

impl LabelClass {
    /// Stable numeric code used by tensor exports.
    pub fn code(self) -> i64 {
        match self {
            LabelClass::RoadBorder => 0,
            LabelClass::LaneDivider => 1,
            LabelClass::Centerline => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LabelClass::RoadBorder => "road_border",
            LabelClass::LaneDivider => "lane_divider",
            LabelClass::Centerline => "centerline",
        }
    }

    pub fn parse(s: &str) -> Option<LabelClass> {
        match s {
            "road_border" => Some(LabelClass::RoadBorder),
            "lane_divider" => Some(LabelClass::LaneDivider),
            "centerline" => Some(LabelClass::Centerline),
            _ => None,
        }
    }
}

/// How far through the pipeline a label set has been processed.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Raw,
    Cropped,
    Resampled,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Raw => "raw",
            Stage::Cropped => "cropped",
            Stage::Resampled => "resampled",
        }
    }

    pub fn parse(s: &str) -> Option<Stage> {
        match s {
            "raw" => Some(Stage::Raw),
            "cropped" => Some(Stage::Cropped),
            "resampled" => Some(Stage::Resampled),
            _ => None,
        }
    }
}

/// One member's contribution to a compound label.
///
/// `arc_start`/`arc_end` position the contribution along the compound the
/// record belongs to; `member_start`/`member_end` give the covered arc window
/// within the member's own directed geometry, so cropped pieces stay
/// reconstructible. Records of a label are ordered and tile its full arc
/// range.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRecord {
    pub element: ElementId,
    pub arc_start: f64,
    pub arc_end: f64,
    pub inverted: bool,
    pub member_start: f64,
    pub member_end: f64,
}

/// A single merged polyline of one label class.
///
/// Border and divider traces reference linestring IDs; centerline traces
/// reference lanelet IDs. `source_path_index` identifies the enumerated path
/// the label was built from.
#[derive(Clone, Debug, PartialEq)]
pub struct CompoundLabel {
    pub class: LabelClass,
    pub subtype: Option<String>,
    pub points: Vec<Vec3>,
    pub trace: Vec<TraceRecord>,
    pub source_path_index: usize,
}

impl CompoundLabel {
    /// Total arc length covered by the trace (equals the polyline length up to
    /// floating-point error).
    pub fn arc_length(&self) -> f64 {
        self.trace.last().map_or(0.0, |r| r.arc_end)
    }

    /// Member element IDs in chain order.
    pub fn member_ids(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.trace.iter().map(|r| r.element)
    }
}

/// All labels of one extraction, in the pose's local frame.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalInstanceSet {
    pub pose: ReferencePose,
    pub roi: RoiSpec,
    pub stage: Stage,
    pub labels: Vec<CompoundLabel>,
}
