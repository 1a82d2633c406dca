//! Fixed-point-count polyline sets for learning pipelines.

use crate::error::{Error, Result};
use crate::geometry::resample;
use crate::label::{LocalInstanceSet, Stage, TraceRecord};

/// Dense label array: one class code and one `n × 3` float32 point row per label.
/// Class codes: 0 road border, 1 lane divider, 2 centerline.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedPointSet {
    pub n: usize,
    pub classes: Vec<i64>,
    /// Row-major `[classes.len() × n × 3]`.
    pub points: Vec<f32>,
    pub traces: Vec<Vec<TraceRecord>>,
    pub warnings: Vec<String>,
}

impl FixedPointSet {
    pub fn num_labels(&self) -> usize {
        self.classes.len()
    }

    /// Flat `n × 3` slice of one label row.
    pub fn row(&self, i: usize) -> &[f32] {
        &self.points[i * self.n * 3..(i + 1) * self.n * 3]
    }
}

/// Resamples every label to exactly `n` points. Labels whose geometry has no
/// length to resample over are skipped and reported in `warnings`.
pub fn to_fixed_point_set(instances: &LocalInstanceSet, n: usize) -> Result<FixedPointSet> {
    if instances.stage < Stage::Cropped {
        return Err(Error::Unsupported(
            "fixed-point conversion needs cropped or resampled instances".into(),
        ));
    }
    if n < 2 {
        return Err(Error::Degenerate(format!("fixed point count {n} < 2")));
    }
    let mut out = FixedPointSet {
        n,
        classes: Vec::new(),
        points: Vec::new(),
        traces: Vec::new(),
        warnings: Vec::new(),
    };
    for (i, label) in instances.labels.iter().enumerate() {
        match resample(&label.points, n) {
            Ok(pts) => {
                out.classes.push(label.class.code());
                for p in pts {
                    out.points.extend_from_slice(&[p.x as f32, p.y as f32, p.z as f32]);
                }
                out.traces.push(label.trace.clone());
            }
            Err(_) => {
                out.warnings.push(format!(
                    "label {i} ({}) has no length to resample; skipped",
                    label.class.as_str()
                ));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::geometry::{RoiSpec, Vec3};
    use crate::label::{CompoundLabel, ExtractConfig, Extractor, LabelClass};
    use crate::pose::ReferencePose;

    fn extract(map: crate::map::LaneletMap, pose: ReferencePose, stage: Stage) -> LocalInstanceSet {
        let config = ExtractConfig { stage, ..ExtractConfig::default() };
        Extractor::new(map).unwrap().generate(&pose, &RoiSpec::symmetric(100.0), &config).unwrap()
    }

    #[test]
    fn three_labels_become_a_3x8x3_array() {
        let set = extract(fixtures::map_s2(), ReferencePose::planar(10.0, 1.5, 0.0), Stage::Cropped);
        let fps = to_fixed_point_set(&set, 8).unwrap();
        assert_eq!(fps.classes, vec![0, 0, 2]);
        assert_eq!(fps.points.len(), 3 * 8 * 3);
        assert_eq!(fps.traces.len(), 3);
        assert!(fps.warnings.is_empty());
        // Straight 20 m span resampled to 8 points keeps the endpoints exact.
        let row = fps.row(0);
        assert_eq!(&row[0..3], &[-10.0, 1.5, 0.0]);
        assert_eq!(&row[21..24], &[10.0, 1.5, 0.0]);
    }

    #[test]
    fn empty_set_keeps_the_point_count() {
        let set =
            extract(fixtures::map_s2(), ReferencePose::planar(10_000.0, 0.0, 0.0), Stage::Resampled);
        let fps = to_fixed_point_set(&set, 20).unwrap();
        assert_eq!(fps.num_labels(), 0);
        assert!(fps.points.is_empty());
        assert_eq!(fps.n, 20);
    }

    #[test]
    fn p4_has_exactly_one_divider_row() {
        let set = extract(fixtures::map_p4(), ReferencePose::planar(10.0, 3.0, 0.0), Stage::Resampled);
        let fps = to_fixed_point_set(&set, 20).unwrap();
        assert_eq!(fps.classes.iter().filter(|&&c| c == 1).count(), 1);
    }

    #[test]
    fn class_multiset_and_endpoints_survive_conversion() {
        for (name, map) in fixtures::canonical_maps() {
            let set = extract(map, ReferencePose::planar(10.0, 1.5, 0.2), Stage::Cropped);
            let fps = to_fixed_point_set(&set, 12).unwrap();
            assert_eq!(fps.num_labels(), set.labels.len(), "{name}");
            for (i, label) in set.labels.iter().enumerate() {
                assert_eq!(fps.classes[i], label.class.code(), "{name}");
                let row = fps.row(i);
                let first = label.points.first().unwrap();
                let last = label.points.last().unwrap();
                assert_eq!(&row[0..3], &[first.x as f32, first.y as f32, first.z as f32], "{name}");
                let tail = &row[(12 - 1) * 3..];
                assert_eq!(tail, &[last.x as f32, last.y as f32, last.z as f32], "{name}");
            }
        }
    }

    #[test]
    fn uncropped_instances_are_rejected() {
        let set = extract(fixtures::map_s2(), ReferencePose::planar(10.0, 1.5, 0.0), Stage::Raw);
        assert!(matches!(to_fixed_point_set(&set, 8), Err(Error::Unsupported(_))));
    }

    #[test]
    fn tiny_point_count_is_rejected() {
        let set = extract(fixtures::map_s2(), ReferencePose::planar(10.0, 1.5, 0.0), Stage::Cropped);
        assert!(matches!(to_fixed_point_set(&set, 1), Err(Error::Degenerate(_))));
    }

    #[test]
    fn zero_length_label_is_skipped_with_a_warning() {
        let mut set =
            extract(fixtures::map_s2(), ReferencePose::planar(10.0, 1.5, 0.0), Stage::Cropped);
        let stub = CompoundLabel {
            class: LabelClass::LaneDivider,
            subtype: Some("dashed".into()),
            points: vec![Vec3::new(1.0, 1.0, 0.0), Vec3::new(1.0, 1.0, 0.0)],
            trace: set.labels[0].trace.clone(),
            source_path_index: 0,
        };
        set.labels.push(stub);
        let fps = to_fixed_point_set(&set, 8).unwrap();
        assert_eq!(fps.classes, vec![0, 0, 2]);
        assert_eq!(fps.warnings.len(), 1);
        assert!(fps.warnings[0].contains("label 3"), "{}", fps.warnings[0]);
        assert!(fps.warnings[0].contains("lane_divider"));
    }
}
