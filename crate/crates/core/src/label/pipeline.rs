//! End-to-end label extraction around a reference pose.

use crate::error::{Error, Result};
use crate::geometry::{resample, RoiSpec};
use crate::label::{
    build_path_compounds, crop_to_roi, eliminate_overlaps, LabelClass,
    LocalInstanceSet, Stage,
};
use crate::map::{error_findings, validate_map, LaneletMap};
use crate::pose::ReferencePose;
use crate::routing::{
    build_routing_graph, enumerate_paths, extract_submap, PathLimits, RoutingGraph, SpatialIndex,
};

/// Knobs of one extraction run.
#[derive(Clone, Debug)]
pub struct ExtractConfig {
    pub point_count: usize,
    pub stage: Stage,
    pub limits: PathLimits,
}

impl Default for ExtractConfig {
    fn default() -> Self {
        ExtractConfig { point_count: 20, stage: Stage::Resampled, limits: PathLimits::default() }
    }
}

/// Reusable extraction context: validated map, routing graph, spatial index.
/// Immutable after construction; generation is safe to run concurrently.
pub struct Extractor {
    map: LaneletMap,
    graph: RoutingGraph,
    index: SpatialIndex,
}

impl Extractor {
    /// Validates the map and precomputes the routing graph and spatial index.
    /// Maps with error-severity findings are rejected.
    pub fn new(map: LaneletMap) -> Result<Self> {
        let errors = error_findings(&validate_map(&map));
        if !errors.is_empty() {
            return Err(Error::Invalid { findings: errors });
        }
        let graph = build_routing_graph(&map)?;
        let index = SpatialIndex::build(&map)?;
        Ok(Extractor { map, graph, index })
    }

    pub fn map(&self) -> &LaneletMap {
        &self.map
    }

    pub fn graph(&self) -> &RoutingGraph {
        &self.graph
    }

    /// Runs the full pipeline for one pose: submap, path enumeration, compound
    /// construction, local-frame transform, overlap elimination, then crop and
    /// resample as far as `config.stage` asks.
    pub fn generate(
        &self,
        pose: &ReferencePose,
        roi: &RoiSpec,
        config: &ExtractConfig,
    ) -> Result<LocalInstanceSet> {
        if !pose.is_finite() {
            return Err(Error::Degenerate("non-finite reference pose".into()));
        }
        if !roi.valid() {
            return Err(Error::Degenerate("roi extents must be positive, margin nonnegative".into()));
        }
        if config.stage == Stage::Resampled && config.point_count < 2 {
            return Err(Error::Degenerate(format!(
                "resample point count {} < 2",
                config.point_count
            )));
        }

        let submap = extract_submap(&self.map, &self.index, pose, roi)?;
        let paths = enumerate_paths(&self.graph, &submap, &config.limits)?;

        let mut overlapping = Vec::new();
        let mut centerlines = Vec::new();
        for (i, path) in paths.iter().enumerate() {
            for mut label in build_path_compounds(&self.map, path, i)? {
                label.points = label.points.iter().map(|&p| pose.world_to_local(p)).collect();
                if label.class == LabelClass::Centerline {
                    centerlines.push(label);
                } else {
                    overlapping.push(label);
                }
            }
        }
        let mut labels = eliminate_overlaps(overlapping);
        labels.append(&mut centerlines);

        if config.stage >= Stage::Cropped {
            let rect = roi.rect();
            labels = labels.iter().flat_map(|l| crop_to_roi(l, &rect)).collect();
        }
        if config.stage == Stage::Resampled {
            for label in &mut labels {
                label.points = resample(&label.points, config.point_count)?;
            }
        }

        labels.sort_by(|a, b| {
            a.class
                .code()
                .cmp(&b.class.code())
                .then(a.trace[0].element.cmp(&b.trace[0].element))
                .then(a.source_path_index.cmp(&b.source_path_index))
                .then(a.trace[0].member_start.total_cmp(&b.trace[0].member_start))
        });
        Ok(LocalInstanceSet { pose: *pose, roi: *roi, stage: config.stage, labels })
    }

    /// Sequential pose-batch extraction.
    pub fn generate_batch_sequential(
        &self,
        poses: &[ReferencePose],
        roi: &RoiSpec,
        config: &ExtractConfig,
    ) -> Vec<Result<LocalInstanceSet>> {
        poses.iter().map(|p| self.generate(p, roi, config)).collect()
    }

    /// Pose-batch extraction fanned out across threads. Output order and bytes
    /// match the sequential variant.
    #[cfg(feature = "parallel")]
    pub fn generate_batch(
        &self,
        poses: &[ReferencePose],
        roi: &RoiSpec,
        config: &ExtractConfig,
    ) -> Vec<Result<LocalInstanceSet>> {
        use rayon::prelude::*;
        poses.par_iter().map(|p| self.generate(p, roi, config)).collect()
    }

    /// Alias keeping one call site regardless of the feature set.
    #[cfg(not(feature = "parallel"))]
    pub fn generate_batch(
        &self,
        poses: &[ReferencePose],
        roi: &RoiSpec,
        config: &ExtractConfig,
    ) -> Vec<Result<LocalInstanceSet>> {
        self.generate_batch_sequential(poses, roi, config)
    }
}
