//! Lane centerline computation.

use crate::error::{Error, Result};
use crate::geometry::{resample, Vec3};
use crate::map::model::{Lanelet, LaneletMap, Side};

/// Minimum number of arc-length samples per boundary when deriving a centerline.
pub const MIN_SAMPLES: usize = 10;

/// Centerline of a lanelet: both directed boundaries are resampled to
/// max(point counts, 10) equidistant arc-length samples and paired midpoints taken.
/// The first and last centerline points are exactly the midpoints of the boundary
/// endpoints, so centerlines of successor lanelets connect seamlessly.
pub fn centerline(map: &LaneletMap, lanelet: &Lanelet) -> Result<Vec<Vec3>> {
    let left = map.directed_boundary(lanelet, Side::Left)?;
    let right = map.directed_boundary(lanelet, Side::Right)?;
    let n = left.len().max(right.len()).max(MIN_SAMPLES);
    let degenerate = |side: &str, e: Error| match e {
        Error::Degenerate(_) => Error::Structural {
            element: lanelet.id.0,
            message: format!("{side} boundary is degenerate (zero length or too few points)"),
        },
        other => other,
    };
    let left = resample(&left, n).map_err(|e| degenerate("left", e))?;
    let right = resample(&right, n).map_err(|e| degenerate("right", e))?;
    Ok(left.iter().zip(&right).map(|(l, r)| l.midpoint(*r)).collect())
}
