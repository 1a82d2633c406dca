//! Polyline geometry: arc-length parameterization, resampling, slicing, rectangle
//! clipping, bounding boxes and Hausdorff distances.
//!
//! Polylines are plain `Vec<Vec3>` / `&[Vec3]` in whatever frame the caller works in.
//! Arc lengths are always measured along the full 3D polyline; rectangle clipping
//! happens in the x/y plane with z interpolated linearly along each segment.

use crate::error::{Error, Result};

/// Snap distance for arc positions that land on a vertex, and the smallest piece
/// length the clipper will emit.
pub const ARC_EPS: f64 = 1e-9;

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }

    pub fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }

    pub fn scale(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dist(self, o: Vec3) -> f64 {
        self.sub(o).norm()
    }

    pub fn lerp(self, o: Vec3, t: f64) -> Vec3 {
        self.add(o.sub(self).scale(t))
    }

    pub fn midpoint(self, o: Vec3) -> Vec3 {
        Vec3::new((self.x + o.x) * 0.5, (self.y + o.y) * 0.5, (self.z + o.z) * 0.5)
    }

    pub fn finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// Total 3D length of a polyline.
pub fn polyline_length(pts: &[Vec3]) -> f64 {
    pts.windows(2).map(|w| w[0].dist(w[1])).sum()
}

/// Cumulative arc positions, one per vertex, starting at 0.
pub fn cumulative_arcs(pts: &[Vec3]) -> Vec<f64> {
    let mut arcs = Vec::with_capacity(pts.len());
    let mut s = 0.0;
    arcs.push(0.0);
    for w in pts.windows(2) {
        s += w[0].dist(w[1]);
        arcs.push(s);
    }
    arcs
}

/// Point at arc position `s`, clamped to the polyline's range.
pub fn point_at_arc(pts: &[Vec3], arcs: &[f64], s: f64) -> Vec3 {
    debug_assert_eq!(pts.len(), arcs.len());
    let total = *arcs.last().unwrap_or(&0.0);
    if s <= 0.0 {
        return pts[0];
    }
    if s >= total {
        return *pts.last().unwrap();
    }
    // Last index with arcs[i] <= s; the segment [i, i+1] contains s.
    let i = match arcs.binary_search_by(|a| a.partial_cmp(&s).unwrap()) {
        Ok(i) => i,
        Err(i) => i - 1,
    };
    if i + 1 >= pts.len() {
        return *pts.last().unwrap();
    }
    let seg = arcs[i + 1] - arcs[i];
    if seg <= 0.0 {
        return pts[i];
    }
    pts[i].lerp(pts[i + 1], (s - arcs[i]) / seg)
}

/// Resample to `n` points at equal arc spacing. The first and last input points are
/// preserved exactly.
pub fn resample(pts: &[Vec3], n: usize) -> Result<Vec<Vec3>> {
    if n < 2 {
        return Err(Error::Degenerate(format!("resample point count {n} < 2")));
    }
    if pts.len() < 2 {
        return Err(Error::Degenerate("resample input has fewer than 2 points".into()));
    }
    let arcs = cumulative_arcs(pts);
    let total = *arcs.last().unwrap();
    if total <= 0.0 {
        return Err(Error::Degenerate("resample input has zero length".into()));
    }
    let mut out = Vec::with_capacity(n);
    out.push(pts[0]);
    for k in 1..n - 1 {
        let s = total * (k as f64) / ((n - 1) as f64);
        out.push(point_at_arc(pts, &arcs, s));
    }
    out.push(*pts.last().unwrap());
    Ok(out)
}

/// Sub-polyline covering arc range [s0, s1]. Interpolated endpoints are inserted;
/// positions within [`ARC_EPS`] of a vertex snap onto it so slices at junctions stay
/// exact. Arc bounds are clamped to the polyline's range.
pub fn slice_by_arc(pts: &[Vec3], s0: f64, s1: f64) -> Vec<Vec3> {
    let arcs = cumulative_arcs(pts);
    let total = *arcs.last().unwrap_or(&0.0);
    let s0 = s0.clamp(0.0, total);
    let s1 = s1.clamp(0.0, total);
    if s1 - s0 <= ARC_EPS {
        return Vec::new();
    }
    let mut out: Vec<Vec3> = Vec::new();
    let mut push = |p: Vec3| {
        if out.last().map_or(true, |q| q.dist(p) > ARC_EPS) {
            out.push(p);
        }
    };
    push(point_at_arc(pts, &arcs, s0));
    for (i, &a) in arcs.iter().enumerate() {
        if a > s0 + ARC_EPS && a < s1 - ARC_EPS {
            push(pts[i]);
        }
    }
    push(point_at_arc(pts, &arcs, s1));
    out
}

/// Axis-aligned bounding box in the x/y plane.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Aabb {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl Aabb {
    pub fn empty() -> Self {
        Aabb { min_x: f64::INFINITY, min_y: f64::INFINITY, max_x: f64::NEG_INFINITY, max_y: f64::NEG_INFINITY }
    }

    pub fn is_empty(&self) -> bool {
        self.min_x > self.max_x || self.min_y > self.max_y
    }

    pub fn from_points<'a>(pts: impl IntoIterator<Item = &'a Vec3>) -> Self {
        let mut b = Aabb::empty();
        for p in pts {
            b.expand(*p);
        }
        b
    }

    pub fn expand(&mut self, p: Vec3) {
        self.min_x = self.min_x.min(p.x);
        self.min_y = self.min_y.min(p.y);
        self.max_x = self.max_x.max(p.x);
        self.max_y = self.max_y.max(p.y);
    }

    pub fn merge(&mut self, o: &Aabb) {
        self.min_x = self.min_x.min(o.min_x);
        self.min_y = self.min_y.min(o.min_y);
        self.max_x = self.max_x.max(o.max_x);
        self.max_y = self.max_y.max(o.max_y);
    }

    /// Closed-interval intersection test: touching boxes intersect.
    pub fn intersects(&self, o: &Aabb) -> bool {
        !self.is_empty()
            && !o.is_empty()
            && self.min_x <= o.max_x
            && o.min_x <= self.max_x
            && self.min_y <= o.max_y
            && o.min_y <= self.max_y
    }

    pub fn inflate(&self, m: f64) -> Aabb {
        Aabb { min_x: self.min_x - m, min_y: self.min_y - m, max_x: self.max_x + m, max_y: self.max_y + m }
    }

    pub fn diagonal(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            ((self.max_x - self.min_x).powi(2) + (self.max_y - self.min_y).powi(2)).sqrt()
        }
    }
}

/// Region-of-interest extents around a pose, in the local frame: x spans
/// [-backward, forward], y spans [-right, left]. `margin` inflates the rectangle for
/// submap pre-selection only; cropping uses the plain rectangle.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct RoiSpec {
    pub forward: f64,
    pub backward: f64,
    pub left: f64,
    pub right: f64,
    pub margin: f64,
}

impl Default for RoiSpec {
    fn default() -> Self {
        RoiSpec { forward: 60.0, backward: 30.0, left: 30.0, right: 30.0, margin: 5.0 }
    }
}

impl RoiSpec {
    pub fn symmetric(extent: f64) -> Self {
        RoiSpec { forward: extent, backward: extent, left: extent, right: extent, margin: 0.0 }
    }

    pub fn valid(&self) -> bool {
        self.forward > 0.0 && self.backward > 0.0 && self.left > 0.0 && self.right > 0.0 && self.margin >= 0.0
    }

    /// The crop rectangle in the local frame.
    pub fn rect(&self) -> Aabb {
        Aabb { min_x: -self.backward, min_y: -self.right, max_x: self.forward, max_y: self.left }
    }

    /// The rectangle used for submap pre-selection.
    pub fn selection_rect(&self) -> Aabb {
        self.rect().inflate(self.margin)
    }
}

/// Interval of a segment inside a rectangle, from Liang-Barsky clipping.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ClipInterval {
    pub t0: f64,
    pub t1: f64,
    /// True when t0 > 0 was forced by an x (resp. y) constraint; used to clamp the
    /// entry point exactly onto the rectangle edge.
    pub enter_x: bool,
    pub enter_y: bool,
    pub exit_x: bool,
    pub exit_y: bool,
}

/// Liang-Barsky clip of segment p→q against `rect` in the x/y plane. Returns the
/// parameter interval of the inside part, or None when the segment misses the
/// rectangle. Degenerate grazing contacts collapse to zero-width intervals.
pub fn clip_segment(p: Vec3, q: Vec3, rect: &Aabb) -> Option<ClipInterval> {
    let dx = q.x - p.x;
    let dy = q.y - p.y;
    let mut t0 = 0.0f64;
    let mut t1 = 1.0f64;
    let mut enter_x = false;
    let mut enter_y = false;
    let mut exit_x = false;
    let mut exit_y = false;
    // Half-plane constraints d*t <= num; (d, num, is_x_axis).
    let checks = [
        (-dx, p.x - rect.min_x, true),
        (dx, rect.max_x - p.x, true),
        (-dy, p.y - rect.min_y, false),
        (dy, rect.max_y - p.y, false),
    ];
    for (d, num, is_x) in checks {
        if d == 0.0 {
            if num < 0.0 {
                return None;
            }
            continue;
        }
        let r = num / d;
        if d < 0.0 {
            // Entering constraint: inside requires t >= r.
            if r > t1 {
                return None;
            }
            if r > t0 {
                t0 = r;
                enter_x = is_x;
                enter_y = !is_x;
            } else if r == t0 && r > 0.0 {
                enter_x |= is_x;
                enter_y |= !is_x;
            }
        } else {
            // Leaving constraint: inside requires t <= r.
            if r < t0 {
                return None;
            }
            if r < t1 {
                t1 = r;
                exit_x = is_x;
                exit_y = !is_x;
            } else if r == t1 && r < 1.0 {
                exit_x |= is_x;
                exit_y |= !is_x;
            }
        }
    }
    if t0 > t1 {
        return None;
    }
    Some(ClipInterval { t0, t1, enter_x, enter_y, exit_x, exit_y })
}

/// Distance from a point to a segment in 3D.
pub fn point_segment_distance(p: Vec3, a: Vec3, b: Vec3) -> f64 {
    let ab = b.sub(a);
    let len2 = ab.dot(ab);
    if len2 <= 0.0 {
        return p.dist(a);
    }
    let t = (p.sub(a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(a.lerp(b, t))
}

/// Distance from a point to a polyline.
pub fn point_polyline_distance(p: Vec3, pts: &[Vec3]) -> f64 {
    if pts.len() == 1 {
        return p.dist(pts[0]);
    }
    pts.windows(2)
        .map(|w| point_segment_distance(p, w[0], w[1]))
        .fold(f64::INFINITY, f64::min)
}

/// Symmetric Hausdorff distance between two polylines, evaluated at every vertex plus
/// `samples_per_segment` interior samples of each segment. Exact for the directed
/// distances attained at vertices; interior sampling bounds the rest.
pub fn hausdorff(a: &[Vec3], b: &[Vec3], samples_per_segment: usize) -> f64 {
    directed_hausdorff(a, b, samples_per_segment).max(directed_hausdorff(b, a, samples_per_segment))
}

fn directed_hausdorff(a: &[Vec3], b: &[Vec3], samples_per_segment: usize) -> f64 {
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    let mut worst = 0.0f64;
    for p in a {
        worst = worst.max(point_polyline_distance(*p, b));
    }
    for w in a.windows(2) {
        for k in 1..=samples_per_segment {
            let t = k as f64 / (samples_per_segment + 1) as f64;
            worst = worst.max(point_polyline_distance(w[0].lerp(w[1], t), b));
        }
    }
    worst
}

/// Hausdorff with the default interior sampling density.
pub fn polyline_hausdorff(a: &[Vec3], b: &[Vec3]) -> f64 {
    hausdorff(a, b, 8)
}
