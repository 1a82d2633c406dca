//! Crops local-frame compound labels to the ROI rectangle.

use crate::geometry::{clip_segment, cumulative_arcs, Aabb, Vec3};
use crate::label::{CompoundLabel, TraceRecord};

/// Pieces and per-member contributions shorter than this are discarded.
const PIECE_EPS: f64 = 1e-12;

struct Piece {
    points: Vec<Vec3>,
    start: f64,
    end: f64,
}

/// Snaps a clip point exactly onto the rectangle edge that produced it, so
/// crop output satisfies containment without tolerance slack.
fn snap(mut p: Vec3, on_x: bool, on_y: bool, rect: &Aabb) -> Vec3 {
    if on_x {
        p.x = if (p.x - rect.min_x).abs() <= (p.x - rect.max_x).abs() { rect.min_x } else { rect.max_x };
    }
    if on_y {
        p.y = if (p.y - rect.min_y).abs() <= (p.y - rect.max_y).abs() { rect.min_y } else { rect.max_y };
    }
    p
}

fn finish(piece: Piece, label: &CompoundLabel, out: &mut Vec<CompoundLabel>) {
    if piece.end - piece.start <= PIECE_EPS || piece.points.len() < 2 {
        return;
    }
    let mut trace = Vec::new();
    for r in &label.trace {
        let a0 = r.arc_start.max(piece.start);
        let a1 = r.arc_end.min(piece.end);
        if a1 - a0 <= PIECE_EPS {
            continue;
        }
        trace.push(TraceRecord {
            element: r.element,
            arc_start: a0 - piece.start,
            arc_end: a1 - piece.start,
            inverted: r.inverted,
            member_start: r.member_start + (a0 - r.arc_start),
            member_end: r.member_start + (a1 - r.arc_start),
        });
    }
    out.push(CompoundLabel {
        class: label.class,
        subtype: label.subtype.clone(),
        points: piece.points,
        trace,
        source_path_index: label.source_path_index,
    });
}

/// Clips a label against the ROI rectangle (closed; clip points land exactly
/// on the edges). A polyline that leaves and re-enters yields one label per
/// inside stretch, each with its trace re-derived from the original
/// arc-length parameterization. Fully outside yields nothing.
pub fn crop_to_roi(label: &CompoundLabel, rect: &Aabb) -> Vec<CompoundLabel> {
    let pts = &label.points;
    let arcs = cumulative_arcs(pts);
    let mut out = Vec::new();
    let mut cur: Option<Piece> = None;
    for k in 0..pts.len().saturating_sub(1) {
        let (p, q) = (pts[k], pts[k + 1]);
        let seg_len = arcs[k + 1] - arcs[k];
        if seg_len <= 0.0 {
            continue;
        }
        let Some(clip) = clip_segment(p, q, rect) else {
            if let Some(piece) = cur.take() {
                finish(piece, label, &mut out);
            }
            continue;
        };
        let enter_arc = if clip.t0 == 0.0 { arcs[k] } else { arcs[k] + clip.t0 * seg_len };
        let exit_arc = if clip.t1 == 1.0 { arcs[k + 1] } else { arcs[k] + clip.t1 * seg_len };
        let b = if clip.t1 == 1.0 { q } else { snap(p.lerp(q, clip.t1), clip.exit_x, clip.exit_y, rect) };
        if clip.t0 == 0.0 && cur.is_some() {
            let piece = cur.as_mut().unwrap();
            piece.points.push(b);
            piece.end = exit_arc;
        } else {
            if let Some(piece) = cur.take() {
                finish(piece, label, &mut out);
            }
            let a = if clip.t0 == 0.0 { p } else { snap(p.lerp(q, clip.t0), clip.enter_x, clip.enter_y, rect) };
            cur = Some(Piece { points: vec![a, b], start: enter_arc, end: exit_arc });
        }
        if clip.t1 < 1.0 {
            if let Some(piece) = cur.take() {
                finish(piece, label, &mut out);
            }
        }
    }
    if let Some(piece) = cur.take() {
        finish(piece, label, &mut out);
    }
    out
}
