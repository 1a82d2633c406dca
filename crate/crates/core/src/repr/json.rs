//! JSON serialization of label sets.
//!
//! The writer is hand-rolled so the output is canonical: fixed key order, floats
//! always printed with 9 significant digits in scientific notation, no
//! whitespace. Equal inputs therefore produce byte-identical documents, and
//! serialize∘parse is the identity on documents the writer produced.

use serde_json::Value;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::{RoiSpec, Vec3};
use crate::label::{CompoundLabel, LabelClass, LocalInstanceSet, Stage, TraceRecord};
use crate::map::ElementId;
use crate::pose::ReferencePose;

/// 9 significant digits; negative zero collapses to zero so equal geometry
/// cannot produce two spellings.
fn fmt_f64(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.8e}")
}

fn push_points(out: &mut String, points: &[Vec3]) {
    out.push('[');
    for (i, p) in points.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "[{},{},{}]", fmt_f64(p.x), fmt_f64(p.y), fmt_f64(p.z));
    }
    out.push(']');
}

fn push_trace(out: &mut String, trace: &[TraceRecord]) {
    out.push('[');
    for (i, r) in trace.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(
            out,
            "{{\"id\":{},\"arc_start\":{},\"arc_end\":{},\"inverted\":{},\"member_start\":{},\"member_end\":{}}}",
            r.element.0,
            fmt_f64(r.arc_start),
            fmt_f64(r.arc_end),
            r.inverted,
            fmt_f64(r.member_start),
            fmt_f64(r.member_end),
        );
    }
    out.push(']');
}

pub fn serialize_json(instances: &LocalInstanceSet) -> Vec<u8> {
    let mut out = String::new();
    let p = &instances.pose;
    let _ = write!(out, "{{\"pose\":{{\"x\":{},\"y\":{},\"yaw\":{}", fmt_f64(p.x), fmt_f64(p.y), fmt_f64(p.yaw));
    if let Some(z) = p.z {
        let _ = write!(out, ",\"z\":{}", fmt_f64(z));
    }
    if let Some(roll) = p.roll {
        let _ = write!(out, ",\"roll\":{}", fmt_f64(roll));
    }
    if let Some(pitch) = p.pitch {
        let _ = write!(out, ",\"pitch\":{}", fmt_f64(pitch));
    }
    let r = &instances.roi;
    let _ = write!(
        out,
        "}},\"roi\":{{\"forward\":{},\"backward\":{},\"left\":{},\"right\":{},\"margin\":{}}}",
        fmt_f64(r.forward),
        fmt_f64(r.backward),
        fmt_f64(r.left),
        fmt_f64(r.right),
        fmt_f64(r.margin),
    );
    let _ = write!(out, ",\"stage\":\"{}\",\"labels\":[", instances.stage.as_str());
    for (i, label) in instances.labels.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{{\"class\":\"{}\",\"subtype\":", label.class.as_str());
        match &label.subtype {
            Some(s) => {
                let _ = write!(out, "\"{s}\"");
            }
            None => out.push_str("null"),
        }
        let _ = write!(out, ",\"source_path_index\":{},\"points\":", label.source_path_index);
        push_points(&mut out, &label.points);
        out.push_str(",\"trace\":");
        push_trace(&mut out, &label.trace);
        out.push('}');
    }
    out.push_str("]}");
    out.into_bytes()
}

fn schema(message: impl Into<String>) -> Error {
    Error::Parse { line: 0, message: message.into() }
}

fn get<'a>(obj: &'a Value, key: &str, ctx: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| schema(format!("{ctx}: missing key '{key}'")))
}

fn as_f64(v: &Value, ctx: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| schema(format!("{ctx}: expected a number")))
}

fn num_field(obj: &Value, key: &str, ctx: &str) -> Result<f64> {
    as_f64(get(obj, key, ctx)?, &format!("{ctx}.{key}"))
}

fn opt_num_field(obj: &Value, key: &str, ctx: &str) -> Result<Option<f64>> {
    match obj.get(key) {
        None => Ok(None),
        Some(v) => Ok(Some(as_f64(v, &format!("{ctx}.{key}"))?)),
    }
}

pub fn parse_json(bytes: &[u8]) -> Result<LocalInstanceSet> {
    let root: Value = serde_json::from_slice(bytes)
        .map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?;

    let pose_v = get(&root, "pose", "document")?;
    let pose = ReferencePose {
        x: num_field(pose_v, "x", "pose")?,
        y: num_field(pose_v, "y", "pose")?,
        yaw: num_field(pose_v, "yaw", "pose")?,
        z: opt_num_field(pose_v, "z", "pose")?,
        roll: opt_num_field(pose_v, "roll", "pose")?,
        pitch: opt_num_field(pose_v, "pitch", "pose")?,
    };

    let roi_v = get(&root, "roi", "document")?;
    let roi = RoiSpec {
        forward: num_field(roi_v, "forward", "roi")?,
        backward: num_field(roi_v, "backward", "roi")?,
        left: num_field(roi_v, "left", "roi")?,
        right: num_field(roi_v, "right", "roi")?,
        margin: opt_num_field(roi_v, "margin", "roi")?.unwrap_or(0.0),
    };

    let stage_s = get(&root, "stage", "document")?
        .as_str()
        .ok_or_else(|| schema("stage: expected a string"))?;
    let stage = Stage::parse(stage_s)
        .ok_or_else(|| schema(format!("stage: unknown value '{stage_s}'")))?;

    let labels_v = get(&root, "labels", "document")?
        .as_array()
        .ok_or_else(|| schema("labels: expected an array"))?;
    let mut labels = Vec::with_capacity(labels_v.len());
    for (i, lv) in labels_v.iter().enumerate() {
        let ctx = format!("labels[{i}]");
        let class_s = get(lv, "class", &ctx)?
            .as_str()
            .ok_or_else(|| schema(format!("{ctx}.class: expected a string")))?;
        let class = LabelClass::parse(class_s)
            .ok_or_else(|| schema(format!("{ctx}.class: unknown value '{class_s}'")))?;
        let subtype = match get(lv, "subtype", &ctx)? {
            Value::Null => None,
            Value::String(s) => Some(s.clone()),
            _ => return Err(schema(format!("{ctx}.subtype: expected a string or null"))),
        };
        let source_path_index = get(lv, "source_path_index", &ctx)?
            .as_u64()
            .ok_or_else(|| schema(format!("{ctx}.source_path_index: expected an integer")))?
            as usize;

        let points_v = get(lv, "points", &ctx)?
            .as_array()
            .ok_or_else(|| schema(format!("{ctx}.points: expected an array")))?;
        let mut points = Vec::with_capacity(points_v.len());
        for pv in points_v {
            let triple = pv
                .as_array()
                .filter(|a| a.len() == 3)
                .ok_or_else(|| schema(format!("{ctx}.points: expected [x,y,z] triples")))?;
            points.push(Vec3::new(
                as_f64(&triple[0], &ctx)?,
                as_f64(&triple[1], &ctx)?,
                as_f64(&triple[2], &ctx)?,
            ));
        }

        let trace_v = get(lv, "trace", &ctx)?
            .as_array()
            .ok_or_else(|| schema(format!("{ctx}.trace: expected an array")))?;
        let mut trace = Vec::with_capacity(trace_v.len());
        for rv in trace_v {
            let rctx = format!("{ctx}.trace");
            let id = get(rv, "id", &rctx)?
                .as_u64()
                .ok_or_else(|| schema(format!("{rctx}.id: expected an integer")))?;
            trace.push(TraceRecord {
                element: ElementId(id),
                arc_start: num_field(rv, "arc_start", &rctx)?,
                arc_end: num_field(rv, "arc_end", &rctx)?,
                inverted: get(rv, "inverted", &rctx)?
                    .as_bool()
                    .ok_or_else(|| schema(format!("{rctx}.inverted: expected a bool")))?,
                member_start: num_field(rv, "member_start", &rctx)?,
                member_end: num_field(rv, "member_end", &rctx)?,
            });
        }

        labels.push(CompoundLabel { class, subtype, points, trace, source_path_index });
    }

    Ok(LocalInstanceSet { pose, roi, stage, labels })
}
