//! SVG rendering of cropped label sets for visual inspection.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::label::{LabelClass, LocalInstanceSet, Stage};

/// Stroke style per class: borders solid dark, dividers dashed, centerlines light.
fn stroke(class: LabelClass) -> (&'static str, Option<&'static str>) {
    match class {
        LabelClass::RoadBorder => ("#1c222b", None),
        LabelClass::LaneDivider => ("#55606e", Some("1.2,0.8")),
        LabelClass::Centerline => ("#b9c4d2", None),
    }
}

fn fmt(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.3}")
}

/// Renders one polyline per label plus the ROI rectangle. The drawing is in the
/// local vehicle frame with x right and y up, so the SVG y axis is mirrored.
/// Requires cropped or resampled instances; uncropped geometry has no defined
/// canvas.
pub fn render_svg(instances: &LocalInstanceSet) -> Result<String> {
    if instances.stage < Stage::Cropped {
        return Err(Error::Unsupported("svg rendering needs cropped or resampled instances".into()));
    }
    let roi = &instances.roi;
    let (min_x, max_x) = (-roi.backward, roi.forward);
    let (min_y, max_y) = (-roi.left, roi.right);
    let (w, h) = (max_x - min_x, max_y - min_y);

    let mut out = String::new();
    let _ = write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\">\n",
        fmt(min_x),
        fmt(min_y),
        fmt(w),
        fmt(h)
    );
    let _ = write!(
        out,
        "  <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#8a9097\" stroke-width=\"0.2\"/>\n",
        fmt(min_x),
        fmt(min_y),
        fmt(w),
        fmt(h)
    );
    for (i, label) in instances.labels.iter().enumerate() {
        let (color, dash) = stroke(label.class);
        let members: Vec<String> =
            label.trace.iter().map(|r| r.element.0.to_string()).collect();
        let _ = write!(
            out,
            "  <polyline id=\"label-{i}\" class=\"{}\" data-trace=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"0.35\"",
            label.class.as_str(),
            members.join(",")
        );
        if let Some(d) = dash {
            let _ = write!(out, " stroke-dasharray=\"{d}\"");
        }
        out.push_str(" points=\"");
        for (k, p) in label.points.iter().enumerate() {
            if k > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{},{}", fmt(p.x), fmt(-p.y));
        }
        out.push_str("\"/>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}
