//! Two-sided checks of the classical integral identities. Every check
//! returns a [`VerificationReport`]; evaluation failures become reports with
//! status `error` rather than Rust errors.

mod goursat;
mod planar;
mod pointwise;
mod report;
mod solids;

use serde_json::{json, Value};

use crate::geometry::{Path, Region2D, Segment, Solid3D};

pub use goursat::{goursat_certify, goursat_report, GoursatCertificate, GoursatOutcome};
pub use planar::{
    cauchy_via_green, green_check, homotopy_invariance, rectangle_identity, SINGULAR_MAGNITUDE,
};
pub use pointwise::{
    conformality_report, contour_report, cr_pair_report, cr_report, exactness_report,
    loop_exactness_report, primitive_cr_report, winding_report,
};
pub use report::{Status, VerificationReport, DEFAULT_TOL};
pub use solids::{divergence_check, gauss_volume, green_identity_check, DEGRADED_TOL};

pub(crate) use report::run;

pub(crate) fn region_json(r: &Region2D) -> Value {
    match r {
        Region2D::Rectangle { x0, x1, y0, y1 } => json!({"rectangle": [x0, x1, y0, y1]}),
        Region2D::Disk { center, radius } => {
            json!({"disk": {"center": [center.re, center.im], "radius": radius}})
        }
        Region2D::Polygon { vertices } => {
            json!({"polygon": vertices.iter().map(|v| [v.re, v.im]).collect::<Vec<_>>()})
        }
        Region2D::XConvex { y0, y1, left, right } => json!({
            "x_convex": {"y": [y0, y1], "left": left.to_string(), "right": right.to_string()}
        }),
    }
}

pub(crate) fn path_json(p: &Path) -> Value {
    let segs: Vec<Value> = p
        .segments()
        .iter()
        .map(|s| match s {
            Segment::Line { start, end } => json!({"line": [[start.re, start.im], [end.re, end.im]]}),
            Segment::Arc { center, radius, start_angle, end_angle } => json!({"arc": {
                "center": [center.re, center.im],
                "radius": radius,
                "angles": [start_angle, end_angle],
            }}),
            Segment::Curve(_) => {
                let (a, b) = (s.start().ok(), s.end().ok());
                json!({"curve": {
                    "start": a.map(|z| [z.re, z.im]),
                    "end": b.map(|z| [z.re, z.im]),
                }})
            }
        })
        .collect();
    Value::Array(segs)
}

pub(crate) fn solid_json(s: &Solid3D) -> Value {
    match s {
        Solid3D::Box { lo, hi } => json!({"box": [lo[0], hi[0], lo[1], hi[1], lo[2], hi[2]]}),
        Solid3D::Graph { base, lower, upper } => json!({"graph": {
            "base": region_json(base),
            "lower": lower.to_string(),
            "upper": upper.to_string(),
        }}),
    }
}
