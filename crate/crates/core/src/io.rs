//! Curve JSON and OBJ export.
//!
//! ```json
//! {"closed": true, "vertices": [[x, y, z], ...], "arcs": [...]}
//! ```
//!
//! Floats are written in shortest round-trip form, so reading a written
//! curve back reproduces every coordinate bit for bit.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{ArcTag, Point3, PolyCurve};

#[derive(Serialize, Deserialize)]
struct CurveFile {
    closed: bool,
    vertices: Vec<Point3>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    arcs: Option<Vec<ArcTag>>,
}

pub fn curve_to_json(curve: &PolyCurve) -> String {
    let file = CurveFile {
        closed: true,
        vertices: curve.vertices().to_vec(),
        arcs: curve.arcs().map(<[ArcTag]>::to_vec),
    };
    serde_json::to_string(&file).expect("curve serialization cannot fail")
}

pub fn curve_from_json(text: &str) -> Result<PolyCurve> {
    let file: CurveFile = serde_json::from_str(text)?;
    if !file.closed {
        return Err(Error::Format(
            "only closed curves are supported (\"closed\": true)".into(),
        ));
    }
    let count = file.vertices.len();
    let curve = PolyCurve::new(file.vertices)?;
    if curve.num_vertices() != count && file.arcs.is_some() {
        return Err(Error::Format(
            "repeated consecutive vertices invalidate the arc ranges".into(),
        ));
    }
    match file.arcs {
        Some(arcs) => curve.with_arcs(arcs),
        None => Ok(curve),
    }
}

pub fn write_curve(path: impl AsRef<Path>, curve: &PolyCurve) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, curve_to_json(curve))
        .map_err(|e| Error::Format(format!("cannot write {}: {e}", path.display())))
}

pub fn read_curve(path: impl AsRef<Path>) -> Result<PolyCurve> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Format(format!("cannot read {}: {e}", path.display())))?;
    curve_from_json(&text)
}

/// Wavefront OBJ with one closed line element through all vertices.
pub fn curve_to_obj(curve: &PolyCurve) -> String {
    let mut out = String::new();
    for p in curve.vertices() {
        writeln!(out, "v {} {} {}", p.x, p.y, p.z).unwrap();
    }
    out.push('l');
    for k in 1..=curve.num_vertices() {
        write!(out, " {k}").unwrap();
    }
    out.push_str(" 1\n");
    out
}
