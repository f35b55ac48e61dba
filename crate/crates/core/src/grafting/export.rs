use std::fmt::Write;

use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

/// A labelled polyline in the plane.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DevelopedCurve {
    pub label: String,
    /// Written as `[[x, y], ..]`.
    #[serde(serialize_with = "point_array")]
    pub points: Vec<Complex64>,
}

fn point_array<S: Serializer>(points: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(points.len()))?;
    for z in points {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

pub fn curves_to_json(curves: &[DevelopedCurve]) -> String {
    serde_json::to_string_pretty(curves).expect("curves serialize")
}

const PALETTE: [&str; 6] = ["#1f5fbf", "#c03030", "#2a8a3a", "#8a4fbf", "#d08a1a", "#333333"];

/// One polyline per curve in a square viewport fitted to all points; the y axis
/// points up.
pub fn curves_to_svg(curves: &[DevelopedCurve]) -> String {
    let (size, pad) = (600.0, 20.0);
    let mut lo = Complex64::new(f64::INFINITY, f64::INFINITY);
    let mut hi = -lo;
    for z in curves.iter().flat_map(|c| &c.points) {
        lo = Complex64::new(lo.re.min(z.re), lo.im.min(z.im));
        hi = Complex64::new(hi.re.max(z.re), hi.im.max(z.im));
    }
    let span = (hi.re - lo.re).max(hi.im - lo.im).max(1e-12);
    let scale = (size - 2.0 * pad) / span;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    )
    .expect("string write");
    writeln!(out, r#"<rect width="{size}" height="{size}" fill="white"/>"#).expect("string write");
    for (k, c) in curves.iter().enumerate() {
        let points: Vec<String> = c
            .points
            .iter()
            .map(|z| {
                format!(
                    "{:.4},{:.4}",
                    pad + (z.re - lo.re) * scale,
                    size - pad - (z.im - lo.im) * scale
                )
            })
            .collect();
        writeln!(
            out,
            r#"<polyline fill="none" stroke="{}" stroke-width="1" points="{}"><title>{}</title></polyline>"#,
            PALETTE[k % PALETTE.len()],
            points.join(" "),
            c.label
        )
        .expect("string write");
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_uses_point_pairs() {
        let c = DevelopedCurve {
            label: "core".into(),
            points: vec![Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.0)],
        };
        let v: serde_json::Value = serde_json::from_str(&curves_to_json(std::slice::from_ref(&c))).unwrap();
        assert_eq!(v[0]["points"][0], serde_json::json!([1.0, 2.0]));
        let svg = curves_to_svg(&[c]);
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.contains("<title>core</title>"));
    }
}
