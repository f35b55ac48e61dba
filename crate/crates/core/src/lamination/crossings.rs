use serde::Serialize;

use super::{ordered_sum, FiniteLamination};
use crate::hyperbolic::{GeodesicSegment, Ideal, PointH2};
use crate::precision::precision;

/// A transversal crossing of a segment with a leaf.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    /// Arclength from the segment's start.
    pub t: f64,
    pub leaf: usize,
    /// Unsigned angle between the leaf and the segment, in `(0, π/2]`.
    pub angle: f64,
    pub point: PointH2,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct CrossingReport {
    /// Interior crossings ordered by `t`.
    pub crossings: Vec<Crossing>,
    /// Set when the segment lies inside this leaf.
    pub carried_by: Option<usize>,
    /// Leaves passing through an endpoint of the segment; their weight is not counted.
    pub endpoint_hits: Vec<usize>,
}

impl CrossingReport {
    pub fn measure(&self, lam: &FiniteLamination) -> f64 {
        ordered_sum(self.crossings.iter().map(|c| lam.leaf(c.leaf).weight))
    }

    pub fn leaves(&self) -> Vec<usize> {
        self.crossings.iter().map(|c| c.leaf).collect()
    }
}

pub(super) fn crossings(lam: &FiniteLamination, s: &GeodesicSegment) -> CrossingReport {
    let tol = precision().endpoint;
    let mut report = CrossingReport::default();
    let frame = s.frame();
    let inv = frame.inverse();
    let len = s.length();
    for (i, leaf) in lam.leaves().iter().enumerate() {
        let g = &leaf.geodesic;
        let on_a = g.side_value(&s.a()).abs() <= tol;
        let on_b = g.side_value(&s.b()).abs() <= tol;
        if on_a && on_b {
            report.crossings.clear();
            report.endpoint_hits.clear();
            report.carried_by = Some(i);
            return report;
        }
        let u = frame.apply_ideal(g.p()).expect("segment frames are real");
        let v = frame.apply_ideal(g.q()).expect("segment frames are real");
        let (u, v) = match (u, v) {
            (Ideal::Real(u), Ideal::Real(v)) => (u, v),
            // a vertical image misses the imaginary axis unless it is the axis
            _ => {
                if on_a || on_b {
                    report.endpoint_hits.push(i);
                }
                continue;
            }
        };
        if u * v >= 0.0 {
            if on_a || on_b {
                report.endpoint_hits.push(i);
            }
            continue;
        }
        let y = (-u * v).sqrt();
        let t = y.ln();
        if on_a || on_b || t.abs() <= tol || (t - len).abs() <= tol {
            if (-tol..=len + tol).contains(&t) {
                report.endpoint_hits.push(i);
            }
            continue;
        }
        if t <= 0.0 || t >= len {
            continue;
        }
        let c = (u + v) / 2.0;
        let angle = y.atan2(c.abs());
        let point = inv
            .apply_h2(&PointH2::new(0.0, y).expect("positive height"))
            .expect("real map");
        report.crossings.push(Crossing {
            t,
            leaf: i,
            angle,
            point,
        });
    }
    report.crossings.sort_by(|a, b| a.t.total_cmp(&b.t));
    report
}
