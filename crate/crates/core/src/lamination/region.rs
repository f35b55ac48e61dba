use serde::{Deserialize, Serialize};

use super::Chord;
use crate::error::{Error, Result};
use crate::hyperbolic::{GeodesicH2, PointH2, Side};

/// One side of a geodesic, open or closed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane {
    pub boundary: GeodesicH2,
    pub side: Side,
    #[serde(default)]
    pub closed: bool,
}

impl HalfPlane {
    pub fn open(boundary: GeodesicH2, side: Side) -> Self {
        HalfPlane {
            boundary,
            side,
            closed: false,
        }
    }

    pub fn closed(boundary: GeodesicH2, side: Side) -> Self {
        HalfPlane {
            boundary,
            side,
            closed: true,
        }
    }

    /// The other side of the same boundary, with complementary closedness.
    pub fn complement(&self) -> HalfPlane {
        HalfPlane {
            boundary: self.boundary,
            side: self.side.opposite(),
            closed: !self.closed,
        }
    }

    fn value(&self, z: &PointH2) -> f64 {
        self.boundary.side_value(z) * self.side.sign()
    }

    pub fn contains(&self, z: &PointH2, tol: f64) -> bool {
        let v = self.value(z);
        if self.closed {
            v >= -tol
        } else {
            v > tol
        }
    }

    /// Parameter interval (along `g`'s chord parametrization) of `g` inside this half-plane.
    fn interval(&self, g: &GeodesicH2) -> Option<(f64, f64)> {
        let full = (f64::NEG_INFINITY, f64::INFINITY);
        if *g == self.boundary {
            return self.closed.then_some(full);
        }
        if let Some(p) = g.intersection_point(&self.boundary) {
            let chord = Chord::full(*g);
            let s = chord.param_of(&p);
            let ahead = self.value(&chord.point_at(s + 1.0)) > 0.0;
            return Some(if ahead {
                (s, f64::INFINITY)
            } else {
                (f64::NEG_INFINITY, s)
            });
        }
        (self.boundary.side_of_geodesic(g) == self.side).then_some(full)
    }
}

/// A convex subset of H²: the whole plane, a single geodesic, or a finite
/// intersection of half-planes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConvexRegion {
    Plane,
    Geodesic { geodesic: GeodesicH2 },
    HalfPlanes { half_planes: Vec<HalfPlane> },
}

impl ConvexRegion {
    pub fn geodesic(g: GeodesicH2) -> Self {
        ConvexRegion::Geodesic { geodesic: g }
    }

    pub fn half_plane(h: HalfPlane) -> Self {
        ConvexRegion::HalfPlanes { half_planes: vec![h] }
    }

    pub fn polygon(half_planes: Vec<HalfPlane>) -> Self {
        ConvexRegion::HalfPlanes { half_planes }
    }

    pub fn validate(&self) -> Result<()> {
        if let ConvexRegion::HalfPlanes { half_planes } = self {
            if half_planes.iter().any(|h| h.side == Side::On) {
                return Err(Error::InvalidInput("half-plane side must be left or right".into()));
            }
        }
        if self.interior_point().is_none() {
            return Err(Error::EmptyRegion);
        }
        Ok(())
    }

    pub fn contains(&self, z: &PointH2, tol: f64) -> bool {
        match self {
            ConvexRegion::Plane => true,
            ConvexRegion::Geodesic { geodesic } => geodesic.contains(z, tol),
            ConvexRegion::HalfPlanes { half_planes } => half_planes.iter().all(|h| h.contains(z, tol)),
        }
    }

    /// The part of `g` inside the region, if nonempty.
    pub fn chord(&self, g: &GeodesicH2) -> Option<Chord> {
        match self {
            ConvexRegion::Plane => Some(Chord::full(*g)),
            ConvexRegion::Geodesic { geodesic } => {
                if geodesic == g {
                    Some(Chord::full(*g))
                } else {
                    let p = g.intersection_point(geodesic)?;
                    let s = Chord::full(*g).param_of(&p);
                    Some(Chord {
                        geodesic: *g,
                        lo: s,
                        hi: s,
                    })
                }
            }
            ConvexRegion::HalfPlanes { half_planes } => {
                let mut lo = f64::NEG_INFINITY;
                let mut hi = f64::INFINITY;
                for h in half_planes {
                    let (a, b) = h.interval(g)?;
                    lo = lo.max(a);
                    hi = hi.min(b);
                }
                (lo < hi).then_some(Chord { geodesic: *g, lo, hi })
            }
        }
    }

    pub fn meets_geodesic(&self, g: &GeodesicH2) -> bool {
        self.chord(g).is_some()
    }

    /// A point of the region (strictly inside when the region has interior).
    pub fn interior_point(&self) -> Option<PointH2> {
        match self {
            ConvexRegion::Plane => PointH2::new(0.0, 1.0).ok(),
            ConvexRegion::Geodesic { geodesic } => Some(Chord::full(*geodesic).point_at(0.0)),
            ConvexRegion::HalfPlanes { half_planes } => {
                const MARGIN: f64 = 1e-9;
                for (k, h) in half_planes.iter().enumerate() {
                    let others = ConvexRegion::HalfPlanes {
                        half_planes: half_planes
                            .iter()
                            .enumerate()
                            .filter(|&(j, _)| j != k)
                            .map(|(_, h)| *h)
                            .collect(),
                    };
                    let Some(chord) = others.chord(&h.boundary) else {
                        continue;
                    };
                    let s = match (chord.lo.is_finite(), chord.hi.is_finite()) {
                        (true, true) => (chord.lo + chord.hi) / 2.0,
                        (true, false) => chord.lo + 1.0,
                        (false, true) => chord.hi - 1.0,
                        (false, false) => 0.0,
                    };
                    let base = chord.point_at(s);
                    let normal =
                        crate::hyperbolic::GeodesicSegment::new(base, nudge(&h.boundary, &base, h.side)).ok()?;
                    for step in [1e-1, 1e-2, 1e-3, 1e-4, 1e-6] {
                        let z = normal.point_at(step);
                        if self.contains(&z, MARGIN) {
                            return Some(z);
                        }
                    }
                }
                None
            }
        }
    }
}

/// A point at distance one from `base` (on `g`) on the given side, along the normal.
fn nudge(g: &GeodesicH2, base: &PointH2, side: Side) -> PointH2 {
    let n = g.normalizing_map();
    let w = n.apply_h2(base).expect("real map");
    // in normalized coordinates g is the imaginary axis; the normal through i·r is |z| = r
    let r = w.y();
    let angle = std::f64::consts::FRAC_PI_2 - side.sign() * 0.8;
    let z = PointH2::new(r * angle.cos(), r * angle.sin()).expect("upper half-plane");
    n.inverse().apply_h2(&z).expect("real map")
}
