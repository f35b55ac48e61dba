use num_complex::Complex64;
use serde::Serialize;

use crate::hyperbolic::{BoundaryPoint, MobiusMap, PointH3};

/// An oriented hyperbolic plane of H³: the image of the vertical plane over R̂
/// under `frame`, with the image of the upper half-plane as its positive side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Plane {
    frame: MobiusMap,
}

impl Plane {
    pub fn vertical() -> Self {
        Plane {
            frame: MobiusMap::identity(),
        }
    }

    pub fn from_frame(frame: MobiusMap) -> Self {
        Plane { frame }
    }

    pub fn frame(&self) -> MobiusMap {
        self.frame
    }

    pub fn transformed(&self, m: &MobiusMap) -> Plane {
        Plane {
            frame: m.compose(&self.frame),
        }
    }

    /// Three points of the boundary circle (images of 0, 1, ∞).
    pub fn boundary_points(&self) -> [BoundaryPoint; 3] {
        [
            self.frame.apply(Complex64::new(0.0, 0.0)),
            self.frame.apply(Complex64::new(1.0, 0.0)),
            self.frame.apply_boundary(BoundaryPoint::Infinity),
        ]
    }

    /// Signed sinh-distance from the plane (positive on the positive side).
    pub fn side_value(&self, p: &PointH3) -> f64 {
        let q = self.frame.inverse().apply_h3(p);
        q.z().im / q.t()
    }

    pub fn contains(&self, p: &PointH3, tol: f64) -> bool {
        self.side_value(p).abs() <= tol
    }

    /// The endpoint on the positive side of the geodesic through `p` orthogonal to
    /// the plane; `p` is first projected to the plane.
    pub fn normal_endpoint(&self, p: &PointH3) -> BoundaryPoint {
        let q = self.frame.inverse().apply_h3(p);
        // the foot of the perpendicular from (z, t) to the vertical plane over R
        let (x, y, t) = (q.z().re, q.z().im, q.t());
        let r = (y * y + t * t).sqrt();
        self.frame.apply(Complex64::new(x, r))
    }

    /// Angle in `[0, π]` between the positive normals of two planes that meet, or
    /// `None` for disjoint planes.
    pub fn angle_between(&self, other: &Plane) -> Option<f64> {
        // move self to the vertical plane over R
        let m = self.frame.inverse().compose(&other.frame);
        let img = |z: BoundaryPoint| m.apply_boundary(z);
        let zero = BoundaryPoint::Finite(Complex64::new(0.0, 0.0));
        let one = BoundaryPoint::Finite(Complex64::new(1.0, 0.0));
        let pts = [img(zero), img(one), img(BoundaryPoint::Infinity)];
        let g = if pts.iter().any(|p| p.is_infinite()) {
            MobiusMap::identity()
        } else {
            let z: Vec<Complex64> = pts.iter().map(|p| p.as_finite().expect("finite")).collect();
            let (centre, radius) = circumcircle(z[0], z[1], z[2])?;
            if radius < centre.im.abs() {
                return None;
            }
            let x0 = centre.re + (radius * radius - centre.im * centre.im).sqrt();
            // send x0 to ∞ by an orientation-preserving real map
            MobiusMap::from_real(0.0, -1.0, 1.0, -x0).expect("unit determinant")
        };
        let h = g.compose(&m);
        let finite: Vec<Complex64> = [-1.0, 0.0, 1.0, 2.0]
            .iter()
            .filter_map(|&r| h.apply(Complex64::new(r, 0.0)).as_finite())
            .collect();
        let p1 = finite[0];
        let p2 = *finite
            .iter()
            .skip(1)
            .max_by(|a, b| (*a - p1).norm().total_cmp(&(*b - p1).norm()))?;
        let u = (p2 - p1) / (p2 - p1).norm();
        let up = h.apply(Complex64::new(0.0, 1.0)).as_finite()?;
        let w = up - p1;
        let normal = w - u * (u.re * w.re + u.im * w.im);
        let normal = normal / normal.norm();
        Some(normal.im.clamp(-1.0, 1.0).acos())
    }
}

fn circumcircle(a: Complex64, b: Complex64, c: Complex64) -> Option<(Complex64, f64)> {
    let d = 2.0 * (a.re * (b.im - c.im) + b.re * (c.im - a.im) + c.re * (a.im - b.im));
    if d.abs() < 1e-300 {
        return None;
    }
    let (na, nb, nc) = (a.norm_sqr(), b.norm_sqr(), c.norm_sqr());
    let ux = (na * (b.im - c.im) + nb * (c.im - a.im) + nc * (a.im - b.im)) / d;
    let uy = (na * (c.re - b.re) + nb * (a.re - c.re) + nc * (b.re - a.re)) / d;
    let centre = Complex64::new(ux, uy);
    Some((centre, (a - centre).norm()))
}
