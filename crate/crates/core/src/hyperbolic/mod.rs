//! Upper half-plane and upper half-space models, Möbius maps, geodesics.

mod geodesic;
mod mobius;
mod point;
mod segment;

pub use geodesic::{GeodesicH2, GeodesicH3, Side};
pub use mobius::{Classification, MobiusMap};
pub use point::{BoundaryPoint, Ideal, PointH2, PointH3};
pub use segment::GeodesicSegment;

use crate::error::{Error, Result};

/// Hyperbolic distance in H².
pub fn dist_h2(a: &PointH2, b: &PointH2) -> f64 {
    let dx = a.x() - b.x();
    let dy = a.y() - b.y();
    let chord = (dx * dx + dy * dy).sqrt();
    2.0 * (chord / (2.0 * (a.y() * b.y()).sqrt())).asinh()
}

/// Hyperbolic distance in H³.
pub fn dist_h3(a: &PointH3, b: &PointH3) -> f64 {
    let dz = (a.z() - b.z()).norm_sqr();
    let dt = a.t() - b.t();
    let chord = (dz + dt * dt).sqrt();
    2.0 * (chord / (2.0 * (a.t() * b.t()).sqrt())).asinh()
}

/// Unit tangent direction at `v` of the geodesic from `v` towards `p`, expressed in
/// the orthonormal frame at `v` (height axis first).
fn direction_from(v: &PointH3, p: &PointH3) -> Result<[f64; 3]> {
    let z = (p.z() - v.z()) / v.t();
    let t = p.t() / v.t();
    // After moving v to (0, 1): the geodesic from (0,1) to (z,t) leaves in the
    // direction of the centre-to-(0,1) radius of its circle, rotated by 90°.
    let height = (z.norm_sqr() + (t - 1.0) * (t + 1.0)) / (2.0 * t);
    let dir = [height, z.re / t, z.im / t];
    let n = (dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]).sqrt();
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::Degenerate("angle vertex coincides with an endpoint".into()));
    }
    Ok([dir[0] / n, dir[1] / n, dir[2] / n])
}

/// The angle at `v` of the triangle `(a, v, b)`, in `[0, π]`.
pub fn angle_at(v: &PointH3, a: &PointH3, b: &PointH3) -> Result<f64> {
    let u = direction_from(v, a)?;
    let w = direction_from(v, b)?;
    Ok(angle_between(&u, &w))
}

pub(crate) fn angle_between(u: &[f64; 3], w: &[f64; 3]) -> f64 {
    let diff = ((u[0] - w[0]).powi(2) + (u[1] - w[1]).powi(2) + (u[2] - w[2]).powi(2)).sqrt();
    let sum = ((u[0] + w[0]).powi(2) + (u[1] + w[1]).powi(2) + (u[2] + w[2]).powi(2)).sqrt();
    2.0 * diff.atan2(sum)
}

/// Serde adapter writing complex numbers as `{"re": .., "im": ..}`.
pub(crate) mod complex_serde {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Fields {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        Fields { re: z.re, im: z.im }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let f = Fields::deserialize(d)?;
        Ok(Complex64::new(f.re, f.im))
    }
}
