use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{BoundaryPoint, Ideal, MobiusMap, PointH2, PointH3};
use crate::error::{Error, Result};

/// Side of an oriented geodesic of H², seen while travelling from `p` to `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    On,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
            Side::On => Side::On,
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Side::Left => -1.0,
            Side::On => 0.0,
            Side::Right => 1.0,
        }
    }
}

/// A complete geodesic of H² with endpoints in canonical order: `p < q`, `∞` last.
///
/// For `p < q` finite the geodesic is the half circle over `[p, q]` and its right
/// side is the inside; for `q = ∞` it is the vertical line `x = p` and the right
/// side is `x > p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeodesicH2 {
    p: Ideal,
    q: Ideal,
}

#[derive(Deserialize)]
struct RawGeodesicH2 {
    p: Ideal,
    q: Ideal,
}

impl<'de> Deserialize<'de> for GeodesicH2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawGeodesicH2::deserialize(d)?;
        GeodesicH2::new(raw.p, raw.q).map_err(serde::de::Error::custom)
    }
}

impl GeodesicH2 {
    pub fn new(p: Ideal, q: Ideal) -> Result<Self> {
        if let Ideal::Real(r) = p {
            if !r.is_finite() {
                return Err(Error::InvalidInput(format!("non-finite endpoint {r}")));
            }
        }
        if let Ideal::Real(r) = q {
            if !r.is_finite() {
                return Err(Error::InvalidInput(format!("non-finite endpoint {r}")));
            }
        }
        if p == q {
            return Err(Error::DegenerateGeodesic);
        }
        let (p, q) = if p.key() < q.key() { (p, q) } else { (q, p) };
        Ok(Self { p, q })
    }

    pub fn from_reals(p: f64, q: f64) -> Result<Self> {
        Self::new(Ideal::Real(p), Ideal::Real(q))
    }

    /// The vertical geodesic `x = p`.
    pub fn vertical(p: f64) -> Result<Self> {
        Self::new(Ideal::Real(p), Ideal::Infinity)
    }

    /// The half circle `|z − centre| = radius`.
    pub fn circle(centre: f64, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::DegenerateGeodesic);
        }
        Self::from_reals(centre - radius, centre + radius)
    }

    pub fn p(&self) -> Ideal {
        self.p
    }

    pub fn q(&self) -> Ideal {
        self.q
    }

    pub fn endpoints(&self) -> (Ideal, Ideal) {
        (self.p, self.q)
    }

    pub fn is_vertical(&self) -> bool {
        self.q.is_infinite()
    }

    /// Centre and radius of the half circle; `None` for vertical lines.
    pub fn circle_data(&self) -> Option<(f64, f64)> {
        match (self.p, self.q) {
            (Ideal::Real(p), Ideal::Real(q)) => Some(((p + q) / 2.0, (q - p) / 2.0)),
            _ => None,
        }
    }

    /// Signed, scale-aware offset of `z` from the geodesic (positive on the right).
    pub fn side_value(&self, z: &PointH2) -> f64 {
        match (self.p, self.q) {
            (Ideal::Real(p), Ideal::Infinity) => (z.x() - p) / z.y(),
            (Ideal::Real(p), Ideal::Real(q)) => {
                // (r² − |z − c|²) / (2 r y) equals sinh of the signed distance
                let c = (p + q) / 2.0;
                let r = (q - p) / 2.0;
                let dx = z.x() - c;
                ((r - dx) * (r + dx) - z.y() * z.y()) / (2.0 * r * z.y())
            }
            _ => unreachable!("canonical order puts infinity last"),
        }
    }

    /// Signed hyperbolic distance from `z` to the geodesic (positive on the right).
    pub fn signed_distance(&self, z: &PointH2) -> f64 {
        self.side_value(z).asinh()
    }

    pub fn side_of(&self, z: &PointH2, tol: f64) -> Side {
        let v = self.side_value(z);
        if v > tol {
            Side::Right
        } else if v < -tol {
            Side::Left
        } else {
            Side::On
        }
    }

    /// Side of a boundary point that is not an endpoint.
    pub fn side_of_ideal(&self, w: Ideal) -> Side {
        if w == self.p || w == self.q {
            return Side::On;
        }
        match (self.p, self.q, w) {
            (Ideal::Real(p), Ideal::Infinity, Ideal::Real(x)) => {
                if x > p {
                    Side::Right
                } else {
                    Side::Left
                }
            }
            (Ideal::Real(p), Ideal::Real(q), Ideal::Real(x)) => {
                if p < x && x < q {
                    Side::Right
                } else {
                    Side::Left
                }
            }
            (Ideal::Real(_), Ideal::Real(_), Ideal::Infinity) => Side::Left,
            _ => Side::On,
        }
    }

    /// Side of `other`, assumed disjoint from `self`, decided by its endpoints.
    /// Returns `Side::On` for the same geodesic or crossing geodesics.
    pub fn side_of_geodesic(&self, other: &GeodesicH2) -> Side {
        let a = self.side_of_ideal(other.p);
        let b = self.side_of_ideal(other.q);
        match (a, b) {
            (Side::On, Side::On) => Side::On,
            (Side::On, s) | (s, Side::On) => s,
            (s, t) if s == t => s,
            _ => Side::On,
        }
    }

    pub fn shares_endpoint(&self, other: &GeodesicH2) -> bool {
        self.p == other.p || self.p == other.q || self.q == other.p || self.q == other.q
    }

    /// Whether the endpoint pairs interleave on the circle, i.e. the geodesics cross
    /// transversally. Geodesics with a common endpoint never cross.
    pub fn crosses(&self, other: &GeodesicH2) -> bool {
        if self.shares_endpoint(other) {
            return false;
        }
        let inside = |x: Ideal| {
            let k = x.key();
            self.p.key() < k && k < self.q.key()
        };
        inside(other.p) != inside(other.q)
    }

    /// Real map sending `p ↦ 0`, `q ↦ ∞` with positive determinant; the right side
    /// goes to `Re z > 0`.
    pub fn normalizing_map(&self) -> MobiusMap {
        match (self.p, self.q) {
            (Ideal::Real(p), Ideal::Infinity) => MobiusMap::translation(Complex64::new(-p, 0.0)),
            (Ideal::Real(p), Ideal::Real(q)) => {
                MobiusMap::from_real(1.0, -p, -1.0, q).expect("distinct endpoints give a regular matrix")
            }
            _ => unreachable!("canonical order puts infinity last"),
        }
    }

    /// Nearest point of the geodesic to `z`.
    pub fn project(&self, z: &PointH2) -> PointH2 {
        let n = self.normalizing_map();
        let w = n.apply_h2(z).expect("real map");
        let r = (w.x() * w.x() + w.y() * w.y()).sqrt();
        let foot = PointH2::new(0.0, r).expect("positive height");
        n.inverse().apply_h2(&foot).expect("real map")
    }

    pub fn contains(&self, z: &PointH2, tol: f64) -> bool {
        self.side_value(z).abs() <= tol
    }

    /// Hyperbolic distance between two geodesics (zero if they cross or share an
    /// endpoint), from the cross-ratio of the four endpoints.
    pub fn distance_to(&self, other: &GeodesicH2) -> f64 {
        if self == other || self.shares_endpoint(other) || self.crosses(other) {
            return 0.0;
        }
        // Map self to (0, ∞); the other becomes a half circle over [u, v] on one side.
        let n = self.normalizing_map();
        let u = n.apply_ideal(other.p).expect("real map");
        let v = n.apply_ideal(other.q).expect("real map");
        let (u, v) = match (u, v) {
            (Ideal::Real(u), Ideal::Real(v)) => (u.abs().min(v.abs()), u.abs().max(v.abs())),
            _ => return 0.0,
        };
        // Geodesics (0, ∞) and (u, v) with 0 < u < v: distance = ln((√v + √u)/(√v − √u)).
        let (su, sv) = (u.sqrt(), v.sqrt());
        (2.0 * (su / sv).atanh()).max(0.0)
    }

    pub fn to_h3(self) -> GeodesicH3 {
        GeodesicH3 {
            from: self.p.to_boundary(),
            to: self.q.to_boundary(),
        }
    }

    /// Unsigned angle in `(0, π/2]` between two crossing geodesics; `None` if disjoint.
    pub fn crossing_angle(&self, other: &GeodesicH2) -> Option<f64> {
        if !self.crosses(other) {
            return None;
        }
        let n = self.normalizing_map();
        let u = n.apply_ideal(other.p).ok()?.as_real()?;
        let v = n.apply_ideal(other.q).ok()?.as_real()?;
        let y = (-u * v).sqrt();
        let c = (u + v) / 2.0;
        Some(y.atan2(c.abs()))
    }

    /// Point where two crossing geodesics meet.
    pub fn intersection_point(&self, other: &GeodesicH2) -> Option<PointH2> {
        if !self.crosses(other) {
            return None;
        }
        let n = self.normalizing_map();
        let u = n.apply_ideal(other.p).ok()?.as_real()?;
        let v = n.apply_ideal(other.q).ok()?.as_real()?;
        let on_axis = PointH2::new(0.0, (-u * v).sqrt()).ok()?;
        n.inverse().apply_h2(&on_axis).ok()
    }
}

/// An oriented geodesic of H³ between two distinct points of Ĉ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicH3 {
    from: BoundaryPoint,
    to: BoundaryPoint,
}

impl GeodesicH3 {
    pub fn new(from: BoundaryPoint, to: BoundaryPoint) -> Result<Self> {
        let same = match (from, to) {
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => true,
            (BoundaryPoint::Finite(a), BoundaryPoint::Finite(b)) => {
                (a - b).norm() <= 1e-14 * a.norm().max(b.norm()).max(1e-300)
            }
            _ => false,
        };
        if same {
            return Err(Error::DegenerateGeodesic);
        }
        Ok(Self { from, to })
    }

    pub fn from(&self) -> BoundaryPoint {
        self.from
    }

    pub fn to(&self) -> BoundaryPoint {
        self.to
    }

    pub fn reversed(&self) -> GeodesicH3 {
        GeodesicH3 {
            from: self.to,
            to: self.from,
        }
    }

    /// A map taking `0 ↦ from` and `∞ ↦ to`.
    pub fn frame(&self) -> MobiusMap {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let m = match (self.from, self.to) {
            (BoundaryPoint::Finite(u), BoundaryPoint::Finite(v)) => MobiusMap::new(v, u, one, one),
            (BoundaryPoint::Finite(u), BoundaryPoint::Infinity) => MobiusMap::new(one, u, zero, one),
            (BoundaryPoint::Infinity, BoundaryPoint::Finite(v)) => MobiusMap::new(v, one, one, zero),
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => unreachable!("validated"),
        };
        m.expect("distinct endpoints give a regular matrix")
    }

    /// Hyperbolic distance from a point to this geodesic.
    pub fn distance_to(&self, p: &PointH3) -> f64 {
        let q = self.frame().inverse().apply_h3(p);
        (q.z().norm() / q.t()).asinh()
    }

    /// Point at signed arclength `s` from the foot of the frame's `(0, 1)`.
    pub fn point_at(&self, s: f64) -> PointH3 {
        let base = PointH3::new_unchecked(Complex64::new(0.0, 0.0), s.exp());
        self.frame().apply_h3(&base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, LN_2};

    fn g(p: f64, q: f64) -> GeodesicH2 {
        GeodesicH2::from_reals(p, q).unwrap()
    }

    #[test]
    fn canonical_order_is_idempotent() {
        let a = g(2.0, -1.0);
        assert_eq!(a.p(), Ideal::Real(-1.0));
        assert_eq!(GeodesicH2::new(a.q(), a.p()).unwrap(), a);
        let v = GeodesicH2::new(Ideal::Infinity, Ideal::Real(3.0)).unwrap();
        assert_eq!(v.p(), Ideal::Real(3.0));
        assert!(v.q().is_infinite());
        assert!(GeodesicH2::from_reals(1.0, 1.0).is_err());
    }

    #[test]
    fn sides() {
        let unit = g(-1.0, 1.0);
        let inside = PointH2::new(0.0, 0.5).unwrap();
        let outside = PointH2::new(0.0, 2.0).unwrap();
        assert_eq!(unit.side_of(&inside, 0.0), Side::Right);
        assert_eq!(unit.side_of(&outside, 0.0), Side::Left);
        assert_abs_diff_eq!(unit.signed_distance(&inside), LN_2, epsilon = 1e-15);
        assert_abs_diff_eq!(unit.signed_distance(&outside), -LN_2, epsilon = 1e-15);
        let axis = GeodesicH2::vertical(0.0).unwrap();
        assert_eq!(axis.side_of(&PointH2::new(1.0, 1.0).unwrap(), 0.0), Side::Right);
        assert_eq!(axis.side_of_geodesic(&g(2.0, 3.0)), Side::Right);
        assert_eq!(unit.side_of_geodesic(&g(2.0, 3.0)), Side::Left);
        assert_eq!(unit.side_of_ideal(Ideal::Infinity), Side::Left);
        // normalizing sends the right side to Re > 0
        let n = unit.normalizing_map();
        assert!(n.apply_h2(&inside).unwrap().x() > 0.0);
    }

    #[test]
    fn crossing_tests() {
        let axis = GeodesicH2::vertical(0.0).unwrap();
        assert!(axis.crosses(&g(-1.0, 2.0)));
        assert!(!axis.crosses(&g(1.0, 2.0)));
        assert!(!axis.crosses(&g(0.0, 2.0)));
        assert!(g(-1.0, 1.0).crosses(&g(0.0, 2.0)));
        assert!(!g(-1.0, 1.0).crosses(&g(-2.0, 2.0)));
        assert!(GeodesicH2::vertical(0.5).unwrap().crosses(&g(-1.0, 1.0)));
    }

    #[test]
    fn distances_between_geodesics() {
        assert_abs_diff_eq!(g(-1.0, 1.0).distance_to(&g(-2.0, 2.0)), LN_2, epsilon = 1e-14);
        let e = std::f64::consts::E;
        assert_abs_diff_eq!(g(-1.0, 1.0).distance_to(&g(-e, e)), 1.0, epsilon = 1e-14);
        assert_eq!(g(-1.0, 1.0).distance_to(&g(0.0, 2.0)), 0.0);
        assert_eq!(g(-1.0, 1.0).distance_to(&g(1.0, 2.0)), 0.0);
    }

    #[test]
    fn crossing_angles() {
        let axis = GeodesicH2::vertical(0.0).unwrap();
        assert_abs_diff_eq!(axis.crossing_angle(&g(-1.0, 1.0)).unwrap(), FRAC_PI_2, epsilon = 1e-15);
        // |1 + X|/(1 − X) with X the cross-ratio of (0, ∞; −1, 2) is 1/3
        assert_abs_diff_eq!(
            axis.crossing_angle(&g(-1.0, 2.0)).unwrap(),
            (1.0f64 / 3.0).acos(),
            epsilon = 1e-14
        );
        let p = axis.intersection_point(&g(-1.0, 2.0)).unwrap();
        assert_abs_diff_eq!(p.y(), 2f64.sqrt(), epsilon = 1e-14);
        assert!(axis.crossing_angle(&g(1.0, 2.0)).is_none());
    }

    fn cross_ratio_distance(a: f64, b: f64, c: f64, d: f64) -> f64 {
        // independent closed form: cosh d = 1 + 2·(c−b)(d−a) / ((b−a)(d−c)) for a<b<c<d
        let x = (c - b) * (d - a) / ((b - a) * (d - c));
        (1.0 + 2.0 * x).acosh()
    }

    proptest! {
        #[test]
        fn distance_matches_cross_ratio(mut v in prop::collection::vec(-10.0..10.0f64, 4)) {
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            prop_assume!(v.windows(2).all(|w| w[1] - w[0] > 1e-2));
            let d = g(v[0], v[1]).distance_to(&g(v[2], v[3]));
            let oracle = cross_ratio_distance(v[0], v[1], v[2], v[3]);
            prop_assert!((d - oracle).abs() < 1e-9 * (1.0 + oracle));
            let nested = g(v[0], v[3]).distance_to(&g(v[1], v[2]));
            prop_assert!(nested > 0.0);
        }

        #[test]
        fn signed_distance_matches_projection(p in -3.0..3.0f64, q in -3.0..3.0f64, x in -3.0..3.0f64, y in 0.1..3.0f64) {
            prop_assume!((p - q).abs() > 0.1);
            let geo = g(p, q);
            let z = PointH2::new(x, y).unwrap();
            let foot = geo.project(&z);
            let d = crate::hyperbolic::dist_h2(&z, &foot);
            prop_assert!((d - geo.signed_distance(&z).abs()).abs() < 1e-9);
            prop_assert!(geo.contains(&foot, 1e-9));
        }
    }
}
