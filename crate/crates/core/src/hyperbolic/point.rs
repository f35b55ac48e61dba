use std::fmt;

use num_complex::Complex64;
use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MIN_HEIGHT: f64 = 1e-14;

/// A point of the upper half-plane model of H².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawH2")]
pub struct PointH2 {
    x: f64,
    y: f64,
}

#[derive(Deserialize)]
struct RawH2 {
    x: f64,
    y: f64,
}

impl TryFrom<RawH2> for PointH2 {
    type Error = Error;
    fn try_from(raw: RawH2) -> Result<Self> {
        PointH2::new(raw.x, raw.y)
    }
}

impl PointH2 {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > MIN_HEIGHT) || !x.is_finite() || !y.is_finite() {
            return Err(Error::NotInUpperHalfPlane(y));
        }
        Ok(Self { x, y })
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    /// The totally geodesic inclusion H² ⊂ H³ as the vertical half-plane over R.
    pub fn to_h3(self) -> PointH3 {
        PointH3 {
            z: Complex64::new(self.x, 0.0),
            t: self.y,
        }
    }
}

/// A point of the upper half-space model of H³: horizontal coordinate `z`, height `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawH3")]
pub struct PointH3 {
    #[serde(with = "super::complex_serde")]
    z: Complex64,
    t: f64,
}

#[derive(Deserialize)]
struct RawH3 {
    #[serde(with = "super::complex_serde")]
    z: Complex64,
    t: f64,
}

impl TryFrom<RawH3> for PointH3 {
    type Error = Error;
    fn try_from(raw: RawH3) -> Result<Self> {
        PointH3::new(raw.z, raw.t)
    }
}

impl PointH3 {
    pub fn new(z: Complex64, t: f64) -> Result<Self> {
        if !(t > MIN_HEIGHT) || !t.is_finite() || !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::NotInUpperHalfSpace(t));
        }
        Ok(Self { z, t })
    }

    pub(crate) fn new_unchecked(z: Complex64, t: f64) -> Self {
        Self { z, t }
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn t(&self) -> f64 {
        self.t
    }
}

/// A point of ∂H² = R ∪ {∞}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ideal {
    Real(f64),
    Infinity,
}

impl Ideal {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Ideal::Infinity)
    }

    pub fn as_real(&self) -> Option<f64> {
        match *self {
            Ideal::Real(r) => Some(r),
            Ideal::Infinity => None,
        }
    }

    /// Sort key for the linear order on R ∪ {∞} with ∞ last.
    pub(crate) fn key(&self) -> f64 {
        match *self {
            Ideal::Real(r) => r,
            Ideal::Infinity => f64::INFINITY,
        }
    }

    /// Position on the unit circle after the Cayley transform, in (−π, π].
    pub fn circle_angle(&self) -> f64 {
        match *self {
            Ideal::Real(r) => 2.0 * r.atan(),
            Ideal::Infinity => std::f64::consts::PI,
        }
    }

    pub fn to_boundary(self) -> BoundaryPoint {
        match self {
            Ideal::Real(r) => BoundaryPoint::Finite(Complex64::new(r, 0.0)),
            Ideal::Infinity => BoundaryPoint::Infinity,
        }
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ideal::Real(r) => write!(f, "{r}"),
            Ideal::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Ideal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Ideal::Real(r) => s.serialize_f64(r),
            Ideal::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Ideal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct IdealVisitor;
        impl Visitor<'_> for IdealVisitor {
            type Value = Ideal;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a finite real number or the string \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Ideal, E> {
                if v.is_finite() {
                    Ok(Ideal::Real(v))
                } else {
                    Err(E::custom("non-finite ideal point; use \"inf\""))
                }
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Ideal, E> {
                Ok(Ideal::Real(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Ideal, E> {
                Ok(Ideal::Real(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Ideal, E> {
                if v == "inf" {
                    Ok(Ideal::Infinity)
                } else {
                    Err(E::custom(format!("unexpected string `{v}`, expected \"inf\"")))
                }
            }
        }
        d.deserialize_any(IdealVisitor)
    }
}

/// A point of the Riemann sphere Ĉ = ∂H³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryPoint {
    Finite(Complex64),
    Infinity,
}

impl BoundaryPoint {
    pub fn finite(re: f64, im: f64) -> Self {
        BoundaryPoint::Finite(Complex64::new(re, im))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, BoundaryPoint::Infinity)
    }

    pub fn as_finite(&self) -> Option<Complex64> {
        match *self {
            BoundaryPoint::Finite(z) => Some(z),
            BoundaryPoint::Infinity => None,
        }
    }

    /// Chordal distance on the unit sphere; bounded by 2, and ∞ is an ordinary point.
    pub fn chordal_distance(&self, other: &BoundaryPoint) -> f64 {
        match (*self, *other) {
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => 0.0,
            (BoundaryPoint::Finite(z), BoundaryPoint::Infinity)
            | (BoundaryPoint::Infinity, BoundaryPoint::Finite(z)) => 2.0 / (1.0 + z.norm_sqr()).sqrt(),
            (BoundaryPoint::Finite(z), BoundaryPoint::Finite(w)) => {
                2.0 * (z - w).norm() / ((1.0 + z.norm_sqr()).sqrt() * (1.0 + w.norm_sqr()).sqrt())
            }
        }
    }

    /// Real boundary point of H², if this point lies on R ∪ {∞}.
    pub fn to_ideal(self, tol: f64) -> Option<Ideal> {
        match self {
            BoundaryPoint::Infinity => Some(Ideal::Infinity),
            BoundaryPoint::Finite(z) if z.im.abs() <= tol * (1.0 + z.re.abs()) => Some(Ideal::Real(z.re)),
            BoundaryPoint::Finite(_) => None,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexFields {
    re: f64,
    im: f64,
}

impl Serialize for BoundaryPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            BoundaryPoint::Finite(z) => ComplexFields { re: z.re, im: z.im }.serialize(s),
            BoundaryPoint::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for BoundaryPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Finite(ComplexFields),
            Symbol(String),
        }
        match Repr::deserialize(d)? {
            Repr::Finite(c) => Ok(BoundaryPoint::Finite(Complex64::new(c.re, c.im))),
            Repr::Symbol(s) if s == "inf" => Ok(BoundaryPoint::Infinity),
            Repr::Symbol(s) => Err(de::Error::custom(format!("unexpected string `{s}`, expected \"inf\""))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_points_off_the_model() {
        assert!(PointH2::new(0.0, 0.0).is_err());
        assert!(PointH2::new(0.0, 1e-15).is_err());
        assert!(PointH2::new(0.0, -1.0).is_err());
        assert!(PointH3::new(Complex64::new(0.0, 0.0), 0.0).is_err());
        assert!(PointH2::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn infinity_serializes_as_inf() {
        let v = serde_json::to_string(&[Ideal::Real(1.5), Ideal::Infinity]).unwrap();
        assert_eq!(v, r#"[1.5,"inf"]"#);
        let back: Vec<Ideal> = serde_json::from_str(&v).unwrap();
        assert_eq!(back, vec![Ideal::Real(1.5), Ideal::Infinity]);
        assert!(serde_json::from_str::<Ideal>(r#""infinity""#).is_err());

        let b = serde_json::to_string(&BoundaryPoint::Infinity).unwrap();
        assert_eq!(b, r#""inf""#);
        let z: BoundaryPoint = serde_json::from_str(r#"{"re":1.0,"im":-2.0}"#).unwrap();
        assert_eq!(z, BoundaryPoint::finite(1.0, -2.0));
    }

    #[test]
    fn point_json_is_validated() {
        let p: PointH2 = serde_json::from_str(r#"{"x":0.5,"y":2.0}"#).unwrap();
        assert_eq!((p.x(), p.y()), (0.5, 2.0));
        assert!(serde_json::from_str::<PointH2>(r#"{"x":0.5,"y":-2.0}"#).is_err());
        let q: PointH3 = serde_json::from_str(r#"{"z":{"re":1.0,"im":2.0},"t":3.0}"#).unwrap();
        assert_eq!(q.t(), 3.0);
    }
}
