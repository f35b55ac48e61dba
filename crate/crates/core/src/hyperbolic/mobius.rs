use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{BoundaryPoint, GeodesicH2, GeodesicH3, Ideal, PointH2, PointH3};
use crate::error::{Error, Result};
use crate::precision::precision;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
/// Relative size below which a matrix entry counts as zero.
const ENTRY_EPS: f64 = 1e-14;
/// Exact-class tolerance on `tr²` (identity/parabolic and the real axis).
const CLASS_EXACT: f64 = 1e-12;

/// Conjugacy type of a Möbius transformation, read off `tr²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
    Loxodromic,
    Indeterminate,
}

impl Classification {
    /// Hyperbolic maps count as loxodromic.
    pub fn is_loxodromic(self) -> bool {
        matches!(self, Classification::Hyperbolic | Classification::Loxodromic)
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Classification::Identity => "identity",
            Classification::Elliptic => "elliptic",
            Classification::Parabolic => "parabolic",
            Classification::Hyperbolic => "hyperbolic",
            Classification::Loxodromic => "loxodromic",
            Classification::Indeterminate => "indeterminate",
        };
        f.write_str(s)
    }
}

/// An element of PSL(2, C), stored as a unit-determinant matrix with the sign
/// fixed so that the first non-negligible entry has non-negative real part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMobius")]
pub struct MobiusMap {
    #[serde(with = "super::complex_serde")]
    a: Complex64,
    #[serde(with = "super::complex_serde")]
    b: Complex64,
    #[serde(with = "super::complex_serde")]
    c: Complex64,
    #[serde(with = "super::complex_serde")]
    d: Complex64,
}

#[derive(Deserialize)]
struct RawMobius {
    #[serde(with = "super::complex_serde")]
    a: Complex64,
    #[serde(with = "super::complex_serde")]
    b: Complex64,
    #[serde(with = "super::complex_serde")]
    c: Complex64,
    #[serde(with = "super::complex_serde")]
    d: Complex64,
}

impl TryFrom<RawMobius> for MobiusMap {
    type Error = Error;
    fn try_from(r: RawMobius) -> Result<Self> {
        MobiusMap::new(r.a, r.b, r.c, r.d)
    }
}

impl MobiusMap {
    pub const IDENTITY: MobiusMap = MobiusMap {
        a: ONE,
        b: ZERO,
        c: ZERO,
        d: ONE,
    };

    /// Builds `z ↦ (az + b)/(cz + d)` and rescales it to determinant one.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let scale = a.norm().max(b.norm()).max(c.norm()).max(d.norm());
        let det = a * d - b * c;
        if !scale.is_finite() || !(det.norm() > 1e-28 * scale * scale) {
            return Err(Error::SingularMatrix);
        }
        let s = if det.im == 0.0 && det.re > 0.0 {
            Complex64::new(det.re.sqrt(), 0.0)
        } else {
            det.sqrt()
        };
        Ok(MobiusMap {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        }
        .fix_sign())
    }

    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::new(
            Complex64::new(a, 0.0),
            Complex64::new(b, 0.0),
            Complex64::new(c, 0.0),
            Complex64::new(d, 0.0),
        )
    }

    pub fn identity() -> Self {
        Self::IDENTITY
    }

    /// `z ↦ k z` for `k ≠ 0`.
    pub fn scaling(k: Complex64) -> Result<Self> {
        Self::new(k, ZERO, ZERO, ONE)
    }

    /// `z ↦ z + b`.
    pub fn translation(b: Complex64) -> Self {
        MobiusMap {
            a: ONE,
            b,
            c: ZERO,
            d: ONE,
        }
        .fix_sign()
    }

    /// Map sending `p ↦ 0` and `q ↦ ∞` (the "standard position" of a geodesic).
    pub fn sending_to_zero_infinity(p: BoundaryPoint, q: BoundaryPoint) -> Result<Self> {
        match (p, q) {
            (BoundaryPoint::Finite(p), BoundaryPoint::Finite(q)) => Self::new(ONE, -p, -ONE, q),
            (BoundaryPoint::Finite(p), BoundaryPoint::Infinity) => Ok(Self::translation(-p)),
            (BoundaryPoint::Infinity, BoundaryPoint::Finite(q)) => Self::new(ZERO, -ONE, ONE, -q),
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => Err(Error::DegenerateGeodesic),
        }
    }

    fn fix_sign(self) -> Self {
        let entries = [self.a, self.b, self.c, self.d];
        let scale = entries.iter().map(|e| e.norm()).fold(0.0, f64::max);
        let lead = entries
            .iter()
            .find(|e| e.norm() > ENTRY_EPS * scale)
            .copied()
            .unwrap_or(ONE);
        let negate = if lead.re.abs() > ENTRY_EPS * lead.norm() {
            lead.re < 0.0
        } else {
            lead.im < 0.0
        };
        if negate {
            MobiusMap {
                a: -self.a,
                b: -self.b,
                c: -self.c,
                d: -self.d,
            }
        } else {
            self
        }
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }
    pub fn b(&self) -> Complex64 {
        self.b
    }
    pub fn c(&self) -> Complex64 {
        self.c
    }
    pub fn d(&self) -> Complex64 {
        self.d
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    pub fn trace_squared(&self) -> Complex64 {
        let t = self.trace();
        t * t
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MobiusMap) -> MobiusMap {
        let a = self.a * other.a + self.b * other.c;
        let b = self.a * other.b + self.b * other.d;
        let c = self.c * other.a + self.d * other.c;
        let d = self.c * other.b + self.d * other.d;
        // The product of unit-determinant factors cannot be singular; renormalize drift.
        MobiusMap::new(a, b, c, d).unwrap_or(MobiusMap { a, b, c, d })
    }

    pub fn inverse(&self) -> MobiusMap {
        MobiusMap {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
        .fix_sign()
    }

    /// `self ∘ other ∘ self⁻¹`.
    pub fn conjugate(&self, other: &MobiusMap) -> MobiusMap {
        self.compose(other).compose(&self.inverse())
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.entries().iter().all(|e| e.im.abs() <= tol)
    }

    /// Equality in PSL(2, C): entrywise within `tol` up to a global sign.
    pub fn approx_eq(&self, other: &MobiusMap, tol: f64) -> bool {
        let close = |s: f64| {
            self.entries()
                .iter()
                .zip(other.entries().iter())
                .all(|(x, y)| (x - y * s).norm() <= tol)
        };
        close(1.0) || close(-1.0)
    }

    /// Operator-norm style distance to the identity in PSL(2, C).
    pub fn distance_to_identity(&self) -> f64 {
        let plus = [(self.a - ONE), self.b, self.c, (self.d - ONE)];
        let minus = [(self.a + ONE), self.b, self.c, (self.d + ONE)];
        let m = |v: [Complex64; 4]| v.iter().map(|e| e.norm()).fold(0.0, f64::max);
        m(plus).min(m(minus))
    }

    pub fn apply(&self, z: Complex64) -> BoundaryPoint {
        self.apply_boundary(BoundaryPoint::Finite(z))
    }

    pub fn apply_boundary(&self, p: BoundaryPoint) -> BoundaryPoint {
        match p {
            BoundaryPoint::Infinity => {
                if self.c.norm() <= ENTRY_EPS * self.a.norm().max(1.0) {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite(self.a / self.c)
                }
            }
            BoundaryPoint::Finite(z) => {
                let num = self.a * z + self.b;
                let den = self.c * z + self.d;
                let scale = (self.c * z).norm().max(self.d.norm());
                if den.norm() <= ENTRY_EPS * scale {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite(num / den)
                }
            }
        }
    }

    pub fn apply_h3(&self, p: &PointH3) -> PointH3 {
        let z = p.z();
        let t = p.t();
        let cz_d = self.c * z + self.d;
        let denom = cz_d.norm_sqr() + self.c.norm_sqr() * t * t;
        let num = (self.a * z + self.b) * cz_d.conj() + self.a * self.c.conj() * (t * t);
        PointH3::new_unchecked(num / denom, t / denom)
    }

    /// Action on H²; requires real entries.
    pub fn apply_h2(&self, p: &PointH2) -> Result<PointH2> {
        let m = self.real_entries()?;
        let (x, y) = (p.x(), p.y());
        let cx_d = m[2] * x + m[3];
        let denom = cx_d * cx_d + m[2] * m[2] * y * y;
        let nx = (m[0] * x + m[1]) * cx_d + m[0] * m[2] * y * y;
        PointH2::new(nx / denom, y / denom)
    }

    /// Action on R ∪ {∞}; requires real entries.
    pub fn apply_ideal(&self, p: Ideal) -> Result<Ideal> {
        let m = self.real_entries()?;
        Ok(match p {
            Ideal::Infinity => {
                if m[2].abs() <= ENTRY_EPS * m[0].abs().max(1.0) {
                    Ideal::Infinity
                } else {
                    Ideal::Real(m[0] / m[2])
                }
            }
            Ideal::Real(x) => {
                let den = m[2] * x + m[3];
                if den.abs() <= ENTRY_EPS * (m[2] * x).abs().max(m[3].abs()) {
                    Ideal::Infinity
                } else {
                    Ideal::Real((m[0] * x + m[1]) / den)
                }
            }
        })
    }

    pub fn apply_geodesic_h2(&self, g: &GeodesicH2) -> Result<GeodesicH2> {
        GeodesicH2::new(self.apply_ideal(g.p())?, self.apply_ideal(g.q())?)
    }

    pub fn apply_geodesic_h3(&self, g: &GeodesicH3) -> Result<GeodesicH3> {
        GeodesicH3::new(self.apply_boundary(g.from()), self.apply_boundary(g.to()))
    }

    pub(crate) fn real_entries(&self) -> Result<[f64; 4]> {
        let tol = 1e-12 * self.entries().iter().map(|e| e.norm()).fold(1.0, f64::max);
        if !self.is_real(tol) {
            return Err(Error::NotReal);
        }
        Ok([self.a.re, self.b.re, self.c.re, self.d.re])
    }

    /// Classification by `tr²`, with a band around the class boundaries reported
    /// as [`Classification::Indeterminate`].
    pub fn classify(&self) -> Classification {
        let band = precision().classify_band;
        let tau = self.trace_squared();
        let to_four = (tau - 4.0).norm();
        if to_four <= CLASS_EXACT {
            let scale = self.entries().iter().map(|e| e.norm()).fold(1.0, f64::max);
            return if self.b.norm() <= 1e-10 * scale
                && self.c.norm() <= 1e-10 * scale
                && (self.a - self.d).norm() <= 1e-10 * scale
            {
                Classification::Identity
            } else {
                Classification::Parabolic
            };
        }
        if to_four < band {
            return Classification::Indeterminate;
        }
        let to_zero = tau.norm();
        if to_zero <= CLASS_EXACT {
            return Classification::Elliptic;
        }
        if to_zero < band {
            return Classification::Indeterminate;
        }
        // distance of tr² from the elliptic segment [0, 4]
        let to_segment = if (0.0..=4.0).contains(&tau.re) {
            tau.im.abs()
        } else {
            to_zero.min(to_four)
        };
        if to_segment <= CLASS_EXACT {
            return Classification::Elliptic;
        }
        if to_segment < band {
            return Classification::Indeterminate;
        }
        if tau.re > 4.0 && tau.im.abs() <= CLASS_EXACT * tau.norm() {
            Classification::Hyperbolic
        } else {
            Classification::Loxodromic
        }
    }

    pub fn is_loxodromic(&self) -> bool {
        self.classify().is_loxodromic()
    }

    /// Fixed points on Ĉ; a single point for parabolic maps, `None` for the identity.
    pub fn fixed_points(&self) -> Option<(BoundaryPoint, BoundaryPoint)> {
        let scale = self.entries().iter().map(|e| e.norm()).fold(0.0, f64::max);
        let tiny = ENTRY_EPS * scale;
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        if c.norm() <= tiny {
            if (d - a).norm() <= tiny {
                if b.norm() <= tiny {
                    return None;
                }
                return Some((BoundaryPoint::Infinity, BoundaryPoint::Infinity));
            }
            return Some((BoundaryPoint::Infinity, BoundaryPoint::Finite(b / (d - a))));
        }
        // c z² + (d − a) z − b = 0, discriminant tr² − 4
        let disc = (self.trace_squared() - 4.0).sqrt();
        let amd = a - d;
        let big = if (amd + disc).norm() >= (amd - disc).norm() {
            amd + disc
        } else {
            amd - disc
        };
        if big.norm() <= tiny {
            // a = d and tr² = 4 simultaneously: parabolic fixing 0
            return Some((BoundaryPoint::finite(0.0, 0.0), BoundaryPoint::finite(0.0, 0.0)));
        }
        let z1 = big / (c * 2.0);
        let z2 = -b / (c * z1);
        Some((BoundaryPoint::Finite(z1), BoundaryPoint::Finite(z2)))
    }

    /// Modulus of the derivative at a fixed point (`< 1` means attracting).
    fn derivative_modulus(&self, p: BoundaryPoint) -> f64 {
        match p {
            BoundaryPoint::Finite(z) => 1.0 / (self.c * z + self.d).norm_sqr(),
            // conjugate by z ↦ 1/z: the derivative at ∞ is (d/a)²-like; use a/c-free form
            BoundaryPoint::Infinity => (self.d / self.a).norm_sqr(),
        }
    }

    /// Oriented axis from the repelling to the attracting fixed point.
    pub fn axis(&self) -> Result<GeodesicH3> {
        let class = self.classify();
        if !class.is_loxodromic() {
            return Err(Error::NotLoxodromic(class));
        }
        let (p, q) = self.fixed_points().ok_or(Error::NotLoxodromic(class))?;
        let (repel, attract) = if self.derivative_modulus(p) < self.derivative_modulus(q) {
            (q, p)
        } else {
            (p, q)
        };
        GeodesicH3::new(repel, attract)
    }

    /// Axis of a real hyperbolic map as a geodesic of H² (canonical order).
    pub fn axis_h2(&self) -> Result<GeodesicH2> {
        self.real_entries()?;
        let axis = self.axis()?;
        let tol = 1e-9;
        let p = axis
            .from()
            .to_ideal(tol)
            .ok_or_else(|| Error::Degenerate("fixed point off the real line".into()))?;
        let q = axis
            .to()
            .to_ideal(tol)
            .ok_or_else(|| Error::Degenerate("fixed point off the real line".into()))?;
        GeodesicH2::new(p, q)
    }

    /// Translation length along the axis, `Re 2·arcosh(tr/2)`.
    pub fn translation_length(&self) -> f64 {
        let half = self.trace() / 2.0;
        (half.acosh() * 2.0).re.abs()
    }

    /// Rotation by `angle` about the oriented geodesic `axis`: conjugate of
    /// `z ↦ e^{i·angle} z` by a map taking `0 ↦ from`, `∞ ↦ to`.
    pub fn rotate_about(axis: &GeodesicH3, angle: f64) -> MobiusMap {
        let frame = axis.frame();
        let half = Complex64::from_polar(1.0, angle / 2.0);
        let rot = MobiusMap {
            a: half,
            b: ZERO,
            c: ZERO,
            d: half.conj(),
        };
        frame.conjugate(&rot)
    }
}

impl Mul for MobiusMap {
    type Output = MobiusMap;
    fn mul(self, rhs: MobiusMap) -> MobiusMap {
        self.compose(&rhs)
    }
}

impl Mul for &MobiusMap {
    type Output = MobiusMap;
    fn mul(self, rhs: &MobiusMap) -> MobiusMap {
        self.compose(rhs)
    }
}
