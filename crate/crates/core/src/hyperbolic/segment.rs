use serde::{Deserialize, Serialize};

use super::{dist_h2, GeodesicH2, Ideal, MobiusMap, PointH2};
use crate::error::{Error, Result};

/// A geodesic segment of H² from `a` to `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSegment")]
pub struct GeodesicSegment {
    a: PointH2,
    b: PointH2,
}

#[derive(Deserialize)]
struct RawSegment {
    a: PointH2,
    b: PointH2,
}

impl TryFrom<RawSegment> for GeodesicSegment {
    type Error = Error;
    fn try_from(r: RawSegment) -> Result<Self> {
        GeodesicSegment::new(r.a, r.b)
    }
}

impl GeodesicSegment {
    pub fn new(a: PointH2, b: PointH2) -> Result<Self> {
        if dist_h2(&a, &b) <= 1e-14 {
            return Err(Error::DegenerateSegment);
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> PointH2 {
        self.a
    }

    pub fn b(&self) -> PointH2 {
        self.b
    }

    pub fn length(&self) -> f64 {
        dist_h2(&self.a, &self.b)
    }

    pub fn reversed(&self) -> GeodesicSegment {
        GeodesicSegment { a: self.b, b: self.a }
    }

    /// Real map taking `a ↦ i` and `b ↦ i·e^{length}`, so the segment becomes the
    /// arclength-parametrized piece `t ↦ i·e^t`, `t ∈ [0, length]`, of the imaginary axis.
    pub fn frame(&self) -> MobiusMap {
        let (x1, y1) = (self.a.x(), self.a.y());
        let s = y1.sqrt();
        let lift = MobiusMap::from_real(1.0 / s, -x1 / s, 0.0, s).expect("regular");
        let w = lift.apply_h2(&self.b).expect("real map").to_complex();
        // rotate about i so that w lands above i on the imaginary axis
        let i = num_complex::Complex64::new(0.0, 1.0);
        let disk = (w - i) / (w + i);
        let phi = -disk.arg() / 2.0;
        let (sn, cs) = phi.sin_cos();
        let rot = MobiusMap::from_real(cs, sn, -sn, cs).expect("rotation");
        rot.compose(&lift)
    }

    /// Point at arclength `t` from `a` (`t` may leave `[0, length]`).
    pub fn point_at(&self, t: f64) -> PointH2 {
        let inv = self.frame().inverse();
        let p = PointH2::new(0.0, t.exp()).expect("positive height");
        inv.apply_h2(&p).expect("real map")
    }

    /// The complete geodesic carrying the segment, and whether travelling from `a`
    /// to `b` runs from its `p` end towards its `q` end.
    pub fn carrier(&self) -> (GeodesicH2, bool) {
        let inv = self.frame().inverse();
        let back = inv.apply_ideal(Ideal::Real(0.0)).expect("real map");
        let fwd = inv.apply_ideal(Ideal::Infinity).expect("real map");
        let g = GeodesicH2::new(back, fwd).expect("distinct endpoints");
        (g, g.p() == back)
    }
}
