//! Crescents, flat cylinders and grafting of a round annulus, plus the
//! admissible-loop predicate used to decide where grafting is allowed.

mod admissible;
mod export;

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperbolic::{BoundaryPoint, Classification, GeodesicH3, MobiusMap};

pub use admissible::{is_admissible_loop, Embedding, LoopVerdict, Verdict, ORIENT_BAND};
pub use export::{curves_to_json, curves_to_svg, DevelopedCurve};

/// Relative tolerance for deciding that an angle is a multiple of 2π.
const INTEGRAL_TOL: f64 = 1e-12;

/// The crescent of angle θ: the strip `(0, θ) × (0, ∞)` developed by polar
/// coordinates `(x, y) ↦ y·e^{ix}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crescent {
    theta: f64,
}

impl Crescent {
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "crescent angle must be positive, got {theta}"
            )));
        }
        Ok(Crescent { theta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Developing map on the open strip.
    pub fn dev(&self, x: f64, y: f64) -> Result<Complex64> {
        if !(x > 0.0 && x < self.theta && y > 0.0) {
            return Err(Error::InvalidInput(format!(
                "({x}, {y}) is outside the crescent (0, {}) × (0, ∞)",
                self.theta
            )));
        }
        Ok(Complex64::from_polar(y, x))
    }

    /// Continuous extension of the developing map to the boundary lines `x = 0, θ`.
    pub fn dev_closure(&self, x: f64, y: f64) -> Result<Complex64> {
        if !(x >= 0.0 && x <= self.theta && y > 0.0) {
            return Err(Error::InvalidInput(format!(
                "({x}, {y}) is outside the closed crescent [0, {}] × (0, ∞)",
                self.theta
            )));
        }
        Ok(Complex64::from_polar(y, x))
    }

    /// All preimages of `z` in the open strip, by increasing `x`. Values on the slit
    /// `[0, ∞)` are rejected.
    pub fn fiber(&self, z: Complex64) -> Result<Vec<(f64, f64)>> {
        if !(z.re.is_finite() && z.im.is_finite()) || (z.im == 0.0 && z.re >= 0.0) {
            return Err(Error::InvalidInput(format!("{z} lies on the slit [0, ∞)")));
        }
        let base = z.arg().rem_euclid(TAU);
        let r = z.norm();
        Ok((0..)
            .map(|k| base + TAU * k as f64)
            .take_while(|&x| x < self.theta)
            .map(|x| (x, r))
            .collect())
    }

    /// Transversal measure of the canonical foliation between two points: `|x₁ − x₂|`.
    pub fn canonical_measure(&self, p1: (f64, f64), p2: (f64, f64)) -> Result<f64> {
        self.dev(p1.0, p1.1)?;
        self.dev(p2.0, p2.1)?;
        Ok((p1.0 - p2.0).abs())
    }

    /// The crescent bounded by the leaves through `x₁` and `x₂`, re-based at 0.
    pub fn sub_crescent(&self, x1: f64, x2: f64) -> Result<Crescent> {
        let (lo, hi) = (x1.min(x2), x1.max(x2));
        if !(lo > 0.0 && hi < self.theta) {
            return Err(Error::InvalidInput(format!(
                "leaves {x1}, {x2} are not in (0, {})",
                self.theta
            )));
        }
        Crescent::new(hi - lo)
    }
}

/// Number of full turns in `theta` when it is a multiple of 2π.
fn integral_turns(theta: f64) -> Option<u32> {
    let n = (theta / TAU).round();
    ((theta / TAU - n).abs() <= INTEGRAL_TOL * n.max(1.0) && n >= 1.0).then_some(n as u32)
}

/// Quotient of a crescent by the deck map `T_a(x, y) = (x, a·y)`, with holonomy
/// `z ↦ a·z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlatCylinder {
    crescent: Crescent,
    multiplier: f64,
}

impl FlatCylinder {
    pub fn new(theta: f64, multiplier: f64) -> Result<Self> {
        if !(multiplier > 1.0 && multiplier.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "multiplier must exceed 1, got {multiplier}"
            )));
        }
        Ok(FlatCylinder {
            crescent: Crescent::new(theta)?,
            multiplier,
        })
    }

    /// The integral cylinder of the given degree.
    pub fn integral(degree: u32, multiplier: f64) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidInput("degree must be positive".into()));
        }
        Self::new(TAU * degree as f64, multiplier)
    }

    pub fn crescent(&self) -> &Crescent {
        &self.crescent
    }

    pub fn theta(&self) -> f64 {
        self.crescent.theta
    }

    pub fn multiplier(&self) -> f64 {
        self.multiplier
    }

    pub fn is_integral(&self) -> bool {
        integral_turns(self.theta()).is_some()
    }

    pub fn degree(&self) -> Option<u32> {
        integral_turns(self.theta())
    }

    pub fn holonomy(&self) -> MobiusMap {
        MobiusMap::scaling(Complex64::new(self.multiplier, 0.0)).expect("positive multiplier")
    }

    /// `T_a^k(x, y)`.
    pub fn deck(&self, k: i32, (x, y): (f64, f64)) -> (f64, f64) {
        (x, y * self.multiplier.powi(k))
    }

    /// Preimages of `z` in the universal cover; see [`Crescent::fiber`].
    pub fn fiber(&self, z: Complex64) -> Result<Vec<(f64, f64)>> {
        self.crescent.fiber(z)
    }
}

/// Grafted developing data of a round annulus.
///
/// The annulus cover has coordinates `(s, t)`, with the deck map
/// `s ↦ s + ln a` and `t` across the annulus. In the frame where the holonomy is
/// `z ↦ a·z`, the original developing map is `e^{s + i(π/2 + φt)}` for
/// `t ∈ (−1, 1)`, whose core `t = 0` develops onto the axis. Grafting cuts along
/// the core and inserts a crescent of angle `2πn`, which adds `n` turns to every
/// path crossing the annulus.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraftedAnnulus {
    pub degree: u32,
    /// `a > 1` with the holonomy conjugate to `z ↦ a·z`.
    pub multiplier: f64,
    /// Angular half-width φ of the developed annulus about the axis.
    pub half_width: f64,
    pub holonomy: MobiusMap,
    /// Holonomy recovered from the grafted developing map by three-point fitting.
    pub grafted_holonomy: MobiusMap,
    pub trace_before: f64,
    pub trace_after: f64,
    /// Developed samples before grafting, row by row in `t`.
    pub before: Vec<DevelopedCurve>,
    /// Developed samples after grafting: rows with `t < 0`, the inserted cylinder,
    /// then rows with `t ≥ 0`.
    pub after: Vec<DevelopedCurve>,
    /// Developed core loop over one period.
    pub core: DevelopedCurve,
    /// Argument change of the developed transversal `s = 0`, measured about the
    /// repelling fixed point.
    pub turning_before: f64,
    pub turning_after: f64,
    /// Full turns of the developed transversal about the fixed point.
    pub winding_before: i64,
    pub winding_after: i64,
}

/// Angular half-width of the round annulus used by [`graft_annulus`].
pub const ANNULUS_HALF_WIDTH: f64 = 0.5;

/// Grafts the round annulus with hyperbolic holonomy `holonomy` along its core by
/// an integral flat cylinder of degree `n`, sampling `samples` points per row.
pub fn graft_annulus(holonomy: &MobiusMap, n: u32, samples: usize) -> Result<GraftedAnnulus> {
    let class = holonomy.classify();
    if class != Classification::Hyperbolic {
        return Err(Error::NotHyperbolic(class));
    }
    if samples < 2 {
        return Err(Error::InvalidInput("at least two samples per row are needed".into()));
    }
    let mut frame = holonomy.axis()?.frame();
    // samples have modulus in [1, a²] in the frame; rescale so its pole is inside 1/e
    if let BoundaryPoint::Finite(pole) = frame.inverse().apply_boundary(BoundaryPoint::Infinity) {
        if pole.norm() > 0.0 {
            frame = frame.compose(&MobiusMap::scaling(Complex64::new(
                pole.norm() * std::f64::consts::E,
                0.0,
            ))?);
        }
    }
    let to_frame = frame.inverse();
    let multiplier = match to_frame
        .compose(holonomy)
        .compose(&frame)
        .apply(Complex64::new(1.0, 0.0))
    {
        BoundaryPoint::Finite(z) => z.re,
        BoundaryPoint::Infinity => return Err(Error::Degenerate("holonomy frame".into())),
    };
    if !(multiplier > 1.0) {
        return Err(Error::Degenerate(format!("multiplier {multiplier} is not above 1")));
    }
    let period = multiplier.ln();
    let phi = ANNULUS_HALF_WIDTH;
    let developed = |s: f64, angle: f64| -> Result<Complex64> {
        frame
            .apply(Complex64::from_polar(s.exp(), angle))
            .as_finite()
            .ok_or_else(|| Error::Degenerate("developed sample at infinity".into()))
    };
    let row = |label: String, angle: f64| -> Result<DevelopedCurve> {
        let points = (0..samples)
            .map(|k| developed(period * k as f64 / (samples - 1) as f64, angle))
            .collect::<Result<Vec<_>>>()?;
        Ok(DevelopedCurve { label, points })
    };
    let rows = samples.max(3);
    let ts: Vec<f64> = (0..rows).map(|k| -1.0 + 2.0 * (k as f64 + 0.5) / rows as f64).collect();
    let turns = TAU * n as f64;
    let angle_after = |t: f64| {
        if t < 0.0 {
            FRAC_PI_2 + phi * t
        } else {
            FRAC_PI_2 + turns + phi * t
        }
    };

    let before = ts
        .iter()
        .map(|&t| row(format!("t={t:.6}"), FRAC_PI_2 + phi * t))
        .collect::<Result<Vec<_>>>()?;
    let inserted = rows * n as usize;
    let mut after = Vec::with_capacity(rows + inserted);
    for &t in ts.iter().filter(|&&t| t < 0.0) {
        after.push(row(format!("t={t:.6}"), angle_after(t))?);
    }
    for k in 0..inserted {
        let u = (k as f64 + 0.5) / inserted as f64;
        after.push(row(format!("cylinder u={u:.6}"), FRAC_PI_2 + turns * u)?);
    }
    for &t in ts.iter().filter(|&&t| t >= 0.0) {
        after.push(row(format!("t={t:.6}"), angle_after(t))?);
    }

    // the deck map s ↦ s + ln a read off three developed points of the grafted cover
    let probe = [(0.0, 0.1), (0.3, 0.35), (0.7, 0.6)];
    let src: Vec<Complex64> = probe
        .iter()
        .map(|&(s, u)| developed(s, FRAC_PI_2 + turns * u + phi * (u - 0.5)))
        .collect::<Result<_>>()?;
    let dst: Vec<Complex64> = probe
        .iter()
        .map(|&(s, u)| developed(s + period, FRAC_PI_2 + turns * u + phi * (u - 0.5)))
        .collect::<Result<_>>()?;
    let grafted_holonomy = through_three_points([src[0], src[1], src[2]], [dst[0], dst[1], dst[2]])?;

    let transversal = |angle: &dyn Fn(f64) -> f64, steps: usize| -> Result<f64> {
        let pts = (0..=steps)
            .map(|k| angle(-1.0 + 2.0 * k as f64 / steps as f64))
            .map(|a| developed(0.0, a))
            .collect::<Result<Vec<_>>>()?;
        Ok(turning_about(&pts, &to_frame))
    };
    let steps = 64 * (n as usize + 1);
    let turning_before = transversal(&|t| FRAC_PI_2 + phi * t, steps)?;
    // the grafted transversal runs through the cylinder between t = 0⁻ and t = 0⁺
    let turning_after = transversal(
        &|v| {
            let t = v * 1.5;
            if t <= -0.5 {
                FRAC_PI_2 + phi * (t + 0.5)
            } else if t < 0.5 {
                FRAC_PI_2 + turns * (t + 0.5)
            } else {
                FRAC_PI_2 + turns + phi * (t - 0.5)
            }
        },
        steps,
    )?;
    let core = row("core".into(), FRAC_PI_2)?;
    Ok(GraftedAnnulus {
        degree: n,
        multiplier,
        half_width: phi,
        holonomy: *holonomy,
        trace_before: holonomy.trace().norm(),
        trace_after: grafted_holonomy.trace().norm(),
        grafted_holonomy,
        before,
        after,
        core,
        winding_before: (turning_before / TAU).floor() as i64,
        winding_after: (turning_after / TAU).floor() as i64,
        turning_before,
        turning_after,
    })
}

/// Total argument change along a polyline after mapping it by `normalize`, which
/// sends the fixed point to 0; consecutive steps must turn by less than π.
fn turning_about(points: &[Complex64], normalize: &MobiusMap) -> f64 {
    let moved: Vec<Complex64> = points.iter().filter_map(|&z| normalize.apply(z).as_finite()).collect();
    moved.windows(2).map(|w| (w[1] / w[0]).arg()).sum()
}

/// The Möbius map sending three distinct points to three distinct points.
pub fn through_three_points(from: [Complex64; 3], to: [Complex64; 3]) -> Result<MobiusMap> {
    // cross-ratio map z ↦ (z − z1)(z2 − z3) / ((z − z3)(z2 − z1)) sends z1, z2, z3 to 0, 1, ∞
    let normalizer = |[z1, z2, z3]: [Complex64; 3]| {
        MobiusMap::new(z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1))
            .map_err(|_| Error::Degenerate("three points are not distinct".into()))
    };
    let f = normalizer(from)?;
    let g = normalizer(to)?;
    Ok(g.inverse().compose(&f))
}

/// Convenience: the hyperbolic holonomy `z ↦ a·z` conjugated to have the given axis.
pub fn hyperbolic_with_axis(axis: &GeodesicH3, multiplier: f64) -> Result<MobiusMap> {
    if !(multiplier > 1.0) {
        return Err(Error::InvalidInput(format!(
            "multiplier must exceed 1, got {multiplier}"
        )));
    }
    let frame = axis.frame();
    Ok(frame
        .compose(&MobiusMap::scaling(Complex64::new(multiplier, 0.0))?)
        .compose(&frame.inverse()))
}
