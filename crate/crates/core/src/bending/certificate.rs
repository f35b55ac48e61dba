use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lamination::FiniteLamination;

/// Default angle threshold when the caller does not pick one.
pub const DEFAULT_THETA0: f64 = std::f64::consts::FRAC_PI_4;

/// Half of the tightest of the three constraints on δ, so all hold strictly.
pub fn select_delta(d: f64, theta0: f64) -> Result<f64> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::Constraint(format!("D must be positive, got {d}")));
    }
    if !(theta0 > 0.0 && theta0 < FRAC_PI_2) {
        return Err(Error::Constraint(format!("theta0 must lie in (0, pi/2), got {theta0}")));
    }
    let s = theta0.sin();
    Ok(0.5 * (FRAC_PI_2 - theta0).min(s).min(d * s / (d + 1.0)))
}

/// Checks the three constraints on δ, naming the first violated one.
pub fn check_delta(d: f64, theta0: f64, delta: f64) -> Result<()> {
    if !(delta > 0.0) {
        return Err(Error::Constraint(format!("delta > 0 violated (delta = {delta})")));
    }
    if !(theta0 + delta < FRAC_PI_2) {
        return Err(Error::Constraint(format!(
            "theta0 + delta < pi/2 violated ({} >= {})",
            theta0 + delta,
            FRAC_PI_2
        )));
    }
    if !(theta0.sin() > delta) {
        return Err(Error::Constraint(format!(
            "sin(theta0) > delta violated ({} <= {delta})",
            theta0.sin()
        )));
    }
    let g = d * (delta - theta0.sin()) + delta;
    if !(g < 0.0) {
        return Err(Error::Constraint(format!(
            "D(delta - sin(theta0)) + delta < 0 violated (value {g})"
        )));
    }
    Ok(())
}

/// Bounds on the measure of the set where θ exceeds θ₀ + δ and on θ itself, per
/// crossing pattern of the boundary sublamination.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseBounds {
    /// No boundary leaf crossed.
    pub b1: f64,
    /// Boundary leaf crossed first only.
    pub b2: f64,
    /// Boundary leaf crossed last only.
    pub b3: f64,
    /// Boundary leaves crossed first and last.
    pub b4: f64,
    pub b: f64,
    /// Per-case bounds on θ, same order as `b1..b4`.
    pub c_cases: [f64; 4],
    pub c: f64,
    pub m: f64,
}

pub fn case_bounds(d: f64, theta0: f64, delta: f64) -> Result<CaseBounds> {
    check_delta(d, theta0, delta)?;
    let a = theta0 + delta;
    let gap = theta0.sin() - delta;
    let b2 = (FRAC_PI_2 - theta0) / gap;
    let b3 = FRAC_PI_2 / (a + FRAC_PI_2).sin().min(a.sin());
    let m = a.max(FRAC_PI_2 + d * (delta - theta0.sin()) + delta);
    let tail = (m + FRAC_PI_2 - a) / (m + FRAC_PI_2).sin().min(a.sin());
    let b4 = b2 + tail;
    let c_cases = [a, PI - theta0, a + FRAC_PI_2, (PI - theta0).max(m + FRAC_PI_2)];
    let c = c_cases.iter().copied().fold(0.0, f64::max);
    let b1 = 0.0;
    Ok(CaseBounds {
        b1,
        b2,
        b3,
        b4,
        b: b1.max(b2).max(b3).max(b4),
        c_cases,
        c,
        m,
    })
}

/// `S = 1/cos(θ₀ + δ)` and `T = C(1 + cos(θ₀ + δ))`.
pub fn qi_constants(theta0: f64, delta: f64, c: f64) -> (f64, f64) {
    let k = (theta0 + delta).cos();
    (1.0 / k, c * (1.0 + k))
}

/// Outcome of the four hypotheses (and the small-norm branch with no boundary leaves).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub boundary: Vec<usize>,
    /// Boundary leaves are outermost and carry their full weight.
    pub outermost: bool,
    pub complement_norm: f64,
    pub complement_norm_ok: bool,
    pub boundary_distance: f64,
    pub distance_ok: bool,
    pub max_boundary_weight: f64,
    pub weight_ok: bool,
    /// True when there are no boundary leaves (only the norm condition matters).
    pub small_norm_branch: bool,
    pub passed: bool,
}

impl HypothesisReport {
    /// Name of the first failing hypothesis.
    pub fn failure(&self) -> Option<&'static str> {
        if !self.outermost {
            Some("(i) boundary leaves must be outermost")
        } else if !self.complement_norm_ok {
            Some("(ii) norm of the remaining leaves must be below delta")
        } else if !self.distance_ok {
            Some("(iii) boundary leaves must be more than D apart")
        } else if !self.weight_ok {
            Some("(iv) boundary weights must be below pi/2")
        } else {
            None
        }
    }
}

/// Indices in `l` of the leaves of `sub`; errors if some leaf of `sub` is absent.
pub fn sublamination_indices(l: &FiniteLamination, sub: &FiniteLamination) -> Result<Vec<usize>> {
    sub.leaves()
        .iter()
        .map(|leaf| {
            l.position(&leaf.geodesic)
                .ok_or_else(|| Error::InvalidInput("boundary leaf is not a leaf of the lamination".into()))
        })
        .collect()
}

pub fn verify_hypotheses(
    l: &FiniteLamination,
    boundary: &FiniteLamination,
    d: f64,
    delta: f64,
) -> Result<HypothesisReport> {
    let idx = sublamination_indices(l, boundary)?;
    let outer = l.outermost_indices();
    let outermost = idx
        .iter()
        .zip(boundary.leaves())
        .all(|(&i, b)| outer.contains(&i) && l.leaf(i).weight == b.weight);
    let complement_norm = l.without(&idx).norm();
    let boundary_distance = l.subset(&idx).min_leaf_distance().0;
    let max_boundary_weight = boundary.max_weight();
    let complement_norm_ok = complement_norm < delta;
    let distance_ok = boundary_distance > d;
    let weight_ok = max_boundary_weight < FRAC_PI_2;
    Ok(HypothesisReport {
        small_norm_branch: idx.is_empty(),
        passed: outermost && complement_norm_ok && distance_ok && weight_ok,
        boundary: idx,
        outermost,
        complement_norm,
        complement_norm_ok,
        boundary_distance,
        distance_ok,
        max_boundary_weight,
        weight_ok,
    })
}

/// All constants of the quasi-isometry estimate for one lamination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(rename = "D")]
    pub d: f64,
    pub theta0: f64,
    pub delta: f64,
    pub bounds: CaseBounds,
    #[serde(rename = "S")]
    pub s: f64,
    /// `C(1 + cos(θ₀ + δ))`.
    #[serde(rename = "T")]
    pub t: f64,
    /// `B(1 + cos(θ₀ + δ))`, the additive constant obtained from the measure bound B.
    #[serde(rename = "T_B")]
    pub t_measure: f64,
    pub hypotheses: HypothesisReport,
    pub valid: bool,
    pub assumptions: Vec<String>,
}

impl Certificate {
    /// Builds the constants for `(D, θ₀)` and checks the hypotheses on `(l, boundary)`.
    pub fn build(l: &FiniteLamination, boundary: &FiniteLamination, d: f64, theta0: f64) -> Result<Self> {
        let delta = select_delta(d, theta0)?;
        Self::with_delta(l, boundary, d, theta0, delta)
    }

    pub fn with_delta(
        l: &FiniteLamination,
        boundary: &FiniteLamination,
        d: f64,
        theta0: f64,
        delta: f64,
    ) -> Result<Self> {
        let bounds = case_bounds(d, theta0, delta)?;
        let (s, t) = qi_constants(theta0, delta, bounds.c);
        let t_measure = bounds.b * (1.0 + (theta0 + delta).cos());
        let hypotheses = verify_hypotheses(l, boundary, d, delta)?;
        Ok(Certificate {
            d,
            theta0,
            delta,
            bounds,
            s,
            t,
            t_measure,
            valid: hypotheses.passed && bounds.c < PI && s >= 1.0 && t >= 0.0,
            hypotheses,
            assumptions: vec![
                "C is the maximum of the per-case bounds on theta".into(),
                "T uses C; T_B uses the measure bound B".into(),
                "norms are computed on the given finite window".into(),
            ],
        })
    }

    pub fn theta_threshold(&self) -> f64 {
        self.theta0 + self.delta
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}
