use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::Serialize;

use super::BendConfig;
use crate::error::{Error, Result};
use crate::hyperbolic::{angle_at, dist_h3, GeodesicSegment, MobiusMap, PointH3};

/// Below this distance from the start the ODE is singular and exact values are used.
const SINGULAR_D: f64 = 1e-6;
/// Local error target per ODE step.
const STEP_TOL: f64 = 1e-12;

/// One crossing of a bent path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceCrossing {
    pub t: f64,
    pub leaf: usize,
    pub weight: f64,
    /// Angle between the segment and the leaf in H², in `(0, π/2]`.
    pub crossing_angle: f64,
    /// θ at `t` (left limit).
    pub theta: f64,
    /// θ just after `t`.
    pub theta_plus: f64,
}

impl TraceCrossing {
    pub fn jump(&self) -> f64 {
        self.theta_plus - self.theta
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceSample {
    pub t: f64,
    /// Index of the crossing-free piece `(t_k, t_{k+1}]` containing `t` (0 before the first crossing).
    pub piece: usize,
    pub theta_exact: f64,
    pub theta_ode: Option<f64>,
    pub d: f64,
    pub d_ode: Option<f64>,
    /// Set on the sample at a crossing; holds the crossing's index.
    pub crossing: Option<usize>,
}

/// A bent geodesic segment: vertices, crossings and sampled angle function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BendTrace {
    pub segment: GeodesicSegment,
    pub length: f64,
    pub crossings: Vec<TraceCrossing>,
    /// Images of the start, of each crossing point and of the end.
    pub vertices: Vec<PointH3>,
    pub samples: Vec<TraceSample>,
    pub ode_step: Option<f64>,
    /// Largest `|θ_ode − θ_exact|` over the samples.
    pub max_deviation: Option<f64>,
}

/// Exact bent path along a segment: `γ(t) = E_k(s(t))` on piece `k`.
struct Path {
    maps: Vec<MobiusMap>,
    /// Piece boundaries `0 = t_0 < t_1 < … < t_n = P`.
    knots: Vec<f64>,
    vertices: Vec<PointH3>,
}

impl Path {
    fn new(cfg: &BendConfig, s: &GeodesicSegment, cuts: &[f64]) -> Path {
        let inv = s.frame().inverse();
        let len = s.length();
        let mut knots = vec![0.0];
        knots.extend_from_slice(cuts);
        knots.push(len);
        let maps: Vec<MobiusMap> = knots
            .windows(2)
            .map(|w| {
                let mid = inv
                    .apply_h2(&crate::hyperbolic::PointH2::new(0.0, ((w[0] + w[1]) / 2.0).exp()).expect("positive"))
                    .expect("real map");
                cfg.region_map(cfg.region_of(&mid)).compose(&inv)
            })
            .collect();
        let mut path = Path {
            maps,
            knots,
            vertices: Vec::new(),
        };
        let n = path.knots.len();
        path.vertices = (0..n).map(|k| path.at(k.min(n - 2), path.knots[k])).collect();
        path
    }

    fn at(&self, piece: usize, t: f64) -> PointH3 {
        self.maps[piece].apply_h3(&PointH3::new_unchecked(num_complex::Complex64::new(0.0, 0.0), t.exp()))
    }

    fn pieces(&self) -> usize {
        self.maps.len()
    }

    /// Exact `(θ, d)` at `t` in piece `k`, with `t ∈ (t_k, t_{k+1}]`.
    fn exact(&self, k: usize, t: f64) -> (f64, f64) {
        let start = &self.vertices[0];
        let p = self.at(k, t);
        let d = dist_h3(start, &p);
        if k == 0 || d == 0.0 {
            return (0.0, d);
        }
        let back = t - self.knots[k];
        let ahead = self.knots[k + 1] - t;
        let theta = if back >= ahead {
            angle_at(&p, start, &self.vertices[k]).unwrap_or(0.0)
        } else {
            PI - angle_at(&p, start, &self.vertices[k + 1]).unwrap_or(PI)
        };
        (theta, d)
    }

    /// θ just after knot `k` (k ≥ 1).
    fn theta_plus(&self, k: usize) -> f64 {
        let v = &self.vertices[k];
        PI - angle_at(v, &self.vertices[0], &self.vertices[k + 1]).unwrap_or(PI)
    }
}

fn rhs(y: [f64; 2]) -> [f64; 2] {
    [-y[0].sin() / y[1].tanh(), y[0].cos()]
}

fn rk4(y: [f64; 2], h: f64) -> [f64; 2] {
    let add = |a: [f64; 2], b: [f64; 2], k: f64| [a[0] + k * b[0], a[1] + k * b[1]];
    let k1 = rhs(y);
    let k2 = rhs(add(y, k1, h / 2.0));
    let k3 = rhs(add(y, k2, h / 2.0));
    let k4 = rhs(add(y, k3, h));
    [
        y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    ]
}

fn build(cfg: &BendConfig, s: &GeodesicSegment) -> (Path, Vec<TraceCrossing>) {
    let report = cfg.lamination().crossings(s);
    let cuts: Vec<f64> = report.crossings.iter().map(|c| c.t).collect();
    let path = Path::new(cfg, s, &cuts);
    let crossings = report
        .crossings
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let k = i + 1;
            let theta = if k == 1 {
                0.0
            } else {
                angle_at(&path.vertices[k], &path.vertices[0], &path.vertices[k - 1]).unwrap_or(0.0)
            };
            TraceCrossing {
                t: c.t,
                leaf: c.leaf,
                weight: cfg.lamination().leaf(c.leaf).weight,
                crossing_angle: c.angle,
                theta,
                theta_plus: path.theta_plus(k),
            }
        })
        .collect();
    (path, crossings)
}

fn finish(
    s: &GeodesicSegment,
    path: Path,
    crossings: Vec<TraceCrossing>,
    samples: Vec<TraceSample>,
    ode_step: Option<f64>,
) -> BendTrace {
    let max_deviation = ode_step.map(|_| {
        samples
            .iter()
            .filter_map(|x| x.theta_ode.map(|o| (o - x.theta_exact).abs()))
            .fold(0.0, f64::max)
    });
    BendTrace {
        segment: *s,
        length: s.length(),
        crossings,
        vertices: path.vertices,
        samples,
        ode_step,
        max_deviation,
    }
}

/// Trace with exact values only, sampled with spacing at most `sample_step` on each piece.
pub fn exact_trace(cfg: &BendConfig, s: &GeodesicSegment, sample_step: f64) -> Result<BendTrace> {
    if !(sample_step > 0.0) {
        return Err(Error::InvalidInput("sample step must be positive".into()));
    }
    let (path, crossings) = build(cfg, s);
    let mut samples = vec![TraceSample {
        t: 0.0,
        piece: 0,
        theta_exact: 0.0,
        theta_ode: None,
        d: 0.0,
        d_ode: None,
        crossing: None,
    }];
    for k in 0..path.pieces() {
        let (a, b) = (path.knots[k], path.knots[k + 1]);
        let n = ((b - a) / sample_step).ceil().max(1.0) as usize;
        for j in 1..=n {
            let t = if j == n { b } else { a + (b - a) * j as f64 / n as f64 };
            let (theta, d) = path.exact(k, t);
            samples.push(TraceSample {
                t,
                piece: k,
                theta_exact: theta,
                theta_ode: None,
                d,
                d_ode: None,
                crossing: (j == n && k + 1 < path.pieces()).then_some(k),
            });
        }
    }
    Ok(finish(s, path, crossings, samples, None))
}

/// Trace with exact values and an adaptive RK4 solution of
/// `θ' = −sin θ / tanh d`, `d' = cos θ`, restarted from exact values after each crossing.
pub fn bend_trace(cfg: &BendConfig, s: &GeodesicSegment, ode_step: f64) -> Result<BendTrace> {
    if !(ode_step > 0.0) {
        return Err(Error::InvalidInput("ODE step must be positive".into()));
    }
    let (path, crossings) = build(cfg, s);
    let mut samples = vec![TraceSample {
        t: 0.0,
        piece: 0,
        theta_exact: 0.0,
        theta_ode: Some(0.0),
        d: 0.0,
        d_ode: Some(0.0),
        crossing: None,
    }];
    for k in 0..path.pieces() {
        let (a, b) = (path.knots[k], path.knots[k + 1]);
        let mut y = if k == 0 {
            [0.0, 0.0]
        } else {
            [
                crossings[k - 1].theta_plus,
                dist_h3(&path.vertices[0], &path.vertices[k]),
            ]
        };
        let mut t = a;
        let mut h = ode_step;
        while t < b {
            let remaining = b - t;
            let last = remaining <= h;
            let step = if last { remaining } else { h };
            let next_t = if last { b } else { t + step };
            if y[1] < SINGULAR_D {
                let (theta, d) = path.exact(k, next_t);
                y = [theta, d];
                t = next_t;
            } else {
                let full = rk4(y, step);
                let half = rk4(rk4(y, step / 2.0), step / 2.0);
                let err = (full[0] - half[0]).abs().max((full[1] - half[1]).abs());
                let factor = if err > 0.0 {
                    (0.9 * (STEP_TOL / err).powf(0.2)).clamp(0.2, 2.0)
                } else {
                    2.0
                };
                if err > STEP_TOL && step > 1e-12 {
                    h = step * factor;
                    continue;
                }
                y = half;
                t = next_t;
                h = (step * factor).min(ode_step);
                if last {
                    h = ode_step;
                }
            }
            let (theta, d) = path.exact(k, t);
            samples.push(TraceSample {
                t,
                piece: k,
                theta_exact: theta,
                theta_ode: Some(y[0]),
                d,
                d_ode: Some(y[1]),
                crossing: (t == b && k + 1 < path.pieces()).then_some(k),
            });
        }
    }
    Ok(finish(s, path, crossings, samples, Some(ode_step)))
}

impl BendTrace {
    /// Every `|θ⁺ − θ|` at a crossing is at most the crossed weight plus `tol`.
    pub fn jumps_within_weights(&self, tol: f64) -> bool {
        self.crossings.iter().all(|c| c.jump().abs() <= c.weight + tol)
    }

    /// θ does not increase (beyond `tol`) between consecutive samples of one piece.
    pub fn nonincreasing_between_crossings(&self, tol: f64) -> bool {
        self.samples
            .windows(2)
            .filter(|w| w[0].piece == w[1].piece && w[0].crossing.is_none())
            .all(|w| w[1].theta_exact <= w[0].theta_exact + tol)
    }

    pub fn max_theta(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.theta_exact)
            .chain(self.crossings.iter().map(|c| c.theta_plus))
            .fold(0.0, f64::max)
    }

    /// Columns `t, theta_exact, theta_ode, d, crossing_flag, jump`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,theta_exact,theta_ode,d,crossing_flag,jump\n");
        for s in &self.samples {
            let ode = s.theta_ode.map(|v| v.to_string()).unwrap_or_default();
            let (flag, jump) = match s.crossing {
                Some(i) => (1, self.crossings[i].jump()),
                None => (0, 0.0),
            };
            writeln!(out, "{},{},{},{},{},{}", s.t, s.theta_exact, ode, s.d, flag, jump).expect("string write");
        }
        out
    }

    /// Plot of θ against t with jump markers and optional horizontal reference lines.
    pub fn to_svg(&self, references: &[(&str, f64)]) -> String {
        let (w, h, pad) = (800.0, 400.0, 40.0);
        let tmax = self.length.max(1e-9);
        let x = |t: f64| pad + (w - 2.0 * pad) * t / tmax;
        let y = |th: f64| h - pad - (h - 2.0 * pad) * th / PI;
        let mut out = String::new();
        writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
        )
        .expect("string write");
        writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#).expect("string write");
        writeln!(
            out,
            r#"<line x1="{pad}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
            h - pad,
            w - pad,
            h - pad
        )
        .expect("string write");
        writeln!(
            out,
            r#"<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{}" stroke="black"/>"#,
            h - pad
        )
        .expect("string write");
        for (label, value) in references {
            writeln!(
                out,
                r##"<line x1="{pad}" y1="{0:.4}" x2="{1}" y2="{0:.4}" stroke="#888" stroke-dasharray="4 3"/><text x="{2}" y="{0:.4}" font-size="11">{label}</text>"##,
                y(*value),
                w - pad,
                w - pad + 4.0
            )
            .expect("string write");
        }
        // one polyline per piece so jumps show as gaps
        let mut piece = usize::MAX;
        let mut points = String::new();
        let flush = |points: &mut String, out: &mut String| {
            if !points.is_empty() {
                writeln!(
                    out,
                    r##"<polyline fill="none" stroke="#1f5fbf" points="{}"/>"##,
                    points.trim_end()
                )
                .expect("string write");
                points.clear();
            }
        };
        for s in &self.samples {
            if s.piece != piece {
                flush(&mut points, &mut out);
                piece = s.piece;
                if piece > 0 {
                    let c = &self.crossings[piece - 1];
                    write!(points, "{:.4},{:.4} ", x(c.t), y(c.theta_plus)).expect("string write");
                }
            }
            write!(points, "{:.4},{:.4} ", x(s.t), y(s.theta_exact)).expect("string write");
        }
        flush(&mut points, &mut out);
        for c in &self.crossings {
            writeln!(
                out,
                r##"<line x1="{0:.4}" y1="{1:.4}" x2="{0:.4}" y2="{2:.4}" stroke="#c03030"/><circle cx="{0:.4}" cy="{2:.4}" r="2.5" fill="#c03030"/>"##,
                x(c.t),
                y(c.theta),
                y(c.theta_plus)
            )
            .expect("string write");
        }
        out.push_str("</svg>\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bending::BendDirection;
    use crate::hyperbolic::{GeodesicH2, PointH2};
    use crate::lamination::{FiniteLamination, Leaf};
    use approx::assert_abs_diff_eq;

    fn pt(x: f64, y: f64) -> PointH2 {
        PointH2::new(x, y).unwrap()
    }

    #[test]
    fn empty_lamination_trace_is_flat() {
        let cfg = BendConfig::standard(FiniteLamination::empty());
        let s = GeodesicSegment::new(pt(0.0, 1.0), pt(2.0, 1.0)).unwrap();
        let tr = bend_trace(&cfg, &s, 1e-3).unwrap();
        assert!(tr.crossings.is_empty());
        for x in &tr.samples {
            assert_eq!(x.theta_exact, 0.0);
            assert_abs_diff_eq!(x.d, x.t, epsilon = 1e-12);
        }
        assert!(tr.max_deviation.unwrap() < 1e-12);
    }

    #[test]
    fn orthogonal_crossing_jumps_by_the_weight() {
        let w = 0.6;
        let lam = FiniteLamination::new(vec![Leaf::new(GeodesicH2::from_reals(-1.0, 1.0).unwrap(), w)]).unwrap();
        let cfg = BendConfig::at_point(lam, &pt(0.0, 0.5), BendDirection::Positive).unwrap();
        let s = GeodesicSegment::new(pt(0.0, 0.5), pt(0.0, 2.0)).unwrap();
        let tr = bend_trace(&cfg, &s, 1e-4).unwrap();
        assert_eq!(tr.crossings.len(), 1);
        let c = tr.crossings[0];
        assert_abs_diff_eq!(c.t, 2f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(c.jump(), w, epsilon = 1e-9);
        assert!(tr.max_deviation.unwrap() < 1e-6, "{:?}", tr.max_deviation);
        assert!(tr.nonincreasing_between_crossings(1e-12));
    }

    #[test]
    fn oblique_crossing_jumps_less_than_the_weight() {
        let w = 0.9;
        let lam = FiniteLamination::new(vec![Leaf::new(GeodesicH2::from_reals(-1.0, 1.0).unwrap(), w)]).unwrap();
        let cfg = BendConfig::standard(lam);
        let s = GeodesicSegment::new(pt(0.3, 0.4), pt(-0.8, 1.9)).unwrap();
        let tr = bend_trace(&cfg, &s, 1e-4).unwrap();
        let c = tr.crossings[0];
        assert!(c.crossing_angle < std::f64::consts::FRAC_PI_2 - 0.1);
        assert!(c.jump() > 0.0 && c.jump() < w - 1e-6, "{}", c.jump());
        assert!(tr.max_deviation.unwrap() < 1e-6);
    }

    #[test]
    fn csv_has_the_declared_columns() {
        let lam = FiniteLamination::from_pairs(&[(-1.0, 1.0, 0.3), (-2.0, 2.0, 0.2)]).unwrap();
        let cfg = BendConfig::standard(lam);
        let s = GeodesicSegment::new(pt(0.1, 0.5), pt(0.0, 2.5)).unwrap();
        let tr = exact_trace(&cfg, &s, 0.01).unwrap();
        let csv = tr.to_csv();
        assert!(csv.starts_with("t,theta_exact,theta_ode,d,crossing_flag,jump\n"));
        assert_eq!(csv.lines().filter(|l| l.split(',').nth(4) == Some("1")).count(), 2);
        let svg = tr.to_svg(&[("C", 2.5)]);
        assert!(svg.contains("<polyline") && svg.ends_with("</svg>\n"));
    }
}
