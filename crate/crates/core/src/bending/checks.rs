use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{bend_point, offset_from, BendConfig, BendTrace, Certificate};
use crate::hyperbolic::{dist_h2, dist_h3, PointH2, Side};
use crate::lamination::{random::point_in_disk, Chord};

/// Slack for rounding in distance comparisons.
const DIST_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QiReport {
    pub pairs: usize,
    pub radius: f64,
    pub seed: u64,
    pub upper_violations: usize,
    pub lower_violations: usize,
    /// Smallest `d − d_β` (negative means the upper bound failed).
    pub worst_upper_margin: f64,
    /// Smallest `d_β − (d/S − T)`.
    pub worst_lower_margin: f64,
    /// Smallest `d_β − (d/S − T_B)`.
    pub worst_lower_margin_measure: f64,
}

impl QiReport {
    pub fn violations(&self) -> usize {
        self.upper_violations + self.lower_violations
    }
}

/// Samples pairs in the disk of radius `radius` about `i` and tests
/// `d/S − T ≤ dist(βx, βy) ≤ d`.
pub fn check_qi(cfg: &BendConfig, cert: &Certificate, samples: usize, radius: f64, seed: u64) -> QiReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centre = PointH2::new(0.0, 1.0).expect("valid point");
    let mut report = QiReport {
        pairs: samples,
        radius,
        seed,
        upper_violations: 0,
        lower_violations: 0,
        worst_upper_margin: f64::INFINITY,
        worst_lower_margin: f64::INFINITY,
        worst_lower_margin_measure: f64::INFINITY,
    };
    for _ in 0..samples {
        let x = point_in_disk(&mut rng, &centre, radius);
        let y = point_in_disk(&mut rng, &centre, radius);
        let d = dist_h2(&x, &y);
        let db = dist_h3(&bend_point(cfg, &x), &bend_point(cfg, &y));
        let upper = d - db;
        let lower = db - (d / cert.s - cert.t);
        if upper < -DIST_TOL {
            report.upper_violations += 1;
        }
        if lower < -DIST_TOL {
            report.lower_violations += 1;
        }
        report.worst_upper_margin = report.worst_upper_margin.min(upper);
        report.worst_lower_margin = report.worst_lower_margin.min(lower);
        report.worst_lower_margin_measure = report
            .worst_lower_margin_measure
            .min(db - (d / cert.s - cert.t_measure));
    }
    report
}

/// Bounds checked on one trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceBoundRecord {
    /// 1: no boundary leaf crossed, 2: first crossing only, 3: last only, 4: first and
    /// last, 0: some other pattern (outside the hypotheses).
    pub case: u8,
    pub boundary_crossings: usize,
    pub max_theta: f64,
    pub theta_ok: bool,
    /// Grid estimate (upper end) of the measure of `{θ > θ₀ + δ}`.
    pub measure: f64,
    /// Width of the grid bracket around the true measure.
    pub measure_error: f64,
    pub measure_ok: bool,
    /// Both bounds also hold with the constants of the detected case.
    pub case_ok: bool,
    /// Failures of the pointwise decay estimates between boundary crossings.
    pub decay_violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleBoundReport {
    pub records: Vec<TraceBoundRecord>,
    /// Traces with `max θ ≥ C` or measure `≥ B`.
    pub violations: usize,
    pub case_violations: usize,
    pub decay_violations: usize,
}

impl AngleBoundReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.decay_violations == 0
    }
}

pub fn check_angle_bounds(cert: &Certificate, traces: &[BendTrace]) -> AngleBoundReport {
    let records: Vec<TraceBoundRecord> = traces.iter().map(|t| trace_bounds(cert, t)).collect();
    AngleBoundReport {
        violations: records.iter().filter(|r| !r.theta_ok || !r.measure_ok).count(),
        case_violations: records.iter().filter(|r| !r.case_ok).count(),
        decay_violations: records.iter().map(|r| r.decay_violations).sum(),
        records,
    }
}

fn trace_bounds(cert: &Certificate, tr: &BendTrace) -> TraceBoundRecord {
    let thr = cert.theta_threshold();
    let boundary = &cert.hypotheses.boundary;
    let on_boundary: Vec<bool> = tr.crossings.iter().map(|c| boundary.contains(&c.leaf)).collect();
    let n = on_boundary.len();
    let count = on_boundary.iter().filter(|&&b| b).count();
    let first = n > 0 && on_boundary[0];
    let last = n > 0 && on_boundary[n - 1];
    let case = match count {
        0 => 1,
        1 if first => 2,
        1 if last => 3,
        2 if first && last => 4,
        _ => 0,
    };

    // bracket the measure of {θ > thr}: θ is left-continuous and nonincreasing on pieces
    let (mut lower, mut upper) = (0.0, 0.0);
    for w in tr.samples.windows(2) {
        let len = w[1].t - w[0].t;
        let start = if w[0].piece != w[1].piece {
            tr.crossings[w[1].piece - 1].theta_plus
        } else {
            w[0].theta_exact
        };
        if w[1].theta_exact > thr {
            lower += len;
            upper += len;
        } else if start > thr {
            upper += len;
        }
    }
    let max_theta = tr.max_theta();
    let theta_ok = max_theta < cert.bounds.c;
    let measure_ok = upper < cert.bounds.b || (upper == 0.0 && cert.bounds.b == 0.0);
    let case_ok = match case {
        1 => max_theta < cert.bounds.c_cases[0] && upper == 0.0,
        2 => max_theta < cert.bounds.c_cases[1] && upper < cert.bounds.b2,
        3 => max_theta < cert.bounds.c_cases[2] && upper < cert.bounds.b3,
        4 => max_theta < cert.bounds.c_cases[3] && upper < cert.bounds.b4,
        _ => false,
    };

    TraceBoundRecord {
        case,
        boundary_crossings: count,
        max_theta,
        theta_ok,
        measure: upper,
        measure_error: upper - lower,
        measure_ok,
        case_ok,
        decay_violations: decay_violations(cert, tr, &on_boundary),
    }
}

/// On each stretch `[a, b)` between boundary crossings, θ stays below θ₀ + δ when it
/// starts at most θ₀, and below `max{θ₀ + δ, θ(a) − (t − a)(sin θ₀ − δ) + δ}` when it
/// starts at most `π − (θ₀ + δ)`.
fn decay_violations(cert: &Certificate, tr: &BendTrace, on_boundary: &[bool]) -> usize {
    const TOL: f64 = 1e-9;
    let (theta0, delta) = (cert.theta0, cert.delta);
    let rate = theta0.sin() - delta;
    // stretch starts: (t, θ(a⁺), first piece index)
    let mut starts = vec![(0.0, 0.0, 0usize)];
    for (i, c) in tr.crossings.iter().enumerate() {
        if on_boundary[i] {
            starts.push((c.t, c.theta_plus, i + 1));
        }
    }
    let mut violations = 0;
    for (k, &(a, theta_a, piece)) in starts.iter().enumerate() {
        let end_piece = starts.get(k + 1).map_or(usize::MAX, |s| s.2);
        let mut values: Vec<(f64, f64)> = tr
            .samples
            .iter()
            .filter(|s| s.piece >= piece && s.piece < end_piece && s.t > a)
            .map(|s| (s.t, s.theta_exact))
            .collect();
        values.extend(
            tr.crossings
                .iter()
                .enumerate()
                .filter(|&(i, _)| i + 1 > piece && i + 1 < end_piece)
                .map(|(_, c)| (c.t, c.theta_plus)),
        );
        for (t, theta) in values {
            if theta_a <= theta0 && theta >= theta0 + delta + TOL {
                violations += 1;
            }
            if theta_a <= PI - (theta0 + delta) {
                let bound = (theta0 + delta).max(theta_a - (t - a) * rate + delta);
                if theta >= bound + TOL {
                    violations += 1;
                }
            }
        }
    }
    violations
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InjectivityReport {
    pub pairs: usize,
    pub radius: f64,
    pub seed: u64,
    pub certificate_present: bool,
    /// Required image separation for pairs at distance at least `1e-3`.
    pub threshold: f64,
    pub min_image_distance: f64,
    /// Pairs of distant points with (nearly) coincident images.
    pub counterexamples: Vec<(PointH2, PointH2, f64)>,
    pub mirror_pairs: usize,
    pub violations: usize,
}

impl InjectivityReport {
    pub fn injective(&self) -> bool {
        self.violations == 0
    }
}

/// Sampled injectivity test, plus pairs mirrored across each leaf (the pairs a bend
/// of angle π would identify).
pub fn check_injectivity(
    cfg: &BendConfig,
    cert: Option<&Certificate>,
    samples: usize,
    radius: f64,
    seed: u64,
) -> InjectivityReport {
    const EPS0: f64 = 1e-3;
    const MAX_RECORDED: usize = 16;
    let threshold = match cert {
        Some(c) => (EPS0 / c.s - c.t).max(DIST_TOL),
        None => DIST_TOL,
    };
    let mut pairs: Vec<(PointH2, PointH2)> = Vec::with_capacity(samples);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centre = PointH2::new(0.0, 1.0).expect("valid point");
    for _ in 0..samples {
        pairs.push((
            point_in_disk(&mut rng, &centre, radius),
            point_in_disk(&mut rng, &centre, radius),
        ));
    }
    let lam = cfg.lamination();
    let mut mirror_pairs = 0;
    for (i, leaf) in lam.leaves().iter().enumerate() {
        let foot = Chord::full(leaf.geodesic).point_at(0.0);
        let gap = lam
            .leaves()
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, l)| l.geodesic.signed_distance(&foot).abs())
            .fold(2.0, f64::min);
        for frac in [0.1, 0.3, 0.6, 0.9] {
            let r = frac * gap;
            pairs.push((
                offset_from(&leaf.geodesic, &foot, Side::Left, r),
                offset_from(&leaf.geodesic, &foot, Side::Right, r),
            ));
            mirror_pairs += 1;
        }
    }
    let mut report = InjectivityReport {
        pairs: pairs.len(),
        radius,
        seed,
        certificate_present: cert.is_some(),
        threshold,
        min_image_distance: f64::INFINITY,
        counterexamples: Vec::new(),
        mirror_pairs,
        violations: 0,
    };
    for (x, y) in pairs {
        if dist_h2(&x, &y) < EPS0 {
            continue;
        }
        let db = dist_h3(&bend_point(cfg, &x), &bend_point(cfg, &y));
        report.min_image_distance = report.min_image_distance.min(db);
        if db <= threshold {
            report.violations += 1;
            if report.counterexamples.len() < MAX_RECORDED {
                report.counterexamples.push((x, y, db));
            }
        }
    }
    report
}
