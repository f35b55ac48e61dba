//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//!
//! Run with `cargo test -p pleat --test acceptance`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::time::Instant;

use num_complex::Complex64;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pleat::bending::{
    agreement_on_intersection, bend_point, bend_trace, case_bounds, check_angle_bounds, check_qi, exact_trace,
    select_delta, BendConfig, Certificate,
};
use pleat::grafting::{graft_annulus, hyperbolic_with_axis, is_admissible_loop, FlatCylinder, Verdict};
use pleat::hyperbolic::{
    dist_h2, dist_h3, BoundaryPoint, GeodesicH2, GeodesicH3, GeodesicSegment, MobiusMap, PointH2, Side,
};
use pleat::lamination::random::{
    point_at_distance, point_in_disk, random_lamination, random_lamination_in, segment_in_disk,
};
use pleat::lamination::{Chord, ConvexRegion, FiniteLamination, HalfPlane, Leaf};
use pleat::surface::{
    approximation, component_norm_report, convergents, lift_window, FuchsianSurface, Slope, SlopeCurve, Window,
};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn pt(x: f64, y: f64) -> PointH2 {
    PointH2::new(x, y).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// 1. closed-form constants

fn criterion_1() -> Outcome {
    const TOL: f64 = 1e-12;
    let (d, theta0, delta) = (2.0, FRAC_PI_4, 0.2);
    let b = case_bounds(d, theta0, delta).unwrap();
    let cert =
        Certificate::with_delta(&FiniteLamination::empty(), &FiniteLamination::empty(), d, theta0, delta).unwrap();

    // direct evaluation of the formulas, with cos and sin from their power series
    let cos = |x: f64| {
        (0..20)
            .map(|k| (-1f64).powi(k) * x.powi(2 * k) / fact(2 * k as u32))
            .sum::<f64>()
    };
    let sin = |x: f64| {
        (0..20)
            .map(|k| (-1f64).powi(k) * x.powi(2 * k + 1) / fact(2 * k as u32 + 1))
            .sum::<f64>()
    };
    let a = theta0 + delta;
    let m = a.max(FRAC_PI_2 + d * (delta - sin(theta0)) + delta);
    let b2 = (FRAC_PI_2 - theta0) / (sin(theta0) - delta);
    let b3 = FRAC_PI_2 / sin(a + FRAC_PI_2).min(sin(a));
    let b4 = b2 + (m + FRAC_PI_2 - a) / sin(m + FRAC_PI_2).min(sin(a));
    let c = [a, PI - theta0, a + FRAC_PI_2, m + FRAC_PI_2]
        .into_iter()
        .fold(0.0, f64::max);
    let s = 1.0 / cos(a);
    let t = c * (1.0 + cos(a));

    let pairs = [
        ("M", b.m, m),
        ("B2", b.b2, b2),
        ("B3", b.b3, b3),
        ("B4", b.b4, b4),
        ("C", b.c, c),
        ("S", cert.s, s),
        ("T", cert.t, t),
    ];
    let worst = pairs
        .iter()
        .map(|&(_, got, want)| (got - want).abs())
        .fold(0.0, f64::max);
    let ok = worst < TOL && b.c < PI && b.b1 == 0.0 && (b.b2 - 1.549).abs() < 1e-3;
    outcome(
        ok,
        format!(
            "S={:.12} T={:.12} C={:.6} (<pi) max |diff|={worst:.1e} (tol {TOL:.0e})",
            cert.s, cert.t, b.c
        ),
    )
}

fn fact(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

// ---------------------------------------------------------------------------
// 2. angle ODE against the exact angle function

fn criterion_2() -> Outcome {
    const ODE_TOL: f64 = 1e-6;
    const JUMP_TOL: f64 = 1e-9;
    const MONO_TOL: f64 = 1e-12;
    let delta = select_delta(2.0, FRAC_PI_4).unwrap();
    let mut r = rng(2);
    let (mut traces, mut crossings, mut worst) = (0, 0, 0.0f64);
    let (mut jump_fail, mut mono_fail, mut ode_fail) = (0, 0, 0);
    for _ in 0..100 {
        let lam = random_lamination(&mut r, 50);
        let lam = lam.scaled(0.5 * delta / lam.norm()).unwrap();
        assert!(lam.norm() < delta);
        let cfg = BendConfig::standard(lam);
        for _ in 0..3 {
            let s = segment_in_disk(&mut r, &pt(0.0, 1.0), 2.0, 8.0);
            let tr = bend_trace(&cfg, &s, 1e-3).unwrap();
            traces += 1;
            crossings += tr.crossings.len();
            let dev = tr.max_deviation.unwrap_or(0.0);
            worst = worst.max(dev);
            ode_fail += usize::from(!(dev < ODE_TOL));
            jump_fail += usize::from(!tr.jumps_within_weights(JUMP_TOL));
            mono_fail += usize::from(!tr.nonincreasing_between_crossings(MONO_TOL));
        }
    }
    outcome(
        ode_fail + jump_fail + mono_fail == 0,
        format!(
            "{traces} traces, {crossings} crossings; max |theta_ode - theta_exact|={worst:.1e} (tol {ODE_TOL:.0e}); \
             jump failures {jump_fail}, monotonicity failures {mono_fail}"
        ),
    )
}

// ---------------------------------------------------------------------------
// 3. certificate soundness

/// A certified configuration: either small-norm leaves only, or two outermost
/// boundary leaves more than `d` apart enclosing small-norm leaves.
fn certified_configuration(r: &mut ChaCha8Rng, k: usize, d: f64, delta: f64) -> (FiniteLamination, FiniteLamination) {
    let n = r.gen_range(5..30);
    if k.is_multiple_of(2) {
        let lam = random_lamination(r, n);
        let lam = lam.scaled(r.gen_range(0.2..0.9) * delta / lam.norm()).unwrap();
        return (lam, FiniteLamination::empty());
    }
    let outer = r.gen_range(d + 0.2..d + 1.5).exp();
    let inner = random_lamination_in(r, n, 1.05, outer - 0.05);
    let inner = inner.scaled(r.gen_range(0.2..0.9) * delta / inner.norm()).unwrap();
    let shift = r.gen_range(-2.0..2.0);
    let mut leaves: Vec<Leaf> = inner.leaves().to_vec();
    let w1 = r.gen_range(0.1..1.5);
    let w2 = r.gen_range(0.1..1.5);
    leaves.push(Leaf::new(GeodesicH2::from_reals(-1.0, 1.0).unwrap(), w1));
    leaves.push(Leaf::new(GeodesicH2::from_reals(-outer, outer).unwrap(), w2));
    let shift = MobiusMap::from_real(1.0, shift, 0.0, 1.0).unwrap();
    let lam = FiniteLamination::new(leaves).unwrap().transformed(&shift).unwrap();
    let boundary = FiniteLamination::new(boundary_leaves(&lam, &shift, outer, w1, w2)).unwrap();
    (lam, boundary)
}

fn boundary_leaves(lam: &FiniteLamination, shift: &MobiusMap, outer: f64, w1: f64, w2: f64) -> Vec<Leaf> {
    [(1.0, w1), (outer, w2)]
        .iter()
        .map(|&(radius, w)| {
            let g = shift
                .apply_geodesic_h2(&GeodesicH2::from_reals(-radius, radius).unwrap())
                .unwrap();
            let i = lam.position(&g).expect("boundary leaf present");
            Leaf::new(lam.leaf(i).geodesic, w)
        })
        .collect()
}

fn criterion_3() -> Outcome {
    const PAIRS: usize = 10_000;
    const RADIUS: f64 = 10.0;
    let (d, theta0) = (2.0, FRAC_PI_4);
    let delta = select_delta(d, theta0).unwrap();
    let mut r = rng(3);
    let (mut qi_violations, mut bound_violations, mut uncertified) = (0, 0, 0);
    let (mut worst_upper, mut worst_lower) = (f64::INFINITY, f64::INFINITY);
    let (mut max_theta, mut max_measure) = (0.0f64, 0.0f64);
    let mut c_bound = 0.0;
    let mut b_bound = 0.0;
    for k in 0..50 {
        let (lam, boundary) = certified_configuration(&mut r, k, d, delta);
        let cert = Certificate::build(&lam, &boundary, d, theta0).unwrap();
        if !cert.valid {
            uncertified += 1;
            continue;
        }
        c_bound = cert.bounds.c;
        b_bound = cert.bounds.b;
        let cfg = BendConfig::standard(lam);
        let qi = check_qi(&cfg, &cert, PAIRS, RADIUS, k as u64);
        qi_violations += qi.violations();
        worst_upper = worst_upper.min(qi.worst_upper_margin);
        worst_lower = worst_lower.min(qi.worst_lower_margin);
        let traces: Vec<_> = (0..20)
            .map(|_| {
                let s = segment_in_disk(&mut r, &pt(0.0, 1.0), RADIUS / 2.0, RADIUS);
                exact_trace(&cfg, &s, 1e-3).unwrap()
            })
            .collect();
        let bounds = check_angle_bounds(&cert, &traces);
        bound_violations += bounds.violations;
        for rec in &bounds.records {
            max_theta = max_theta.max(rec.max_theta);
            max_measure = max_measure.max(rec.measure);
        }
    }
    outcome(
        uncertified == 0 && qi_violations == 0 && bound_violations == 0,
        format!(
            "50 configurations x {PAIRS} pairs (radius {RADIUS}); QI violations {qi_violations}, \
             worst margins upper {worst_upper:.2e} lower {worst_lower:.3}; theta/measure violations \
             {bound_violations} (max theta {max_theta:.3} < C={c_bound:.3}, max mes {max_measure:.3} < B={b_bound:.3}); \
             uncertified {uncertified}"
        ),
    )
}

// ---------------------------------------------------------------------------
// 4. 1-Lipschitz and isometric on regions

fn criterion_4() -> Outcome {
    const LIP_TOL: f64 = 1e-9;
    const ISO_TOL: f64 = 1e-10;
    let mut r = rng(4);
    let (mut lip_fail, mut iso_fail, mut pairs, mut same) = (0, 0, 0, 0);
    let (mut worst_lip, mut worst_iso) = (f64::NEG_INFINITY, 0.0f64);
    for _ in 0..20 {
        let n = r.gen_range(1..40);
        let lam = random_lamination(&mut r, n);
        // arbitrary weights, including bends past pi/2
        let lam = lam.scaled(r.gen_range(0.05..2.5)).unwrap();
        let cfg = BendConfig::standard(lam);
        for _ in 0..1000 {
            let x = point_in_disk(&mut r, &pt(0.0, 1.0), 6.0);
            let y = if r.gen_bool(0.5) {
                point_in_disk(&mut r, &pt(0.0, 1.0), 6.0)
            } else {
                let len = r.gen_range(0.0..0.3);
                point_at_distance(&mut r, &x, len)
            };
            let d = dist_h2(&x, &y);
            let db = dist_h3(&bend_point(&cfg, &x), &bend_point(&cfg, &y));
            pairs += 1;
            worst_lip = worst_lip.max(db - d);
            lip_fail += usize::from(db > d + LIP_TOL);
            if cfg.tree().project(&x) == cfg.tree().project(&y) {
                same += 1;
                worst_iso = worst_iso.max((db - d).abs());
                iso_fail += usize::from((db - d).abs() > ISO_TOL);
            }
        }
    }
    outcome(
        lip_fail == 0 && iso_fail == 0 && same > 1000,
        format!(
            "{pairs} pairs: max (d_bent - d)={worst_lip:.1e} (tol {LIP_TOL:.0e}); {same} same-region pairs, \
             max |d_bent - d|={worst_iso:.1e} (tol {ISO_TOL:.0e})"
        ),
    )
}

// ---------------------------------------------------------------------------
// 5. bending by L and by its intersection with a convex region agree there

fn random_region(r: &mut ChaCha8Rng, k: usize) -> ConvexRegion {
    let a = r.gen_range(-3.0..3.0);
    let b = a + r.gen_range(0.2..4.0);
    let side = if r.gen_bool(0.5) { Side::Left } else { Side::Right };
    match k % 4 {
        0 => ConvexRegion::half_plane(HalfPlane::open(GeodesicH2::from_reals(a, b).unwrap(), side)),
        1 => ConvexRegion::half_plane(HalfPlane::closed(GeodesicH2::vertical(a).unwrap(), side)),
        2 => {
            // annular strip between two nested geodesics
            let c = (a + b) / 2.0;
            let (r1, r2) = ((b - a) / 2.0, (b - a) / 2.0 * r.gen_range(1.5..4.0));
            let inner = GeodesicH2::circle(c, r1).unwrap();
            let outer = GeodesicH2::circle(c, r2).unwrap();
            let probe = pt(c, (r1 + r2) / 2.0);
            ConvexRegion::polygon(vec![
                HalfPlane::open(inner, inner.side_of(&probe, 0.0)),
                HalfPlane::open(outer, outer.side_of(&probe, 0.0)),
            ])
        }
        _ => ConvexRegion::geodesic(GeodesicH2::from_reals(a, b).unwrap()),
    }
}

fn criterion_5() -> Outcome {
    const TOL: f64 = 1e-9;
    let mut r = rng(5);
    let mut worst = 0.0f64;
    let mut samples = 0;
    let mut failures = Vec::new();
    for k in 0..20 {
        let n = r.gen_range(3..25);
        let lam = random_lamination(&mut r, n).scaled(r.gen_range(0.05..1.5)).unwrap();
        let x = random_region(&mut r, k);
        match agreement_on_intersection(&lam, &x, 1000, k as u64) {
            Ok(rep) => {
                worst = worst.max(rep.max_deviation);
                samples += rep.samples;
                if !(rep.max_deviation < TOL) || rep.samples < 1000 {
                    failures.push(format!("case {k}: {:.1e} over {}", rep.max_deviation, rep.samples));
                }
            }
            Err(e) => failures.push(format!("case {k}: {e}")),
        }
    }
    outcome(
        failures.is_empty(),
        format!("20 (L, X) pairs, {samples} samples; max deviation {worst:.1e} (tol {TOL:.0e}) {failures:?}"),
    )
}

// ---------------------------------------------------------------------------
// 6. chain-algorithm norm against sampled segments

/// Largest measure found over random short segments: uniform segments near `i`,
/// segments through each leaf, and segments around the closest points of leaf
/// pairs (found by alternating projection).
fn sampled_norm(lam: &FiniteLamination, r: &mut ChaCha8Rng) -> f64 {
    let mut best: f64 = 0.0;
    let try_segment = |a: PointH2, b: PointH2, best: &mut f64| {
        if let Ok(s) = GeodesicSegment::new(a, b) {
            if s.length() < 1.0 {
                *best = best.max(lam.transversal_measure(&s));
            }
        }
    };
    for _ in 0..5000 {
        let s = segment_in_disk(r, &pt(0.0, 1.0), 4.0, 1.0);
        try_segment(s.a(), s.b(), &mut best);
    }
    for leaf in lam.leaves() {
        let c = Chord::full(leaf.geodesic);
        for _ in 0..20 {
            let on = c.point_at(r.gen_range(-3.0..3.0));
            let p = point_at_distance(r, &on, 0.2);
            let s = GeodesicSegment::new(p, on).unwrap();
            try_segment(p, s.point_at(0.4), &mut best);
        }
    }
    for i in 0..lam.len() {
        for j in i + 1..lam.len() {
            let (gi, gj) = (lam.leaf(i).geodesic, lam.leaf(j).geodesic);
            let mut a = Chord::full(gi).point_at(r.gen_range(-1.0..1.0));
            let mut b = gj.project(&a);
            for _ in 0..400 {
                a = gi.project(&b);
                b = gj.project(&a);
            }
            let d = dist_h2(&a, &b);
            if !(d < 1.0) || d == 0.0 {
                continue;
            }
            let s = GeodesicSegment::new(a, b).unwrap();
            for _ in 0..5 {
                let eta = r.gen_range(0.15..0.3) * (1.0 - d);
                try_segment(s.point_at(-eta), s.point_at(d + eta), &mut best);
            }
        }
    }
    best
}

fn criterion_6() -> Outcome {
    const BELOW: f64 = 1e-6;
    let worked = |a: f64, b: f64| {
        FiniteLamination::from_pairs(&[(-a, a, 0.3), (-b, b, 0.3)])
            .unwrap()
            .norm()
    };
    let worked_ok = worked(1.0, 2.0) == 0.6 && worked(1.0, 3.0) == 0.3;
    let mut r = rng(6);
    let (mut below, mut above, mut worst) = (0, 0, 0.0f64);
    for _ in 0..200 {
        let n = r.gen_range(1..=10);
        let lam = random_lamination(&mut r, n).scaled(r.gen_range(0.05..1.0)).unwrap();
        let chain = lam.norm();
        let sampled = sampled_norm(&lam, &mut r);
        let offset = sampled - chain;
        worst = worst.max(offset.abs());
        above += usize::from(offset > 0.0);
        below += usize::from(offset < -BELOW);
    }
    outcome(
        worked_ok && above == 0 && below == 0,
        format!(
            "worked pairs (ln 2 -> 0.6, ln 3 -> 0.3) {}; 200 laminations: sampled above chain {above}, \
             more than {BELOW:.0e} below {below}, max |offset| {worst:.1e}",
            if worked_ok { "exact" } else { "WRONG" }
        ),
    )
}

// ---------------------------------------------------------------------------
// 7 and 8. continued-fraction approximation

fn criterion_7_and_8() -> (Outcome, Outcome) {
    const MEASURE_TOL: f64 = 1e-3;
    const SLACK_TOL: f64 = 1e-9;
    let started = Instant::now();
    let surface = FuchsianSurface::default_torus();
    let window = Window::default();
    let seq = approximation(&surface, &Slope::golden(), 8, &window, 8).unwrap();
    let runtime = started.elapsed().as_secs_f64();

    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let listed = [0.382, 0.236, 0.146, 0.090, 0.056];
    let listed_ok = seq
        .rows
        .iter()
        .zip(listed)
        .all(|(row, want)| (row.measure - want).abs() < MEASURE_TOL);
    // |q_i φ⁻¹ − p_i| = φ^{−(i+1)} for the golden slope
    let closed_form = seq
        .rows
        .iter()
        .map(|row| (row.measure - phi.powi(-(row.i as i32 + 1))).abs())
        .fold(0.0, f64::max);
    let decreasing = seq.measures_strictly_decrease();
    let angle_trend = seq.angle_trend.unwrap_or(f64::NAN);
    let norm_trend = seq.norm_trend.unwrap_or(f64::NAN);
    let all_angles = seq.rows.iter().all(|r| r.proxy_angle.is_some());
    let c7 = outcome(
        listed_ok && closed_form < 1e-12 && decreasing && all_angles && angle_trend < 0.0 && norm_trend < 0.0 && runtime < 300.0,
        format!(
            "golden, i=1..8, depth 8: measures {:?}; |m_i - phi^-(i+1)| <= {closed_form:.1e}; strictly decreasing {decreasing}; \
             trend slopes angle {angle_trend:.4} norm {norm_trend:.4}; {} proxy leaves; {runtime:.1}s",
            seq.rows.iter().map(|r| (r.measure * 1e3).round() / 1e3).collect::<Vec<_>>(),
            seq.proxy_leaves
        ),
    );

    // every component report: the golden rows above, the silver slope, and the
    // golden convergents against a coarser proxy
    let mut slacks: Vec<f64> = seq.rows.iter().map(|r| r.component_slack).collect();
    let silver = approximation(&surface, &Slope::silver(), 3, &window, 6).unwrap();
    slacks.extend(silver.rows.iter().map(|r| r.component_slack));
    let conv = convergents(&Slope::golden(), 10).unwrap();
    let proxy_curve = SlopeCurve::new(&surface, conv[9].p as i64, conv[9].q as i64).unwrap();
    let proxy = lift_window(
        &surface,
        &[(proxy_curve.clone(), 1.0 / proxy_curve.q as f64)],
        &window,
        6,
    )
    .unwrap()
    .lamination;
    let mut reports = seq.rows.len() + silver.rows.len();
    let mut components = reports;
    for c in &conv[1..7] {
        let curve = SlopeCurve::new(&surface, c.p as i64, c.q as i64).unwrap();
        let rep = component_norm_report(&surface, &curve, &proxy, &window, 6).unwrap();
        reports += 1;
        components += rep.components.len();
        slacks.extend(rep.components.iter().map(|k| k.slack));
    }
    let min_slack = slacks.iter().copied().fold(f64::INFINITY, f64::min);
    let c8 = outcome(
        min_slack >= -SLACK_TOL,
        format!("{reports} reports, {components} rows/components; min slack {min_slack:.3e} (tol -{SLACK_TOL:.0e})"),
    );
    (c7, c8)
}

// ---------------------------------------------------------------------------
// 9. grafting invariants

fn random_hyperbolic(r: &mut ChaCha8Rng) -> MobiusMap {
    let from = BoundaryPoint::finite(r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0));
    let to = BoundaryPoint::finite(r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0));
    let axis = GeodesicH3::new(from, to).unwrap();
    hyperbolic_with_axis(&axis, r.gen_range(1.3..8.0)).unwrap()
}

fn criterion_9() -> Outcome {
    const TRACE_TOL: f64 = 1e-12;
    let mut r = rng(9);
    let mut fiber_fail = 0;
    for degree in 1..=5u32 {
        let cyl = FlatCylinder::integral(degree, r.gen_range(1.5..5.0)).unwrap();
        for _ in 0..100 {
            let z = Complex64::new(r.gen_range(-5.0..5.0), r.gen_range(-5.0..5.0));
            let fiber = cyl.fiber(z).unwrap();
            let develops_back = fiber
                .iter()
                .all(|&(x, y)| (cyl.crescent().dev(x, y).unwrap() - z).norm() < 1e-12 * z.norm().max(1.0));
            fiber_fail += usize::from(fiber.len() != degree as usize || !develops_back);
        }
    }
    let (mut trace_worst, mut winding_fail, mut cases) = (0.0f64, 0, 0);
    for _ in 0..20 {
        let h = random_hyperbolic(&mut r);
        let (n, m) = (r.gen_range(0..4u32), r.gen_range(0..4u32));
        let a = graft_annulus(&h, n, 8).unwrap();
        let b = graft_annulus(&h, m, 8).unwrap();
        let ab = graft_annulus(&h, n + m, 8).unwrap();
        for g in [&a, &b, &ab] {
            trace_worst = trace_worst.max((g.trace_after - g.trace_before).abs());
            cases += 1;
        }
        let additive = a.winding_after - a.winding_before == n as i64
            && ab.winding_after - ab.winding_before
                == (a.winding_after - a.winding_before) + (b.winding_after - b.winding_before);
        winding_fail += usize::from(!additive);
    }
    outcome(
        fiber_fail == 0 && trace_worst < TRACE_TOL && winding_fail == 0,
        format!(
            "fiber count = degree on 500 points: {} failures; {cases} grafts, max |trace change| {trace_worst:.1e} \
             (tol {TRACE_TOL:.0e}); winding additivity failures {winding_fail}",
            fiber_fail
        ),
    )
}

// ---------------------------------------------------------------------------
// 10. admissibility predicate on a labelled suite

fn sample(n: usize, f: impl Fn(f64) -> (f64, f64)) -> Vec<Complex64> {
    (0..n)
        .map(|k| {
            let (x, y) = f(k as f64 / (n - 1) as f64);
            Complex64::new(x, y)
        })
        .collect()
}

fn polyline(p: &[(f64, f64)]) -> Vec<Complex64> {
    p.iter().map(|&(x, y)| Complex64::new(x, y)).collect()
}

fn criterion_10() -> Outcome {
    use Verdict::{Admissible as A, Indeterminate as I, NotAdmissible as N};
    let hyp = MobiusMap::from_real(2.0, 0.0, 0.0, 0.5).unwrap();
    let lox = MobiusMap::scaling(Complex64::from_polar(3.0, 0.7)).unwrap();
    let skew = random_hyperbolic(&mut rng(10));
    let parabolic = MobiusMap::from_real(1.0, 1.0, 0.0, 1.0).unwrap();
    let parabolic_c = MobiusMap::translation(Complex64::new(1.0, 1.0));
    let rotation = |t: f64| MobiusMap::from_real(t.cos(), -t.sin(), t.sin(), t.cos()).unwrap();
    // tr = 2 cosh(1e-5), so tr² − 4 ≈ 4e-10 lies inside the classification band
    let near_parabolic = MobiusMap::from_real(1e-5f64.exp(), 0.0, 0.0, (-1e-5f64).exp()).unwrap();
    let graft = graft_annulus(&skew, 2, 40).unwrap();
    let spiral_pts = |lam: Complex64| {
        sample(60, |u| {
            let z = Complex64::new(0.3, 1.0) * (lam.ln() * u).exp();
            (z.re, z.im)
        })
    };

    let cases: Vec<(&str, MobiusMap, Vec<Complex64>, Verdict)> = vec![
        (
            "circle arc",
            hyp,
            sample(50, |u| ((0.1 + 2.9 * u).cos(), (0.1 + 2.9 * u).sin())),
            A,
        ),
        (
            "log spiral",
            lox,
            sample(200, |u| {
                let t = 4.0 * PI * u;
                ((0.1 * t).exp() * t.cos(), (0.1 * t).exp() * t.sin())
            }),
            A,
        ),
        ("sine graph", hyp, sample(100, |u| (10.0 * u, (10.0 * u).sin())), A),
        ("grafted core", skew, graft.core.points.clone(), A),
        ("grafted row", skew, graft.after[3].points.clone(), A),
        (
            "parabola",
            lox,
            sample(40, |u| (4.0 * u - 2.0, (4.0 * u - 2.0).powi(2))),
            A,
        ),
        ("loxodromic orbit", lox, spiral_pts(Complex64::from_polar(3.0, 0.7)), A),
        (
            "open square",
            skew,
            polyline(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (0.0, 0.5)]),
            A,
        ),
        (
            "ellipse arc",
            hyp,
            sample(80, |u| (3.0 * (5.5 * u).cos(), (5.5 * u).sin())),
            A,
        ),
        (
            "almost closed circle",
            lox,
            sample(200, |u| ((6.2 * u).cos(), (6.2 * u).sin())),
            A,
        ),
        (
            "figure eight",
            hyp,
            sample(101, |u| {
                let t = 0.3 + TAU * u * 0.999;
                (t.sin(), t.sin() * t.cos())
            }),
            N,
        ),
        (
            "limacon inner loop",
            hyp,
            sample(150, |u| {
                let t = 0.05 + TAU * u * 0.98;
                let rr = 0.5 + t.cos();
                (rr * t.cos(), rr * t.sin())
            }),
            N,
        ),
        (
            "bowtie",
            lox,
            polyline(&[(0.0, 0.0), (2.0, 2.0), (2.0, 0.0), (0.0, 2.0)]),
            N,
        ),
        (
            "lissajous 3:2",
            skew,
            sample(300, |u| ((3.0 * TAU * u + 0.1).sin(), (2.0 * TAU * u).sin())),
            N,
        ),
        (
            "circle and a fifth",
            hyp,
            sample(120, |u| ((7.5 * u).cos(), (7.5 * u).sin())),
            N,
        ),
        (
            "pentagram",
            lox,
            polyline(&[
                (0.0, 1.0),
                (0.588, -0.809),
                (-0.951, 0.309),
                (0.951, 0.309),
                (-0.588, -0.809),
            ]),
            N,
        ),
        (
            "prolate cycloid",
            hyp,
            sample(200, |u| {
                let t = 4.0 * PI * u;
                (t - 2.0 * t.sin(), 1.0 - 2.0 * t.cos())
            }),
            N,
        ),
        (
            "epitrochoid",
            skew,
            sample(400, |u| {
                let t = TAU * u * 0.999;
                (
                    3.0 * t.cos() - 1.5 * (3.0 * t).cos(),
                    3.0 * t.sin() - 1.5 * (3.0 * t).sin(),
                )
            }),
            N,
        ),
        (
            "z-shape returning",
            lox,
            polyline(&[(0.0, 0.0), (3.0, 0.0), (0.0, 2.0), (3.0, 2.0), (1.5, -1.0)]),
            N,
        ),
        (
            "four-petal rose",
            hyp,
            sample(301, |u| {
                let t = 0.01 + TAU * u * 0.99;
                let rr = (2.0 * t).cos();
                (rr * t.cos(), rr * t.sin())
            }),
            N,
        ),
        (
            "parabolic arc",
            parabolic,
            sample(50, |u| ((3.0 * u).cos(), (3.0 * u).sin())),
            N,
        ),
        (
            "complex parabolic spiral",
            parabolic_c,
            sample(100, |u| {
                let t = 4.0 * PI * u;
                ((0.1 * t).exp() * t.cos(), (0.1 * t).exp() * t.sin())
            }),
            N,
        ),
        (
            "elliptic graph",
            rotation(PI / 3.0),
            sample(100, |u| (10.0 * u, (10.0 * u).sin())),
            N,
        ),
        ("order two", rotation(FRAC_PI_2), sample(20, |u| (u, u * u)), N),
        ("identity", MobiusMap::identity(), sample(20, |u| (u, 2.0 * u)), N),
        (
            "elliptic on a figure eight",
            rotation(1.0),
            sample(101, |u| {
                let t = 0.3 + TAU * u * 0.999;
                (t.sin(), t.sin() * t.cos())
            }),
            N,
        ),
        (
            "trace in the parabolic band",
            near_parabolic,
            sample(50, |u| ((3.0 * u).cos(), (3.0 * u).sin())),
            I,
        ),
        (
            "vertex touching a segment",
            hyp,
            polyline(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 0.0), (1.0, -1.0)]),
            I,
        ),
        (
            "fold back",
            lox,
            polyline(&[(0.0, 0.0), (2.0, 0.0), (1.0, 0.0), (1.0, 3.0)]),
            I,
        ),
        (
            "repeated sample",
            skew,
            polyline(&[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (1.0, 3.0)]),
            I,
        ),
    ];
    assert_eq!(cases.len(), 30);
    let mut wrong = Vec::new();
    let mut declared = 0;
    for (name, h, pts, want) in &cases {
        declared += usize::from(*want == I);
        let got = is_admissible_loop(h, pts).unwrap().verdict;
        if got != *want {
            wrong.push(format!("{name}: {got:?} (labelled {want:?})"));
        }
    }
    outcome(
        wrong.is_empty(),
        format!(
            "30 cases ({declared} declared indeterminate); misclassified {}: {wrong:?}",
            wrong.len()
        ),
    )
}

// ---------------------------------------------------------------------------
// 11. dual tree

fn criterion_11() -> Outcome {
    let mut r = rng(11);
    let (mut pairs, mut mismatch, mut rational_mismatch) = (0, 0, 0);
    for _ in 0..20 {
        let n = r.gen_range(5..40);
        let shape = random_lamination(&mut r, n);
        let numerators: Vec<i64> = (0..n).map(|_| r.gen_range(1..120)).collect();
        let leaves: Vec<Leaf> = shape
            .leaves()
            .iter()
            .zip(&numerators)
            .map(|(l, &k)| Leaf::new(l.geodesic, k as f64 / 60.0))
            .collect();
        let lam = FiniteLamination::new(leaves).unwrap();
        let tree = lam.dual_tree();
        // leaves are stored in canonical order; recover each leaf's numerator
        let numerator = |i: usize| (lam.leaf(i).weight * 60.0).round() as i64;
        for _ in 0..500 {
            let x = point_in_disk(&mut r, &pt(0.0, 1.0), 6.0);
            let y = point_in_disk(&mut r, &pt(0.0, 1.0), 6.0);
            let s = GeodesicSegment::new(x, y).unwrap();
            let (u, v) = (tree.project(&x), tree.project(&y));
            pairs += 1;
            mismatch += usize::from(tree.tree_distance(u, v) != lam.transversal_measure(&s));
            let along_tree: Ratio<i64> = tree
                .path_edges(u, v)
                .into_iter()
                .map(|e| Ratio::new(numerator(e), 60))
                .sum();
            let across: Ratio<i64> = lam
                .crossings(&s)
                .leaves()
                .into_iter()
                .map(|e| Ratio::new(numerator(e), 60))
                .sum();
            rational_mismatch += usize::from(along_tree != across);
        }
    }

    // loops: translation along the imaginary axis by λ, with a λ-invariant lamination
    let mut loop_fail = 0;
    let mut min_gap = f64::INFINITY;
    for k in 0..50 {
        let lambda: f64 = 4.0;
        let (w1, w2) = (r.gen_range(0.1..1.0), r.gen_range(0.1..1.0));
        let mut leaves = Vec::new();
        for j in -10..=10 {
            let s = lambda.powi(j);
            leaves.push(Leaf::new(GeodesicH2::from_reals(-s, 2.0 * s).unwrap(), w1));
            leaves.push(Leaf::new(GeodesicH2::from_reals(2.5 * s, 3.5 * s).unwrap(), w2));
        }
        let lam = FiniteLamination::new(leaves).unwrap();
        let gamma = MobiusMap::from_real(2.0, 0.0, 0.0, 0.5).unwrap();
        let on_axis = pt(0.0, r.gen_range(0.5..2.0));
        let axis_period = GeodesicSegment::new(on_axis, gamma.apply_h2(&on_axis).unwrap()).unwrap();
        let mu_loop = lam.translation_length(&gamma, &axis_period).unwrap();
        // a path from x to γx through random points of moderate height
        let x = pt(r.gen_range(-3.0..3.0), r.gen_range(0.3..2.0));
        let mut path = vec![x];
        for _ in 0..(k % 4) {
            path.push(pt(r.gen_range(-4.0..4.0), r.gen_range(0.3..6.0)));
        }
        path.push(gamma.apply_h2(&x).unwrap());
        let mu_path = lam.path_measure(&path).unwrap();
        min_gap = min_gap.min(mu_path - mu_loop);
        loop_fail += usize::from(mu_loop > mu_path);
    }
    outcome(
        mismatch == 0 && rational_mismatch == 0 && loop_fail == 0,
        format!(
            "{pairs} pairs: float mismatches {mismatch}, rational mismatches {rational_mismatch}; \
             50 loop/path pairs: mu(l) > mu(c) in {loop_fail}, min mu(c) - mu(l) {min_gap:.3}"
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn print(n: &str, o: &Outcome, seconds: f64) {
    let status = if o.passed { "PASS" } else { "FAIL" };
    println!("criterion {n}: {status} [{seconds:.1}s] {}", o.detail);
}

fn main() {
    // `cargo test` passes harness flags; listing requests get an empty list
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let single: [Criterion; 6] = [
        ("1", criterion_1),
        ("2", criterion_2),
        ("3", criterion_3),
        ("4", criterion_4),
        ("5", criterion_5),
        ("6", criterion_6),
    ];
    let mut failed = 0;
    for (n, f) in single {
        let started = Instant::now();
        let o = f();
        print(n, &o, started.elapsed().as_secs_f64());
        failed += usize::from(!o.passed);
    }
    let started = Instant::now();
    let (c7, c8) = criterion_7_and_8();
    let seconds = started.elapsed().as_secs_f64();
    for (n, o) in [("7", c7), ("8", c8)] {
        print(n, &o, seconds);
        failed += usize::from(!o.passed);
    }
    let rest: [Criterion; 3] = [("9", criterion_9), ("10", criterion_10), ("11", criterion_11)];
    for (n, f) in rest {
        let started = Instant::now();
        let o = f();
        print(n, &o, started.elapsed().as_secs_f64());
        failed += usize::from(!o.passed);
    }
    println!("acceptance: {} of 11 criteria passed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
