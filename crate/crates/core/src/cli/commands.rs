use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{CliError, Outcome};
use crate::bending::{
    bend_trace, check_angle_bounds, check_injectivity, check_qi, exact_trace, select_delta, BendConfig, Certificate,
};
use crate::grafting::{curves_to_json, curves_to_svg, graft_annulus, is_admissible_loop};
use crate::hyperbolic::{GeodesicSegment, MobiusMap, PointH2};
use crate::lamination::{random::segment_in_disk, FiniteLamination};
use crate::surface::{
    approximation, component_norm_report, convergents, lift_window, loop_measure, FuchsianSurface, Slope, SlopeCurve,
    Window, PROXY_OFFSET,
};
use crate::Error;

/// Tolerance on jumps and monotonicity of a trace.
const TRACE_TOL: f64 = 1e-9;
/// Largest accepted `|θ_ode − θ_exact|`.
const ODE_TOL: f64 = 1e-6;
/// Slack allowed in the component splitting inequality.
const SLACK_TOL: f64 = 1e-9;
/// Largest accepted change of the holonomy trace under grafting.
const TRACE_EQ_TOL: f64 = 1e-12;
/// Sample spacing of the traces used for the angle bounds.
const TRACE_STEP: f64 = 1e-2;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn floats(spec: &str, n: usize, what: &str) -> Result<Vec<f64>, CliError> {
    let v: Vec<f64> = spec
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Input(format!("{what}: expected {n} comma-separated numbers, got `{spec}`")))?;
    if v.len() != n {
        return Err(CliError::Input(format!(
            "{what}: expected {n} numbers, got {}",
            v.len()
        )));
    }
    Ok(v)
}

fn lamination(path: &Path) -> Result<FiniteLamination, CliError> {
    FiniteLamination::from_json(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn surface(path: Option<&Path>) -> Result<FuchsianSurface, CliError> {
    match path {
        Some(p) => FuchsianSurface::from_json(&read(p)?).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => Ok(FuchsianSurface::default_torus()),
    }
}

fn window(spec: &str) -> Result<Window, CliError> {
    let v = floats(spec, 3, "window")?;
    Ok(Window::new(PointH2::new(v[0], v[1])?, v[2])?)
}

fn to_value(v: &impl serde::Serialize) -> Value {
    serde_json::to_value(v).expect("report data serializes")
}

pub(super) fn bend(input: &Path, segment: &str, ode_step: f64) -> Result<Outcome, CliError> {
    let l = lamination(input)?;
    let v = floats(segment, 4, "segment")?;
    let s = GeodesicSegment::new(PointH2::new(v[0], v[1])?, PointH2::new(v[2], v[3])?)?;
    let cfg = BendConfig::standard(l.clone());
    let trace = bend_trace(&cfg, &s, ode_step)?;
    let mut failures = Vec::new();
    if !trace.jumps_within_weights(TRACE_TOL) {
        failures.push("a jump of the angle function exceeds the crossed weight".to_string());
    }
    if !trace.nonincreasing_between_crossings(TRACE_TOL) {
        failures.push("the angle function increases between crossings".to_string());
    }
    let deviation = trace.max_deviation.unwrap_or(0.0);
    if !(deviation <= ODE_TOL) {
        failures.push(format!("ODE deviates from the exact angle by {deviation:e}"));
    }
    Ok(Outcome {
        passed: failures.is_empty(),
        summary: format!(
            "bend: {} leaves, {} crossings, max theta {:.6}, ODE deviation {:.3e}",
            l.len(),
            trace.crossings.len(),
            trace.max_theta(),
            deviation
        ),
        params: json!({ "input": input, "segment": v, "ode_step": ode_step }),
        result: json!({
            "leaves": l.len(),
            "length": trace.length,
            "crossings": trace.crossings,
            "max_theta": trace.max_theta(),
            "max_deviation": deviation,
        }),
        failures,
        files: vec![
            ("trace.csv".into(), trace.to_csv()),
            (
                "trace.svg".into(),
                trace.to_svg(&[("pi/2", std::f64::consts::FRAC_PI_2)]),
            ),
        ],
    })
}

#[allow(clippy::too_many_arguments)]
pub(super) fn certify(
    input: &Path,
    boundary: &str,
    d: f64,
    theta0: f64,
    samples: usize,
    traces: usize,
    radius: f64,
    seed: u64,
) -> Result<Outcome, CliError> {
    let l = lamination(input)?;
    let idx: Vec<usize> = boundary
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| CliError::Input(format!("bad boundary index `{s}`")))
        })
        .collect::<Result<_, _>>()?;
    if let Some(&bad) = idx.iter().find(|&&i| i >= l.len()) {
        return Err(CliError::Input(format!(
            "boundary index {bad} out of range ({} leaves)",
            l.len()
        )));
    }
    let sub = l.subset(&idx);
    let cert = Certificate::build(&l, &sub, d, theta0)?;
    let params = json!({
        "input": input, "boundary": idx, "D": d, "theta0": theta0,
        "samples": samples, "traces": traces, "radius": radius,
    });
    let mut files = vec![("certificate.json".to_string(), cert.to_json() + "\n")];
    if let Some(h) = cert.hypotheses.failure() {
        return Ok(Outcome {
            passed: false,
            summary: format!("NOT CERTIFIED: hypothesis {h}"),
            params,
            result: json!({ "status": "NOT CERTIFIED", "certificate": cert }),
            failures: vec![format!("hypothesis {h}")],
            files,
        });
    }
    let mut failures = Vec::new();
    if !cert.valid {
        failures.push(format!(
            "constants out of range: C = {}, S = {}, T = {}",
            cert.bounds.c, cert.s, cert.t
        ));
    }
    let cfg = BendConfig::standard(l.clone());
    let qi = check_qi(&cfg, &cert, samples, radius, seed);
    if qi.violations() > 0 {
        failures.push(format!(
            "quasi-isometry bounds violated on {} of {} pairs",
            qi.violations(),
            qi.pairs
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let centre = PointH2::new(0.0, 1.0).expect("valid point");
    let sampled = (0..traces)
        .map(|_| exact_trace(&cfg, &segment_in_disk(&mut rng, &centre, radius, radius), TRACE_STEP))
        .collect::<crate::Result<Vec<_>>>()?;
    let angle = check_angle_bounds(&cert, &sampled);
    if !angle.passed() {
        failures.push(format!(
            "angle bounds violated on {} traces ({} decay-estimate failures)",
            angle.violations, angle.decay_violations
        ));
    }
    let inj = check_injectivity(&cfg, Some(&cert), samples, radius, seed.wrapping_add(2));
    if !inj.injective() {
        failures.push(format!("{} injectivity counterexamples", inj.violations));
    }
    let status = if failures.is_empty() {
        "CERTIFIED (numerical)"
    } else {
        "NOT CERTIFIED"
    };
    files.push((
        "checks.json".into(),
        serde_json::to_string_pretty(&json!({
            "qi": qi, "angle_bounds": angle, "injectivity": inj,
        }))
        .expect("report data serializes")
            + "\n",
    ));
    Ok(Outcome {
        passed: failures.is_empty(),
        summary: format!(
            "{status}: S = {:.6}, T = {:.6}, delta = {:.6}",
            cert.s, cert.t, cert.delta
        ),
        params,
        result: json!({
            "status": status,
            "certificate": cert,
            "qi_violations": qi.violations(),
            "worst_lower_margin": qi.worst_lower_margin,
            "angle_violations": angle.violations,
            "injectivity_violations": inj.violations,
        }),
        failures,
        files,
    })
}

pub(super) fn approx(
    alpha: &str,
    i_max: usize,
    depth: usize,
    window_spec: &str,
    input: Option<&Path>,
) -> Result<Outcome, CliError> {
    let s = surface(input)?;
    let a: Slope = alpha.parse()?;
    let w = window(window_spec)?;
    let seq = approximation(&s, &a, i_max, &w, depth)?;
    let mut failures = Vec::new();
    if !seq.measures_strictly_decrease() {
        failures.push("loop measures do not decrease strictly".to_string());
    }
    for (name, trend) in [
        ("measure", seq.measure_trend),
        ("proxy angle", seq.angle_trend),
        ("window norm", seq.norm_trend),
    ] {
        if let Some(t) = trend.filter(|t| !(*t < 0.0)) {
            failures.push(format!("{name} trend slope {t:e} is not negative"));
        }
    }
    for r in seq.rows.iter().filter(|r| r.component_slack < -SLACK_TOL) {
        failures.push(format!(
            "component inequality fails at i = {} (slack {:e})",
            r.i, r.component_slack
        ));
    }
    let column = |f: &dyn Fn(&crate::surface::ApproxRow) -> Value| seq.rows.iter().map(f).collect::<Vec<_>>();
    let arrays = json!({
        "i": column(&|r| json!(r.i)),
        "p": column(&|r| json!(r.p)),
        "q": column(&|r| json!(r.q)),
        "measure": column(&|r| json!(r.measure)),
        "proxy_angle": column(&|r| json!(r.proxy_angle)),
        "window_norm": column(&|r| json!(r.window_norm)),
        "component_norm": column(&|r| json!(r.component_norm)),
    });
    Ok(Outcome {
        passed: failures.is_empty(),
        summary: format!(
            "approx: {} rows, measures {:.3} .. {:.3}, proxy {}/{} with {} leaves{}",
            seq.rows.len(),
            seq.rows.first().map_or(f64::NAN, |r| r.measure),
            seq.rows.last().map_or(f64::NAN, |r| r.measure),
            seq.proxy_p,
            seq.proxy_q,
            seq.proxy_leaves,
            if seq.depth_limited { " (depth-limited)" } else { "" }
        ),
        params: json!({
            "alpha": a.to_string(), "i_max": i_max, "depth": depth, "window": w,
            "surface": { "name": s.name, "traces": s.trace_triple() },
        }),
        result: to_value(&seq),
        failures,
        files: vec![
            ("approx.csv".into(), seq.to_csv()),
            (
                "sequence.json".into(),
                serde_json::to_string_pretty(&arrays).expect("arrays serialize") + "\n",
            ),
        ],
    })
}

/// `diag(λ, 1/λ)` for |trace| > 2, the unit translation for |trace| = 2, a rotation
/// below.
fn holonomy_from_trace(t: f64) -> Result<MobiusMap, CliError> {
    if !t.is_finite() {
        return Err(CliError::Input(format!("trace must be finite, got {t}")));
    }
    let a = t.abs();
    let m = if (a - 2.0).abs() <= 1e-12 {
        MobiusMap::from_real(1.0, 1.0, 0.0, 1.0)
    } else if a > 2.0 {
        let l = (a + (a * a - 4.0).sqrt()) / 2.0;
        MobiusMap::from_real(l, 0.0, 0.0, 1.0 / l)
    } else {
        let (s, c) = (a / 2.0).acos().sin_cos();
        MobiusMap::from_real(c, -s, s, c)
    };
    Ok(m?)
}

pub(super) fn graft(trace: f64, n: u32, samples: usize) -> Result<Outcome, CliError> {
    let h = holonomy_from_trace(trace)?;
    let g = match graft_annulus(&h, n, samples) {
        Ok(g) => g,
        Err(e @ Error::NotHyperbolic(_)) => return Err(CliError::Failed(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    let verdict = is_admissible_loop(&h, &g.core.points)?;
    let mut failures = Vec::new();
    if !((g.trace_after - g.trace_before).abs() <= TRACE_EQ_TOL) {
        failures.push(format!(
            "holonomy trace changed from {} to {}",
            g.trace_before, g.trace_after
        ));
    }
    if g.winding_after - g.winding_before != n as i64 {
        failures.push(format!(
            "winding changed by {} instead of {n}",
            g.winding_after - g.winding_before
        ));
    }
    if !verdict.is_admissible() {
        failures.push(format!(
            "core loop is not admissible: {}",
            verdict.reason.clone().unwrap_or_default()
        ));
    }
    let mut plotted = g.after.clone();
    plotted.push(g.core.clone());
    Ok(Outcome {
        passed: failures.is_empty(),
        summary: format!(
            "graft: degree {n}, winding {} -> {}, |trace| {} -> {}",
            g.winding_before, g.winding_after, g.trace_before, g.trace_after
        ),
        params: json!({ "trace": trace, "n": n, "samples": samples }),
        result: json!({
            "degree": g.degree,
            "multiplier": g.multiplier,
            "half_width": g.half_width,
            "holonomy": g.holonomy,
            "grafted_holonomy": g.grafted_holonomy,
            "trace_before": g.trace_before,
            "trace_after": g.trace_after,
            "turning_before": g.turning_before,
            "turning_after": g.turning_after,
            "winding_before": g.winding_before,
            "winding_after": g.winding_after,
            "core_loop": verdict,
        }),
        failures,
        files: vec![
            ("before.json".into(), curves_to_json(&g.before) + "\n"),
            ("after.json".into(), curves_to_json(&g.after) + "\n"),
            ("graft.svg".into(), curves_to_svg(&plotted)),
        ],
    })
}

pub(super) fn decompose_demo(
    alpha: &str,
    i: usize,
    d: f64,
    theta0: f64,
    depth: usize,
    window_spec: &str,
    input: Option<&Path>,
) -> Result<Outcome, CliError> {
    if i == 0 {
        return Err(CliError::Input("convergent index must be at least 1".into()));
    }
    let s = surface(input)?;
    let a: Slope = alpha.parse()?;
    let w = window(window_spec)?;
    let delta = select_delta(d, theta0)?;
    let cert = Certificate::build(&FiniteLamination::empty(), &FiniteLamination::empty(), d, theta0)?;
    let n = i + PROXY_OFFSET;
    let conv = convergents(&a, n + 1)?;
    let curve = SlopeCurve::new(&s, conv[i].p as i64, conv[i].q as i64)?;
    let proxy_curve = SlopeCurve::new(&s, conv[n].p as i64, conv[n].q as i64)?;
    let proxy = lift_window(&s, &[(proxy_curve, 1.0 / conv[n].q as f64)], &w, depth)?;
    let report = component_norm_report(&s, &curve, &proxy.lamination, &w, depth)?;
    let measure = loop_measure(a.value(), conv[i].p, conv[i].q);
    let components: Vec<Value> = report
        .components
        .iter()
        .map(|c| {
            json!({
                "region": c.region, "boundary": c.boundary, "leaves": c.leaves,
                "norm": c.norm, "slack": c.slack, "certified": c.norm < delta,
            })
        })
        .collect();
    let uncertified: Vec<usize> = report
        .components
        .iter()
        .filter(|c| c.norm >= delta)
        .map(|c| c.region)
        .collect();
    let gate = if measure > delta {
        Some(format!(
            "loop measure {measure:.4} exceeds delta {delta:.4}: the window norms cannot be forced below delta at this convergent"
        ))
    } else {
        None
    };
    let mut failures = Vec::new();
    if report.min_slack < -SLACK_TOL {
        failures.push(format!("component inequality violated (slack {:e})", report.min_slack));
    }
    Ok(Outcome {
        passed: failures.is_empty(),
        summary: format!(
            "demo: punctured torus, window-based; loop {}/{}: {} of {} components below delta = {:.4}",
            conv[i].p,
            conv[i].q,
            report.components.len() - uncertified.len(),
            report.components.len(),
            delta
        ),
        params: json!({
            "alpha": a.to_string(), "i": i, "D": d, "theta0": theta0, "depth": depth, "window": w,
            "surface": { "name": s.name, "traces": s.trace_triple() },
        }),
        result: json!({
            "label": "demo: punctured torus, window-based",
            "loop": { "p": conv[i].p, "q": conv[i].q, "measure": measure },
            "proxy": { "p": conv[n].p, "q": conv[n].q, "leaves": proxy.lamination.len(), "depth_limited": proxy.depth_limited },
            "delta": delta,
            "S": cert.s,
            "T": cert.t,
            "C": cert.bounds.c,
            "components": components,
            "uncertified": uncertified,
            "all_certified": uncertified.is_empty(),
            "gate": gate,
            "min_slack": report.min_slack,
        }),
        failures,
        files: Vec::new(),
    })
}
