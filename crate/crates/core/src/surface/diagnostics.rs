use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::continued::{convergents, loop_measure, Convergent, Slope};
use super::{intersection_number, lift_window, FuchsianSurface, SlopeCurve, Window, WindowLift};
use crate::error::{Error, Result};
use crate::hyperbolic::{GeodesicH2, Side};
use crate::lamination::{random, ConvexRegion, FiniteLamination, HalfPlane, Leaf};

/// How many convergents past the last reported one the proxy curve sits.
pub const PROXY_OFFSET: usize = 4;

/// Least-squares slope of `ys` against `xs`; `None` with fewer than two points.
pub fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Convergents, curves and window lifts shared by the per-index diagnostics.
struct Setup {
    alpha: f64,
    convergents: Vec<Convergent>,
    proxy: SlopeCurve,
    proxy_lift: WindowLift,
    curves: Vec<SlopeCurve>,
    lifts: Vec<WindowLift>,
}

impl Setup {
    fn new(surface: &FuchsianSurface, alpha: &Slope, i_max: usize, window: &Window, depth: usize) -> Result<Self> {
        if i_max == 0 {
            return Err(Error::InvalidInput("i_max must be at least 1".into()));
        }
        let n = i_max + PROXY_OFFSET;
        let convergents = convergents(alpha, n + 1)?;
        let curve = |c: &Convergent| SlopeCurve::new(surface, c.p as i64, c.q as i64);
        let proxy = curve(&convergents[n])?;
        let proxy_lift = lift_window(surface, &[(proxy.clone(), 1.0)], window, depth)?;
        let curves = convergents[1..=i_max].iter().map(curve).collect::<Result<Vec<_>>>()?;
        let lifts = curves
            .iter()
            .map(|c| lift_window(surface, &[(c.clone(), 1.0)], window, depth))
            .collect::<Result<Vec<_>>>()?;
        Ok(Setup {
            alpha: alpha.value(),
            convergents,
            proxy,
            proxy_lift,
            curves,
            lifts,
        })
    }

    /// Proxy lamination with the weight `1/q_N`, so that its intersection with the
    /// slope `p/q` is `|q p_N/q_N − p|`, the measure of the slope-`p_N/q_N` approximant.
    fn weighted_proxy(&self) -> Result<FiniteLamination> {
        self.proxy_lift.lamination.scaled(1.0 / self.proxy.q as f64)
    }

    fn angle(&self, k: usize, window: &Window) -> Option<f64> {
        let c = &self.curves[k];
        if c.slope() == self.proxy.slope() {
            return Some(0.0);
        }
        self.lifts[k]
            .lamination
            .leaves()
            .iter()
            .filter_map(|l| window_angle(&self.proxy_lift.lamination, &l.geodesic, window))
            .fold(None, |acc: Option<f64>, a| Some(acc.map_or(a, |b| b.max(a))))
    }

    fn norm_row(&self, k: usize, window: &Window) -> Result<NormRow> {
        let c = &self.curves[k];
        let conv = self.convergents[k + 1];
        let measure = loop_measure(self.alpha, conv.p, conv.q);
        let crossings = intersection_number(c.slope(), self.proxy.slope());
        let weight = if crossings == 0 {
            0.0
        } else {
            measure / crossings as f64
        };
        let nearest = self.lifts[k]
            .lamination
            .leaves()
            .iter()
            .map(|l| l.geodesic)
            .min_by(|a, b| {
                let d = |g: &GeodesicH2| g.signed_distance(&window.center).abs();
                d(a).total_cmp(&d(b))
            });
        let (leaves, norm) = match nearest {
            Some(axis) if weight > 0.0 => {
                let crossing: Vec<Leaf> = self
                    .proxy_lift
                    .lamination
                    .leaves()
                    .iter()
                    .filter(|l| l.geodesic.crosses(&axis))
                    .map(|l| Leaf::new(l.geodesic, weight))
                    .collect();
                let lam = FiniteLamination::new(crossing)?;
                (lam.len(), lam.norm())
            }
            _ => (0, 0.0),
        };
        Ok(NormRow {
            i: k + 1,
            p: conv.p,
            q: conv.q,
            measure,
            crossings_per_period: crossings,
            weight,
            leaves,
            norm,
        })
    }
}

/// Largest crossing angle between `g` and the leaves of `lam`, over crossings inside
/// the window.
fn window_angle(lam: &FiniteLamination, g: &GeodesicH2, window: &Window) -> Option<f64> {
    lam.leaves()
        .iter()
        .filter(|l| l.geodesic.intersection_point(g).is_some_and(|z| window.contains(&z)))
        .filter_map(|l| l.geodesic.crossing_angle(g))
        .fold(None, |acc: Option<f64>, a| Some(acc.map_or(a, |b| b.max(a))))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleRow {
    pub i: usize,
    pub p: u64,
    pub q: u64,
    /// Largest angle between lifts of the convergent curve and of the proxy curve
    /// crossing inside the window; `None` when they do not cross there.
    pub proxy_angle: Option<f64>,
}

/// Proxy angles for the convergents `1..=i_max` against convergent `i_max + 4`.
pub fn angle_decay(
    surface: &FuchsianSurface,
    alpha: &Slope,
    i_max: usize,
    window: &Window,
    depth: usize,
) -> Result<Vec<AngleRow>> {
    let s = Setup::new(surface, alpha, i_max, window, depth)?;
    Ok((0..i_max)
        .map(|k| AngleRow {
            i: k + 1,
            p: s.convergents[k + 1].p,
            q: s.convergents[k + 1].q,
            proxy_angle: s.angle(k, window),
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormRow {
    pub i: usize,
    pub p: u64,
    pub q: u64,
    pub measure: f64,
    /// Proxy lifts crossing one period of an axis of the convergent curve.
    pub crossings_per_period: u64,
    /// Proxy weight making one period carry `measure`.
    pub weight: f64,
    pub leaves: usize,
    pub norm: f64,
}

/// Norms of the proxy leaves crossing the lift of each convergent curve nearest the
/// window centre, weighted so that one period carries `|q_i α − p_i|`.
pub fn norm_decay(
    surface: &FuchsianSurface,
    alpha: &Slope,
    i_max: usize,
    window: &Window,
    depth: usize,
) -> Result<Vec<NormRow>> {
    let s = Setup::new(surface, alpha, i_max, window, depth)?;
    (0..i_max).map(|k| s.norm_row(k, window)).collect()
}

/// Parameters of the Monte-Carlo search over segments avoiding a multicurve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NtSampling {
    pub length_bound: f64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for NtSampling {
    fn default() -> Self {
        NtSampling {
            length_bound: 1.0,
            samples: 20_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NtEstimate {
    pub samples: usize,
    /// Samples that cross no lift of the multicurve.
    pub accepted: usize,
    pub max_measure: f64,
}

/// Sampled supremum of the transversal measure of `proxy` over segments in the
/// window shorter than the length bound that cross no lift of the multicurve.
pub fn nt_norm_estimate(
    surface: &FuchsianSurface,
    multicurve: &[(SlopeCurve, f64)],
    proxy: &FiniteLamination,
    window: &Window,
    depth: usize,
    sampling: NtSampling,
) -> Result<NtEstimate> {
    let lifts = lift_window(surface, multicurve, window, depth)?.lamination;
    let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
    let mut accepted = 0;
    let mut max_measure: f64 = 0.0;
    for _ in 0..sampling.samples {
        let s = random::segment_in_disk(&mut rng, &window.center, window.radius, sampling.length_bound);
        if !lifts.crossings(&s).crossings.is_empty() {
            continue;
        }
        accepted += 1;
        max_measure = max_measure.max(proxy.transversal_measure(&s));
    }
    Ok(NtEstimate {
        samples: sampling.samples,
        accepted,
        max_measure,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentNorm {
    /// Vertex of the dual tree of the curve's lifts.
    pub region: usize,
    /// Lifts bounding the component.
    pub boundary: Vec<usize>,
    pub leaves: usize,
    pub norm: f64,
    pub restricted_norm: f64,
    pub boundary_norms: Vec<f64>,
    /// `restricted_norm + 2·max(boundary_norms) − norm`.
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentReport {
    pub p: i64,
    pub q: i64,
    pub lifts: usize,
    pub components: Vec<ComponentNorm>,
    pub max_norm: f64,
    pub min_slack: f64,
}

impl ComponentReport {
    /// The splitting inequality holds on every component up to `tol`.
    pub fn holds(&self, tol: f64) -> bool {
        self.min_slack >= -tol
    }
}

/// Splits the window by the lifts of `curve` into open complementary regions and
/// compares, for each, the norm of the proxy leaves meeting it with the norm over
/// segments inside it plus twice the largest norm of leaves crossing a boundary lift.
pub fn component_norm_report(
    surface: &FuchsianSurface,
    curve: &SlopeCurve,
    proxy: &FiniteLamination,
    window: &Window,
    depth: usize,
) -> Result<ComponentReport> {
    let lifts = lift_window(surface, &[(curve.clone(), 1.0)], window, depth)?.lamination;
    let tree = lifts.dual_tree();
    let mut components = Vec::with_capacity(tree.vertex_count());
    for r in 0..tree.vertex_count() {
        let boundary: Vec<usize> = (0..lifts.len())
            .filter(|&j| {
                let (a, b) = tree.edge(j);
                a == r || b == r
            })
            .collect();
        let region = if boundary.is_empty() {
            ConvexRegion::Plane
        } else {
            ConvexRegion::polygon(
                boundary
                    .iter()
                    .map(|&j| {
                        let side = if tree.is_right_of(r, j) {
                            Side::Right
                        } else {
                            Side::Left
                        };
                        HalfPlane::open(lifts.leaf(j).geodesic, side)
                    })
                    .collect(),
            )
        };
        // thin strips between nearly asymptotic lifts are legitimate components, so
        // membership is decided by chords without the interior-point validation
        let inside: Vec<usize> = (0..proxy.len())
            .filter(|&i| region.meets_geodesic(&proxy.leaf(i).geodesic))
            .collect();
        let members = proxy.subset(&inside);
        let norm = members.norm();
        let restricted_norm = members.norm_restricted(&region);
        let boundary_norms: Vec<f64> = boundary
            .iter()
            .map(|&j| {
                let g = lifts.leaf(j).geodesic;
                let crossing: Vec<Leaf> = proxy
                    .leaves()
                    .iter()
                    .filter(|l| l.geodesic.crosses(&g))
                    .copied()
                    .collect();
                FiniteLamination::new(crossing).map(|l| l.norm())
            })
            .collect::<Result<_>>()?;
        let max_boundary = boundary_norms.iter().copied().fold(0.0, f64::max);
        components.push(ComponentNorm {
            region: r,
            boundary,
            leaves: members.len(),
            norm,
            restricted_norm,
            slack: restricted_norm + 2.0 * max_boundary - norm,
            boundary_norms,
        });
    }
    Ok(ComponentReport {
        p: curve.p,
        q: curve.q,
        lifts: lifts.len(),
        max_norm: components.iter().map(|c| c.norm).fold(0.0, f64::max),
        min_slack: components.iter().map(|c| c.slack).fold(f64::INFINITY, f64::min),
        components,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxRow {
    pub i: usize,
    pub p: u64,
    pub q: u64,
    pub measure: f64,
    pub proxy_angle: Option<f64>,
    pub window_norm: f64,
    /// Largest component norm of the `1/q_N`-weighted proxy after cutting along the curve.
    pub component_norm: f64,
    pub component_slack: f64,
}

/// The approximating sequence of a slope with its decay diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxSequence {
    pub slope: String,
    pub alpha: f64,
    pub partial_quotients: Vec<u64>,
    pub proxy_index: usize,
    pub proxy_p: u64,
    pub proxy_q: u64,
    pub proxy_leaves: usize,
    pub depth: usize,
    pub window: Window,
    pub depth_limited: bool,
    pub rows: Vec<ApproxRow>,
    pub measure_trend: Option<f64>,
    pub angle_trend: Option<f64>,
    pub norm_trend: Option<f64>,
}

impl ApproxSequence {
    pub fn measures_strictly_decrease(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].measure < w[0].measure)
    }

    /// Every computed trend is negative; trends with fewer than two rows are skipped.
    pub fn trends_decrease(&self) -> bool {
        [self.measure_trend, self.angle_trend, self.norm_trend]
            .iter()
            .all(|t| t.is_none_or(|s| s < 0.0))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,p,q,measure,proxy_angle,window_norm,component_norm,component_slack\n");
        for r in &self.rows {
            let angle = r.proxy_angle.map_or(String::from("nan"), |a| format!("{a:.12e}"));
            out.push_str(&format!(
                "{},{},{},{:.12e},{},{:.12e},{:.12e},{:.12e}\n",
                r.i, r.p, r.q, r.measure, angle, r.window_norm, r.component_norm, r.component_slack
            ));
        }
        out
    }
}

/// Convergents `1..=i_max` of `alpha` with their measures, proxy angles, window norms
/// and component norms against the proxy curve `i_max + 4`.
pub fn approximation(
    surface: &FuchsianSurface,
    alpha: &Slope,
    i_max: usize,
    window: &Window,
    depth: usize,
) -> Result<ApproxSequence> {
    let s = Setup::new(surface, alpha, i_max, window, depth)?;
    let proxy = s.weighted_proxy()?;
    let mut rows = Vec::with_capacity(i_max);
    for k in 0..i_max {
        let norm = s.norm_row(k, window)?;
        let comp = component_norm_report(surface, &s.curves[k], &proxy, window, depth)?;
        rows.push(ApproxRow {
            i: norm.i,
            p: norm.p,
            q: norm.q,
            measure: norm.measure,
            proxy_angle: s.angle(k, window),
            window_norm: norm.norm,
            component_norm: comp.max_norm,
            component_slack: comp.min_slack,
        });
    }
    let trend = |f: &dyn Fn(&ApproxRow) -> Option<f64>| {
        let pts: Vec<(f64, f64)> = rows.iter().filter_map(|r| f(r).map(|y| (r.i as f64, y))).collect();
        least_squares_slope(&pts)
    };
    let n = i_max + PROXY_OFFSET;
    Ok(ApproxSequence {
        slope: alpha.to_string(),
        alpha: s.alpha,
        partial_quotients: s.convergents.iter().map(|c| c.partial_quotient).collect(),
        proxy_index: n,
        proxy_p: s.convergents[n].p,
        proxy_q: s.convergents[n].q,
        proxy_leaves: s.proxy_lift.lamination.len(),
        depth,
        window: *window,
        depth_limited: s.proxy_lift.depth_limited || s.lifts.iter().any(|l| l.depth_limited),
        measure_trend: trend(&|r| Some(r.measure)),
        angle_trend: trend(&|r| r.proxy_angle),
        norm_trend: trend(&|r| Some(r.window_norm)),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn golden_setup(i_max: usize, depth: usize) -> (FuchsianSurface, Slope, Window, usize, usize) {
        (
            FuchsianSurface::default_torus(),
            Slope::golden(),
            Window::default(),
            i_max,
            depth,
        )
    }

    #[test]
    fn least_squares_slope_of_a_line() {
        let pts: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, 3.0 - 2.0 * i as f64)).collect();
        assert_abs_diff_eq!(least_squares_slope(&pts).unwrap(), -2.0, epsilon = 1e-12);
        assert!(least_squares_slope(&pts[..1]).is_none());
    }

    #[test]
    fn golden_sequence_decays() {
        let (s, a, w, i_max, depth) = golden_setup(6, 6);
        let seq = approximation(&s, &a, i_max, &w, depth).unwrap();
        let measures: Vec<f64> = seq.rows.iter().map(|r| r.measure).collect();
        for (got, want) in measures.iter().zip([0.382, 0.236, 0.146, 0.090, 0.056, 0.034]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-3);
        }
        assert!(seq.measures_strictly_decrease());
        assert!(
            seq.rows.iter().all(|r| r.proxy_angle.is_some_and(|x| x > 0.0)),
            "{seq:#?}"
        );
        assert!(seq.trends_decrease(), "{seq:#?}");
        assert!(seq.rows.iter().all(|r| r.component_slack >= -1e-9));
        // one period of crossings carries the loop measure
        for r in norm_decay(&s, &a, i_max, &w, depth).unwrap() {
            assert_abs_diff_eq!(r.weight * r.crossings_per_period as f64, r.measure, epsilon = 1e-15);
        }
    }

    #[test]
    fn a_curve_against_itself() {
        let s = FuchsianSurface::default_torus();
        let w = Window::default();
        let c = SlopeCurve::new(&s, 3, 5).unwrap();
        let own = lift_window(&s, &[(c.clone(), 0.2)], &w, 5).unwrap().lamination;
        let report = component_norm_report(&s, &c, &own, &w, 5).unwrap();
        assert!(
            report.components.iter().all(|k| k.norm == 0.0 && k.leaves == 0),
            "{report:?}"
        );
        let est = nt_norm_estimate(
            &s,
            &[(c, 1.0)],
            &own,
            &w,
            5,
            NtSampling {
                samples: 2000,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(est.max_measure, 0.0);
        assert!(est.accepted > 0);
    }

    #[test]
    fn nt_estimate_shrinks_with_finer_curves() {
        let s = FuchsianSurface::default_torus();
        let w = Window::default();
        let conv = convergents(&Slope::golden(), 12).unwrap();
        let proxy = SlopeCurve::new(&s, conv[11].p as i64, conv[11].q as i64).unwrap();
        let lam = lift_window(&s, &[(proxy.clone(), 1.0 / proxy.q as f64)], &w, 6)
            .unwrap()
            .lamination;
        let est: Vec<f64> = [1, 3, 5, 7]
            .iter()
            .map(|&i| {
                let c = SlopeCurve::new(&s, conv[i].p as i64, conv[i].q as i64).unwrap();
                nt_norm_estimate(
                    &s,
                    &[(c, 1.0)],
                    &lam,
                    &w,
                    6,
                    NtSampling {
                        samples: 4000,
                        ..Default::default()
                    },
                )
                .unwrap()
                .max_measure
            })
            .collect();
        assert!(est[0] > 0.0);
        let pts: Vec<(f64, f64)> = est.iter().enumerate().map(|(k, &y)| (k as f64, y)).collect();
        assert!(least_squares_slope(&pts).unwrap() < 0.0, "{est:?}");
    }

    #[test]
    fn shallow_depth_flags_instead_of_failing() {
        let s = FuchsianSurface::default_torus();
        let w = Window::new(crate::hyperbolic::PointH2::new(50.0, 1e-6).unwrap(), 0.2).unwrap();
        let rows = angle_decay(&s, &Slope::golden(), 2, &w, 0).unwrap();
        assert!(rows.iter().all(|r| r.proxy_angle.is_none()));
        let norms = norm_decay(&s, &Slope::golden(), 2, &w, 0).unwrap();
        assert!(norms.iter().all(|r| r.norm == 0.0));
    }
}
