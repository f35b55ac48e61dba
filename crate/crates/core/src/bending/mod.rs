//! Bending maps of finite laminations from H² into H³, bent-path traces and the
//! quasi-isometry certificate.

mod certificate;
mod checks;
mod plane;
mod trace;

pub use certificate::{
    case_bounds, check_delta, qi_constants, select_delta, sublamination_indices, verify_hypotheses, CaseBounds,
    Certificate, HypothesisReport, DEFAULT_THETA0,
};
pub use checks::{
    check_angle_bounds, check_injectivity, check_qi, AngleBoundReport, InjectivityReport, QiReport, TraceBoundRecord,
};
pub use plane::Plane;
pub use trace::{bend_trace, exact_trace, BendTrace, TraceSample};

use std::collections::VecDeque;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::{dist_h3, BoundaryPoint, GeodesicH2, MobiusMap, PointH2, PointH3, Side};
use crate::lamination::{random::point_in_disk, Chord, ConvexRegion, DualTree, FiniteLamination, Leaf, Location};
use crate::precision::precision;

/// Which way the surface folds along a leaf.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum BendDirection {
    /// Regions on the right of a leaf turn by `+w` about the leaf oriented `p → q`.
    #[default]
    Positive,
    Negative,
}

impl BendDirection {
    pub fn sign(self) -> f64 {
        match self {
            BendDirection::Positive => 1.0,
            BendDirection::Negative => -1.0,
        }
    }
}

/// A lamination with the region held fixed by the bending map.
#[derive(Debug, Clone)]
pub struct BendConfig {
    lamination: FiniteLamination,
    base_region: usize,
    direction: BendDirection,
    tree: DualTree,
    /// Isometry applied to each region, indexed like the dual tree's vertices.
    region_maps: Vec<MobiusMap>,
    /// Distance from the base region in the dual tree.
    depth: Vec<usize>,
}

impl BendConfig {
    pub fn new(lamination: FiniteLamination, base_region: usize, direction: BendDirection) -> Result<Self> {
        let tree = lamination.dual_tree();
        if base_region >= tree.vertex_count() {
            return Err(Error::InvalidInput(format!(
                "base region {base_region} out of range (lamination has {} regions)",
                tree.vertex_count()
            )));
        }
        let n = tree.vertex_count();
        let mut adjacency = vec![Vec::new(); n];
        for e in 0..tree.edge_count() {
            let (l, r) = tree.edge(e);
            adjacency[l].push((r, e));
            adjacency[r].push((l, e));
        }
        let mut region_maps = vec![MobiusMap::identity(); n];
        let mut depth = vec![usize::MAX; n];
        depth[base_region] = 0;
        let mut queue = VecDeque::from([base_region]);
        let sign = direction.sign();
        while let Some(v) = queue.pop_front() {
            for &(w, e) in &adjacency[v] {
                if depth[w] != usize::MAX {
                    continue;
                }
                depth[w] = depth[v] + 1;
                let leaf = lamination.leaf(e);
                let turn = if tree.is_right_of(w, e) { 1.0 } else { -1.0 };
                let rot = MobiusMap::rotate_about(&leaf.geodesic.to_h3(), sign * turn * leaf.weight);
                region_maps[w] = region_maps[v].compose(&rot);
                queue.push_back(w);
            }
        }
        Ok(BendConfig {
            lamination,
            base_region,
            direction,
            tree,
            region_maps,
            depth,
        })
    }

    /// Base region = the region containing `z` (its left region if `z` lies on a leaf).
    pub fn at_point(lamination: FiniteLamination, z: &PointH2, direction: BendDirection) -> Result<Self> {
        let r = lamination.dual_tree().project(z);
        Self::new(lamination, r, direction)
    }

    /// Base region containing `i`, positive direction.
    pub fn standard(lamination: FiniteLamination) -> Self {
        let i = PointH2::new(0.0, 1.0).expect("valid point");
        Self::at_point(lamination, &i, BendDirection::Positive).expect("projected region is valid")
    }

    pub fn lamination(&self) -> &FiniteLamination {
        &self.lamination
    }

    pub fn base_region(&self) -> usize {
        self.base_region
    }

    pub fn direction(&self) -> BendDirection {
        self.direction
    }

    pub fn tree(&self) -> &DualTree {
        &self.tree
    }

    pub fn region_map(&self, r: usize) -> MobiusMap {
        self.region_maps[r]
    }

    /// The region beside `leaf` that is nearer the base region.
    pub fn base_side_region(&self, leaf: usize) -> usize {
        let (l, r) = self.tree.edge(leaf);
        if self.depth[l] <= self.depth[r] {
            l
        } else {
            r
        }
    }

    /// The region beside `leaf` that is farther from the base region.
    pub fn far_side_region(&self, leaf: usize) -> usize {
        let (l, r) = self.tree.edge(leaf);
        if self.depth[l] <= self.depth[r] {
            r
        } else {
            l
        }
    }

    /// Region used to evaluate the bending map at `x`.
    pub fn region_of(&self, x: &PointH2) -> usize {
        match self.tree.locate(x) {
            Location::Region(r) => r,
            Location::OnLeaf { leaf, .. } => self.base_side_region(leaf),
        }
    }

    /// A point strictly inside region `r`.
    pub fn region_point(&self, r: usize) -> PointH2 {
        region_point(&self.lamination, &self.tree, r)
    }
}

pub(crate) fn region_point(lam: &FiniteLamination, tree: &DualTree, r: usize) -> PointH2 {
    if lam.is_empty() {
        return PointH2::new(0.0, 1.0).expect("valid point");
    }
    let e = (0..tree.edge_count())
        .find(|&e| {
            let (a, b) = tree.edge(e);
            a == r || b == r
        })
        .expect("every region borders a leaf");
    let g = lam.leaf(e).geodesic;
    let foot = Chord::full(g).point_at(0.0);
    let gap = lam
        .leaves()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != e)
        .map(|(_, l)| l.geodesic.signed_distance(&foot).abs())
        .fold(1.0, f64::min);
    let side = if tree.is_right_of(r, e) {
        Side::Right
    } else {
        Side::Left
    };
    offset_from(&g, &foot, side, gap / 2.0)
}

/// The point at distance `dist` from `foot` (on `g`) along the perpendicular, on `side`.
pub(crate) fn offset_from(g: &GeodesicH2, foot: &PointH2, side: Side, dist: f64) -> PointH2 {
    let n = g.normalizing_map();
    let w = n.apply_h2(foot).expect("real map");
    let r = w.y();
    // in normalized coordinates the right side is Re > 0 and the normal is |z| = r
    let angle = std::f64::consts::FRAC_PI_2 - side.sign() * 2.0 * (dist / 2.0).tanh().atan();
    let z = PointH2::new(r * angle.cos(), r * angle.sin()).expect("upper half-plane");
    n.inverse().apply_h2(&z).expect("real map")
}

/// The bending map at `x`.
pub fn bend_point(cfg: &BendConfig, x: &PointH2) -> PointH3 {
    cfg.region_maps[cfg.region_of(x)].apply_h3(&x.to_h3())
}

/// Tangent plane(s) of the bent surface at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TangentPlane {
    Region {
        region: usize,
        plane: Plane,
    },
    /// On a leaf: the planes of the two adjacent regions, which meet along the
    /// image of the leaf at external angle equal to its weight.
    Leaf {
        leaf: usize,
        base_side: Plane,
        far_side: Plane,
    },
}

pub fn tangent_plane(cfg: &BendConfig, x: &PointH2) -> TangentPlane {
    match cfg.tree.locate(x) {
        Location::Region(r) => TangentPlane::Region {
            region: r,
            plane: Plane::vertical().transformed(&cfg.region_maps[r]),
        },
        Location::OnLeaf { leaf, .. } => TangentPlane::Leaf {
            leaf,
            base_side: Plane::vertical().transformed(&cfg.region_maps[cfg.base_side_region(leaf)]),
            far_side: Plane::vertical().transformed(&cfg.region_maps[cfg.far_side_region(leaf)]),
        },
    }
}

/// Endpoint on Ĉ of the ray from the bent image of `x` orthogonal to its tangent
/// plane, on the side away from the convex hull of the bent surface.
pub fn develop_point(cfg: &BendConfig, x: &PointH2) -> Result<BoundaryPoint> {
    match cfg.tree.locate(x) {
        Location::OnLeaf { leaf, .. } => Err(Error::OnLamination(leaf)),
        Location::Region(r) => Ok(cfg.region_maps[r].apply(Complex64::new(x.x(), -x.y()))),
    }
}

/// Maximum distance between the bending maps of `L` and of its intersection with a
/// convex region, over sampled points of the region.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgreementReport {
    pub base_point: PointH2,
    pub leaves_kept: usize,
    pub samples: usize,
    pub max_deviation: f64,
}

pub fn agreement_on_intersection(
    l: &FiniteLamination,
    x: &ConvexRegion,
    samples: usize,
    seed: u64,
) -> Result<AgreementReport> {
    let sub = l.intersection(x)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = base_point_in(l, x, &mut rng)
        .ok_or_else(|| Error::InvalidInput("region has no point off the lamination to fix".into()))?;
    let full = BendConfig::at_point(l.clone(), &base, BendDirection::Positive)?;
    let restricted = BendConfig::at_point(sub.clone(), &base, BendDirection::Positive)?;
    let points = sample_region(x, &base, samples, &mut rng);
    let mut max_deviation: f64 = 0.0;
    for p in &points {
        let d = dist_h3(&bend_point(&full, p), &bend_point(&restricted, p));
        max_deviation = max_deviation.max(d);
    }
    Ok(AgreementReport {
        base_point: base,
        leaves_kept: sub.len(),
        samples: points.len(),
        max_deviation,
    })
}

fn off_lamination(l: &FiniteLamination, z: &PointH2) -> bool {
    let tol = 1e3 * precision().endpoint;
    l.leaves().iter().all(|leaf| leaf.geodesic.side_value(z).abs() > tol)
}

fn base_point_in<R: Rng>(l: &FiniteLamination, x: &ConvexRegion, rng: &mut R) -> Option<PointH2> {
    let start = x.interior_point()?;
    if off_lamination(l, &start) {
        return Some(start);
    }
    (0..1000)
        .map(|_| sample_near(x, &start, rng))
        .find(|z| x.contains(z, 0.0) && off_lamination(l, z))
}

fn sample_near<R: Rng>(x: &ConvexRegion, centre: &PointH2, rng: &mut R) -> PointH2 {
    match x {
        ConvexRegion::Geodesic { geodesic } => {
            let c = Chord::full(*geodesic);
            c.point_at(c.param_of(centre) + rng.gen_range(-3.0..3.0))
        }
        _ => point_in_disk(rng, centre, 3.0),
    }
}

fn sample_region<R: Rng>(x: &ConvexRegion, centre: &PointH2, n: usize, rng: &mut R) -> Vec<PointH2> {
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0;
    while out.len() < n && attempts < 1000 * n.max(1) {
        attempts += 1;
        let z = sample_near(x, centre, rng);
        let inside = match x {
            ConvexRegion::Geodesic { .. } => true,
            _ => x.contains(&z, 0.0),
        };
        if inside {
            out.push(z);
        }
    }
    out
}

/// `copies` parallel leaves of weight `w / copies` per leaf, spread symmetrically
/// over a band of hyperbolic width `spread` across the original leaf.
pub fn refine(l: &FiniteLamination, copies: usize, spread: f64) -> Result<FiniteLamination> {
    if copies == 0 {
        return Err(Error::InvalidInput("refinement needs at least one copy".into()));
    }
    let mut leaves = Vec::with_capacity(l.len() * copies);
    for leaf in l.leaves() {
        let n = leaf.geodesic.normalizing_map();
        let inv = n.inverse();
        for j in 0..copies {
            let s = if copies == 1 {
                0.0
            } else {
                spread * (j as f64 / (copies - 1) as f64 - 0.5)
            };
            // translation by s along the geodesic (−1, 1), which is orthogonal to (0, ∞)
            let (c, h) = ((s / 2.0).cosh(), (s / 2.0).sinh());
            let shift = MobiusMap::from_real(c, h, h, c).expect("unit determinant");
            let axis = GeodesicH2::vertical(0.0).expect("valid");
            let g = inv.apply_geodesic_h2(&shift.apply_geodesic_h2(&axis)?)?;
            leaves.push(Leaf::new(g, leaf.weight / copies as f64));
        }
    }
    FiniteLamination::new(leaves)
}

/// Sup-distance between bending maps of successive refinements.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefinementReport {
    /// `sup_x dist(β_k(x), β_{k+1}(x))` for `k = 0, 1, ..`.
    pub successive: Vec<f64>,
    /// `sup_x dist(β_k(x), β(x))` against the unrefined lamination.
    pub to_limit: Vec<f64>,
    /// The distance to the unrefined map decreases from level 1 on and the last
    /// successive difference is at most half the first.
    pub cauchy: bool,
}

/// Bends against refinements with `2^k` copies in bands of width `spread / 2^k` and
/// compares the maps on `points`, all normalized at `base`.
pub fn refinement_diagnostic(
    l: &FiniteLamination,
    base: &PointH2,
    points: &[PointH2],
    levels: usize,
    spread: f64,
) -> Result<RefinementReport> {
    let limit = BendConfig::at_point(l.clone(), base, BendDirection::Positive)?;
    let mut maps = Vec::with_capacity(levels);
    for k in 0..levels {
        let m = 1usize << k;
        let lk = refine(l, m, spread / m as f64)?;
        maps.push(BendConfig::at_point(lk, base, BendDirection::Positive)?);
    }
    let sup = |a: &BendConfig, b: &BendConfig| {
        points
            .iter()
            .map(|p| dist_h3(&bend_point(a, p), &bend_point(b, p)))
            .fold(0.0, f64::max)
    };
    let successive: Vec<f64> = maps.windows(2).map(|w| sup(&w[0], &w[1])).collect();
    let to_limit: Vec<f64> = maps.iter().map(|m| sup(m, &limit)).collect();
    let decreasing = to_limit
        .iter()
        .skip(1)
        .collect::<Vec<_>>()
        .windows(2)
        .all(|w| w[1] <= w[0]);
    let cauchy = decreasing
        && match (successive.first(), successive.last()) {
            (Some(a), Some(b)) => *b <= 0.5 * a,
            _ => false,
        };
    Ok(RefinementReport {
        successive,
        to_limit,
        cauchy,
    })
}
