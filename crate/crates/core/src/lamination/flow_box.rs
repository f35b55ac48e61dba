use serde::Serialize;

use super::{ordered_sum, FiniteLamination, GeodesicSegment};
use crate::error::{Error, Result};
use crate::hyperbolic::{GeodesicH2, Ideal, MobiusMap, PointH2};

/// Extension of the segment at both ends before the transversal sides are drawn.
const OVERHANG: f64 = 0.25;

/// A geodesic quadrilateral around a segment of a leaf.
///
/// The two transversal sides are orthogonal to the leaf at the ends of the
/// extended segment; the two long sides are geodesics on either side of the
/// leaf that cross no leaf. Every other leaf meeting the box crosses both
/// transversal sides.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowBox {
    pub leaf: usize,
    /// Corners in order: bottom-left, bottom-right, top-right, top-left
    /// (bottom = the transversal side through the start of the segment).
    pub corners: [PointH2; 4],
    pub left_side: GeodesicH2,
    pub right_side: GeodesicH2,
    /// Leaves other than `leaf` meeting the box.
    pub crossing_leaves: Vec<usize>,
    /// Total weight of `crossing_leaves`; the central leaf's own weight is not counted.
    pub height: f64,
}

impl FlowBox {
    pub fn transversal_sides(&self) -> [GeodesicSegment; 2] {
        [
            GeodesicSegment::new(self.corners[0], self.corners[1]).expect("distinct corners"),
            GeodesicSegment::new(self.corners[3], self.corners[2]).expect("distinct corners"),
        ]
    }

    pub fn long_sides(&self) -> [GeodesicSegment; 2] {
        [
            GeodesicSegment::new(self.corners[0], self.corners[3]).expect("distinct corners"),
            GeodesicSegment::new(self.corners[1], self.corners[2]).expect("distinct corners"),
        ]
    }
}

/// One side of the leaf in normalized coordinates (leaf = imaginary axis): the
/// leaves there, as `(near, far)` endpoint moduli with `0 < near < far`.
struct SidePick {
    boundary: (f64, f64),
    included: Vec<usize>,
}

fn pick_side(lam: &FiniteLamination, candidates: &[(usize, f64, f64)], rho0: f64, rho1: f64, budget: f64) -> SidePick {
    // long side = half circle over (rho0·e^{-k}, rho1·e^{k}); larger k hugs the leaf
    let mut breaks: Vec<f64> = candidates
        .iter()
        .flat_map(|&(_, u, v)| [(rho0 / u).ln(), (v / rho1).ln()])
        .filter(|k| *k > 0.0 && k.is_finite())
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let mut trial: Vec<f64> = Vec::new();
    let mut prev = 0.0;
    for &b in &breaks {
        trial.push((prev + b) / 2.0);
        prev = b;
    }
    trial.push(prev + 1.0);
    for k in trial {
        let (a, b) = (rho0 * (-k).exp(), rho1 * k.exp());
        let mut ok = true;
        let mut included = Vec::new();
        for &(i, u, v) in candidates {
            let crosses = (u < a && a < v && v < b) || (a < u && u < b && b < v);
            if crosses {
                ok = false;
                break;
            }
            if u < a && v > b {
                included.push(i);
            }
        }
        if !ok {
            continue;
        }
        let height = ordered_sum(included.iter().map(|&i| lam.leaf(i).weight));
        if height < budget {
            return SidePick {
                boundary: (a, b),
                included,
            };
        }
    }
    unreachable!("the last trial encloses no leaf and has height zero")
}

pub(super) fn flow_box(lam: &FiniteLamination, s: &GeodesicSegment, epsilon: f64) -> Result<FlowBox> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidInput("flow box height bound must be positive".into()));
    }
    let tol = 1e-9;
    let leaf = lam
        .leaves()
        .iter()
        .position(|l| l.geodesic.contains(&s.a(), tol) && l.geodesic.contains(&s.b(), tol))
        .ok_or_else(|| Error::InvalidInput("segment does not lie on a leaf".into()))?;
    let g = lam.leaf(leaf).geodesic;
    let n: MobiusMap = g.normalizing_map();
    let ya = n.apply_h2(&s.a())?.y().ln();
    let yb = n.apply_h2(&s.b())?.y().ln();
    let (s0, s1) = (ya.min(yb) - OVERHANG, ya.max(yb) + OVERHANG);
    let (rho0, rho1) = (s0.exp(), s1.exp());

    let mut right = Vec::new();
    let mut left = Vec::new();
    for (i, l) in lam.leaves().iter().enumerate() {
        if i == leaf {
            continue;
        }
        let u = n.apply_ideal(l.geodesic.p())?;
        let v = n.apply_ideal(l.geodesic.q())?;
        let (Ideal::Real(u), Ideal::Real(v)) = (u, v) else {
            continue;
        };
        let (near, far) = (u.abs().min(v.abs()), u.abs().max(v.abs()));
        if u > 0.0 {
            right.push((i, near, far));
        } else {
            left.push((i, near, far));
        }
    }
    let r = pick_side(lam, &right, rho0, rho1, epsilon);
    let used = ordered_sum(r.included.iter().map(|&i| lam.leaf(i).weight));
    let l = pick_side(lam, &left, rho0, rho1, epsilon - used);

    let inv = n.inverse();
    let corner = |rho: f64, (a, b): (f64, f64), sign: f64| -> Result<PointH2> {
        // intersection of |z| = rho with the half circle over (a, b)
        let x = (rho * rho + a * b) / (a + b);
        let y = (rho * rho - x * x).max(0.0).sqrt();
        inv.apply_h2(&PointH2::new(sign * x, y)?)
    };
    let corners = [
        corner(rho0, l.boundary, -1.0)?,
        corner(rho0, r.boundary, 1.0)?,
        corner(rho1, r.boundary, 1.0)?,
        corner(rho1, l.boundary, -1.0)?,
    ];
    let side_geodesic = |(a, b): (f64, f64), sign: f64| -> Result<GeodesicH2> {
        inv.apply_geodesic_h2(&GeodesicH2::from_reals(sign * a, sign * b)?)
    };
    let mut crossing_leaves = r.included;
    crossing_leaves.extend(l.included);
    crossing_leaves.sort_unstable();
    let height = ordered_sum(crossing_leaves.iter().map(|&i| lam.leaf(i).weight));
    Ok(FlowBox {
        leaf,
        corners,
        left_side: side_geodesic(l.boundary, -1.0)?,
        right_side: side_geodesic(r.boundary, 1.0)?,
        crossing_leaves,
        height,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg_on_unit_circle() -> GeodesicSegment {
        let (a, b) = (1.2f64, 1.9f64);
        GeodesicSegment::new(
            PointH2::new(a.cos(), a.sin()).unwrap(),
            PointH2::new(b.cos(), b.sin()).unwrap(),
        )
        .unwrap()
    }

    /// Every leaf meeting the box crosses both transversal sides and neither long side.
    fn check_box(lam: &FiniteLamination, fb: &FlowBox) {
        let [bottom, top] = fb.transversal_sides();
        let [ls, rs] = fb.long_sides();
        for (i, leaf) in lam.leaves().iter().enumerate() {
            if i == fb.leaf {
                continue;
            }
            let g = leaf.geodesic;
            let hit = |s: &GeodesicSegment| {
                FiniteLamination::new(vec![super::super::Leaf::new(g, 1.0)])
                    .unwrap()
                    .transversal_measure(s)
                    > 0.0
            };
            assert!(!hit(&ls) && !hit(&rs), "leaf {i} crosses a long side");
            let meets = hit(&bottom) || hit(&top);
            assert_eq!(meets, fb.crossing_leaves.contains(&i));
            if meets {
                assert!(hit(&bottom) && hit(&top), "leaf {i} crosses only one transversal side");
            }
        }
    }

    #[test]
    fn single_leaf_gives_empty_box() {
        let lam = FiniteLamination::from_pairs(&[(-1.0, 1.0, 0.7)]).unwrap();
        let fb = lam.flow_box(&seg_on_unit_circle(), 0.01).unwrap();
        assert_eq!(fb.height, 0.0);
        assert!(fb.crossing_leaves.is_empty());
        check_box(&lam, &fb);
    }

    #[test]
    fn neighbour_included_when_light_enough() {
        let lam = FiniteLamination::from_pairs(&[(-1.0, 1.0, 0.7), (-1.05, 1.05, 0.2), (-0.9, 0.9, 0.3)]).unwrap();
        let fb = lam.flow_box(&seg_on_unit_circle(), 0.25).unwrap();
        assert_eq!(fb.crossing_leaves, vec![1]);
        assert_eq!(fb.height, 0.2);
        check_box(&lam, &fb);
        let fb = lam.flow_box(&seg_on_unit_circle(), 0.6).unwrap();
        assert_eq!(fb.crossing_leaves, vec![1, 2]);
        assert!((fb.height - 0.5).abs() < 1e-15);
        check_box(&lam, &fb);
        let fb = lam.flow_box(&seg_on_unit_circle(), 0.1).unwrap();
        assert_eq!(fb.height, 0.0);
        check_box(&lam, &fb);
    }

    #[test]
    fn rejects_segments_off_the_lamination() {
        let lam = FiniteLamination::from_pairs(&[(-1.0, 1.0, 0.7)]).unwrap();
        let s = GeodesicSegment::new(PointH2::new(0.0, 2.0).unwrap(), PointH2::new(0.0, 3.0).unwrap()).unwrap();
        assert!(lam.flow_box(&s, 0.1).is_err());
    }
}
