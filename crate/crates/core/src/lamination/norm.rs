use serde::Serialize;

use super::{ordered_sum, ConvexRegion, DualTree, FiniteLamination};
use crate::hyperbolic::{dist_h2, GeodesicH2, MobiusMap, PointH2, Side};

/// The chain of leaves realizing a norm value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormWitness {
    pub value: f64,
    /// Leaves crossed by a short segment realizing `value`, in crossing order.
    pub chain: Vec<usize>,
    /// Distance between the two extremal leaves of the chain (0 for a single leaf).
    pub extremal_distance: f64,
}

/// A connected piece `{γ(s) : lo ≤ s ≤ hi}` of a geodesic, parametrized by
/// arclength through its normalizing map (`γ(s) = N⁻¹(i·eˢ)`); ends may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chord {
    pub geodesic: GeodesicH2,
    pub lo: f64,
    pub hi: f64,
}

impl Chord {
    pub fn full(geodesic: GeodesicH2) -> Self {
        Chord {
            geodesic,
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn point_at(&self, s: f64) -> PointH2 {
        let inv = self.geodesic.normalizing_map().inverse();
        inv.apply_h2(&PointH2::new(0.0, s.exp()).expect("positive height"))
            .expect("real map")
    }

    /// Parameter of the foot of the perpendicular from `z`.
    pub fn param_of(&self, z: &PointH2) -> f64 {
        let w = self.geodesic.normalizing_map().apply_h2(z).expect("real map");
        0.5 * (w.x() * w.x() + w.y() * w.y()).ln()
    }

    pub fn contains_param(&self, s: f64) -> bool {
        self.lo <= s && s <= self.hi
    }

    pub fn distance_to_point(&self, z: &PointH2) -> f64 {
        let s = self.param_of(z);
        if self.contains_param(s) {
            self.geodesic.signed_distance(z).abs()
        } else {
            let end = if s < self.lo { self.lo } else { self.hi };
            dist_h2(z, &self.point_at(end))
        }
    }

    fn finite_ends(&self) -> Vec<PointH2> {
        [self.lo, self.hi]
            .into_iter()
            .filter(|s| s.is_finite())
            .map(|s| self.point_at(s))
            .collect()
    }

    /// Distance between two chords of disjoint geodesics.
    pub fn distance_to(&self, other: &Chord) -> f64 {
        if let Some((f1, f2)) = common_perpendicular_feet(&self.geodesic, &other.geodesic) {
            if self.contains_param(self.param_of(&f1)) && other.contains_param(other.param_of(&f2)) {
                return dist_h2(&f1, &f2);
            }
        }
        let mut best = f64::INFINITY;
        for z in self.finite_ends() {
            best = best.min(other.distance_to_point(&z));
        }
        for z in other.finite_ends() {
            best = best.min(self.distance_to_point(&z));
        }
        best
    }
}

/// Feet of the common perpendicular of two disjoint geodesics without common endpoints.
pub(crate) fn common_perpendicular_feet(g1: &GeodesicH2, g2: &GeodesicH2) -> Option<(PointH2, PointH2)> {
    if g1.crosses(g2) || g1.shares_endpoint(g2) {
        return None;
    }
    let n = g1.normalizing_map();
    let u = n.apply_ideal(g2.p()).ok()?.as_real()?;
    let v = n.apply_ideal(g2.q()).ok()?.as_real()?;
    let sign = u.signum();
    let (u, v) = (u.abs(), v.abs());
    let uv = u * v;
    let c = (u + v) / 2.0;
    let x = uv / c;
    let y = (uv - x * x).max(0.0).sqrt();
    let inv: MobiusMap = n.inverse();
    let foot1 = inv.apply_h2(&PointH2::new(0.0, uv.sqrt()).ok()?).ok()?;
    let foot2 = inv.apply_h2(&PointH2::new(sign * x, y).ok()?).ok()?;
    Some((foot1, foot2))
}

pub(super) fn norm(lam: &FiniteLamination) -> f64 {
    lam.norm_witness().value
}

/// Largest chain weight over single leaves and leaf pairs at distance `< 1` under
/// the supplied leaf-to-leaf distance.
pub fn norm_witness<F: Fn(usize, usize) -> f64>(lam: &FiniteLamination, tree: &DualTree, distance: F) -> NormWitness {
    norm_witness_over(lam, tree, &(0..lam.len()).collect::<Vec<_>>(), distance)
}

fn norm_witness_over<F: Fn(usize, usize) -> f64>(
    lam: &FiniteLamination,
    tree: &DualTree,
    active: &[usize],
    distance: F,
) -> NormWitness {
    let mut best = NormWitness {
        value: 0.0,
        chain: Vec::new(),
        extremal_distance: 0.0,
    };
    for &i in active {
        let w = lam.leaf(i).weight;
        if w > best.value {
            best = NormWitness {
                value: w,
                chain: vec![i],
                extremal_distance: 0.0,
            };
        }
    }
    for (a, &i) in active.iter().enumerate() {
        for &j in &active[a + 1..] {
            let d = distance(i, j);
            if !(d < 1.0) {
                continue;
            }
            let chain = chain_between(lam, tree, i, j);
            let value = ordered_sum(chain.iter().map(|&k| lam.leaf(k).weight));
            if value > best.value {
                best = NormWitness {
                    value,
                    chain,
                    extremal_distance: d,
                };
            }
        }
    }
    best
}

/// Leaves crossed, in order, by a segment running from leaf `i` to leaf `j`.
pub(crate) fn chain_between(lam: &FiniteLamination, tree: &DualTree, i: usize, j: usize) -> Vec<usize> {
    let gi = lam.leaf(i).geodesic;
    let gj = lam.leaf(j).geodesic;
    let side_i = gi.side_of_geodesic(&gj);
    let side_j = gj.side_of_geodesic(&gi);
    let from = tree.region_beside(i, if side_i == Side::Right { Side::Right } else { Side::Left });
    let to = tree.region_beside(j, if side_j == Side::Right { Side::Right } else { Side::Left });
    let mut chain = vec![i];
    chain.extend(tree.path_edges(from, to));
    chain.push(j);
    chain
}

impl FiniteLamination {
    /// Norm over segments that stay inside `region`: leaves are replaced by their
    /// chords in the region and leaf distances by chord distances.
    pub fn norm_restricted(&self, region: &ConvexRegion) -> f64 {
        self.norm_restricted_witness(region).value
    }

    pub fn norm_restricted_witness(&self, region: &ConvexRegion) -> NormWitness {
        let chords: Vec<Option<Chord>> = self.leaves().iter().map(|l| region.chord(&l.geodesic)).collect();
        let active: Vec<usize> = (0..self.len()).filter(|&i| chords[i].is_some()).collect();
        let tree = self.dual_tree();
        norm_witness_over(self, &tree, &active, |i, j| {
            chords[i].expect("active").distance_to(&chords[j].expect("active"))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::GeodesicSegment;
    use approx::assert_abs_diff_eq;

    fn lam(pairs: &[(f64, f64, f64)]) -> FiniteLamination {
        FiniteLamination::from_pairs(pairs).unwrap()
    }

    #[test]
    fn worked_examples() {
        assert_eq!(FiniteLamination::empty().norm(), 0.0);
        assert_eq!(lam(&[(-1.0, 1.0, 0.3), (-2.0, 2.0, 0.3)]).norm(), 0.6);
        assert_eq!(lam(&[(-1.0, 1.0, 0.3), (-3.0, 3.0, 0.3)]).norm(), 0.3);
    }

    #[test]
    fn chain_includes_leaves_in_between() {
        let l = lam(&[(-1.0, 1.0, 0.1), (-1.2, 1.2, 0.2), (-1.5, 1.5, 0.05), (5.0, 6.0, 0.9)]);
        let w = l.norm_witness();
        // the three concentric leaves are within ln 1.5 of each other; the far leaf alone weighs 0.9
        assert_abs_diff_eq!(w.value, 0.9, epsilon = 1e-15);
        let l = lam(&[(-1.0, 1.0, 0.1), (-1.2, 1.2, 0.2), (-1.5, 1.5, 0.05)]);
        let w = l.norm_witness();
        assert_abs_diff_eq!(w.value, 0.35, epsilon = 1e-15);
        assert_eq!(w.chain, vec![0, 1, 2]);
    }

    #[test]
    fn witness_segment_realizes_the_chain() {
        let l = lam(&[(-1.0, 1.0, 0.1), (-1.2, 1.2, 0.2), (-1.5, 1.5, 0.05), (-2.9, 2.9, 0.4)]);
        let w = l.norm_witness();
        let (i, j) = (w.chain[0], *w.chain.last().unwrap());
        let (f1, f2) = common_perpendicular_feet(&l.leaf(i).geodesic, &l.leaf(j).geodesic).unwrap();
        let s = GeodesicSegment::new(f1, f2).unwrap();
        let eta = (1.0 - s.length()) / 4.0;
        let long = GeodesicSegment::new(s.point_at(-eta), s.point_at(s.length() + eta)).unwrap();
        assert!(long.length() < 1.0);
        assert_abs_diff_eq!(l.transversal_measure(&long), w.value, epsilon = 1e-15);
    }

    #[test]
    fn chord_distances() {
        let g1 = GeodesicH2::from_reals(-1.0, 1.0).unwrap();
        let g2 = GeodesicH2::from_reals(-2.0, 2.0).unwrap();
        assert_abs_diff_eq!(
            Chord::full(g1).distance_to(&Chord::full(g2)),
            2f64.ln(),
            epsilon = 1e-14
        );
        // cut g2 to the part left of x = −1.5: the perpendicular foot (0, 2) is excluded
        let c2 = Chord {
            geodesic: g2,
            lo: f64::NEG_INFINITY,
            hi: Chord::full(g2).param_of(&PointH2::new(-1.5, 1.3228756555322954).unwrap()),
        };
        let end = c2.point_at(c2.hi);
        assert!(end.x() < -1.49 && end.x() > -1.51);
        let d = Chord::full(g1).distance_to(&c2);
        assert!(d > 2f64.ln());
        assert_abs_diff_eq!(d, g1.signed_distance(&end).abs(), epsilon = 1e-12);
    }
}
