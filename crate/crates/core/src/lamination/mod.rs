//! Finite measured geodesic laminations of H².

mod crossings;
mod flow_box;
mod norm;
pub mod random;
mod region;
mod tree;

pub use crossings::{Crossing, CrossingReport};
pub use flow_box::FlowBox;
pub use norm::{Chord, NormWitness};
pub use region::{ConvexRegion, HalfPlane};
pub use tree::{DualTree, Location};

pub use crate::hyperbolic::GeodesicSegment;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::{GeodesicH2, Ideal, MobiusMap, PointH2};

/// One leaf: a complete geodesic with a positive atomic weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Leaf {
    pub geodesic: GeodesicH2,
    pub weight: f64,
}

impl Leaf {
    pub fn new(geodesic: GeodesicH2, weight: f64) -> Self {
        Self { geodesic, weight }
    }
}

/// A finite set of pairwise disjoint weighted geodesics.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FiniteLamination {
    leaves: Vec<Leaf>,
}

#[derive(Serialize, Deserialize)]
struct LeafRecord {
    p: Ideal,
    q: Ideal,
    w: f64,
}

#[derive(Serialize, Deserialize)]
struct LaminationRecord {
    leaves: Vec<LeafRecord>,
}

/// Sum of `values` in ascending order, so the result does not depend on the order
/// in which the terms were collected.
pub fn ordered_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut v: Vec<f64> = values.into_iter().collect();
    v.sort_by(f64::total_cmp);
    v.into_iter().sum()
}

impl FiniteLamination {
    /// Validates weights and pairwise disjointness.
    pub fn new(leaves: Vec<Leaf>) -> Result<Self> {
        for (i, leaf) in leaves.iter().enumerate() {
            if !(leaf.weight > 0.0) || !leaf.weight.is_finite() {
                return Err(Error::NonPositiveWeight(i, leaf.weight));
            }
        }
        for i in 0..leaves.len() {
            for j in i + 1..leaves.len() {
                let (a, b) = (&leaves[i].geodesic, &leaves[j].geodesic);
                if a.crosses(b) {
                    return Err(Error::Interleaved(i, j));
                }
                if a.shares_endpoint(b) {
                    return Err(Error::SharedEndpoint(i, j));
                }
            }
        }
        Ok(Self { leaves })
    }

    pub fn empty() -> Self {
        Self { leaves: Vec::new() }
    }

    pub fn from_pairs(pairs: &[(f64, f64, f64)]) -> Result<Self> {
        let leaves = pairs
            .iter()
            .map(|&(p, q, w)| Ok(Leaf::new(GeodesicH2::from_reals(p, q)?, w)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(leaves)
    }

    pub fn leaves(&self) -> &[Leaf] {
        &self.leaves
    }

    pub fn leaf(&self, i: usize) -> &Leaf {
        &self.leaves[i]
    }

    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        ordered_sum(self.leaves.iter().map(|l| l.weight))
    }

    pub fn max_weight(&self) -> f64 {
        self.leaves.iter().map(|l| l.weight).fold(0.0, f64::max)
    }

    /// The sublamination on the given leaf indices (in the given order).
    pub fn subset(&self, indices: &[usize]) -> FiniteLamination {
        FiniteLamination {
            leaves: indices.iter().map(|&i| self.leaves[i]).collect(),
        }
    }

    /// The sublamination with the given leaf indices removed.
    pub fn without(&self, indices: &[usize]) -> FiniteLamination {
        FiniteLamination {
            leaves: self
                .leaves
                .iter()
                .enumerate()
                .filter(|(i, _)| !indices.contains(i))
                .map(|(_, l)| *l)
                .collect(),
        }
    }

    /// Same leaves, every weight multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<FiniteLamination> {
        FiniteLamination::new(
            self.leaves
                .iter()
                .map(|l| Leaf::new(l.geodesic, l.weight * factor))
                .collect(),
        )
    }

    /// Index of the leaf with this geodesic, if any.
    pub fn position(&self, g: &GeodesicH2) -> Option<usize> {
        self.leaves.iter().position(|l| l.geodesic == *g)
    }

    /// Index of a leaf carrying `z` within `tol` (in sinh-distance).
    pub fn leaf_through(&self, z: &PointH2, tol: f64) -> Option<usize> {
        self.leaves.iter().position(|l| l.geodesic.side_value(z).abs() <= tol)
    }

    /// Image under a real Möbius map.
    pub fn transformed(&self, m: &MobiusMap) -> Result<FiniteLamination> {
        let leaves = self
            .leaves
            .iter()
            .map(|l| Ok(Leaf::new(m.apply_geodesic_h2(&l.geodesic)?, l.weight)))
            .collect::<Result<Vec<_>>>()?;
        FiniteLamination::new(leaves)
    }

    /// Indices of leaves `l` such that all other leaves lie on one side of `l`.
    pub fn outermost_indices(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| {
                let g = &self.leaves[i].geodesic;
                let mut sides = self
                    .leaves
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, m)| g.side_of_geodesic(&m.geodesic));
                match sides.next() {
                    None => true,
                    Some(first) => sides.all(|s| s == first),
                }
            })
            .collect()
    }

    pub fn outermost(&self) -> FiniteLamination {
        self.subset(&self.outermost_indices())
    }

    /// Minimum distance between two leaves and the achieving pair (lowest indices
    /// on ties); `+∞` and `None` with fewer than two leaves.
    pub fn min_leaf_distance(&self) -> (f64, Option<(usize, usize)>) {
        let mut best = (f64::INFINITY, None);
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                let d = self.leaves[i].geodesic.distance_to(&self.leaves[j].geodesic);
                if d < best.0 {
                    best = (d, Some((i, j)));
                }
            }
        }
        best
    }

    /// Largest unsigned angle between `n` and the leaves it crosses.
    pub fn angle_to(&self, n: &GeodesicH2) -> Result<f64> {
        self.leaves
            .iter()
            .filter_map(|l| n.crossing_angle(&l.geodesic))
            .fold(None, |acc: Option<f64>, a| Some(acc.map_or(a, |b| b.max(a))))
            .ok_or(Error::Disjoint)
    }

    pub fn to_json(&self) -> String {
        let rec = LaminationRecord {
            leaves: self
                .leaves
                .iter()
                .map(|l| LeafRecord {
                    p: l.geodesic.p(),
                    q: l.geodesic.q(),
                    w: l.weight,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&rec).expect("plain data serializes")
    }

    /// Parses `{"leaves": [{"p": .., "q": .., "w": ..}, ..]}`; errors name the offending leaf.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let items = value
            .get("leaves")
            .and_then(|v| v.as_array())
            .ok_or_else(|| Error::Parse("expected an object with a `leaves` array".into()))?;
        let mut leaves = Vec::with_capacity(items.len());
        for (index, item) in items.iter().enumerate() {
            let rec: LeafRecord = serde_json::from_value(item.clone()).map_err(|e| Error::MalformedLeaf {
                index,
                message: e.to_string(),
            })?;
            let geodesic = GeodesicH2::new(rec.p, rec.q).map_err(|e| Error::MalformedLeaf {
                index,
                message: e.to_string(),
            })?;
            leaves.push(Leaf::new(geodesic, rec.w));
        }
        Self::new(leaves)
    }

    pub fn crossings(&self, s: &GeodesicSegment) -> CrossingReport {
        crossings::crossings(self, s)
    }

    /// Sum of the weights of leaves crossed strictly inside `s`.
    pub fn transversal_measure(&self, s: &GeodesicSegment) -> f64 {
        self.crossings(s).measure(self)
    }

    /// Transversal measure of the piecewise geodesic path through `points`.
    pub fn path_measure(&self, points: &[PointH2]) -> Result<f64> {
        let mut parts = Vec::new();
        for w in points.windows(2) {
            let s = GeodesicSegment::new(w[0], w[1])?;
            parts.push(self.transversal_measure(&s));
        }
        Ok(ordered_sum(parts))
    }

    /// Transversal measure over one period of `gamma`, which must map `s.a` to `s.b`.
    pub fn translation_length(&self, gamma: &MobiusMap, s: &GeodesicSegment) -> Result<f64> {
        let image = gamma.apply_h2(&s.a())?;
        let gap = crate::hyperbolic::dist_h2(&image, &s.b());
        if gap > 1e-9 {
            return Err(Error::NotAPeriod(gap));
        }
        Ok(self.transversal_measure(s))
    }

    pub fn dual_tree(&self) -> DualTree {
        DualTree::new(self)
    }

    /// Supremum of transversal measure over geodesic segments of length less than one.
    pub fn norm(&self) -> f64 {
        norm::norm(self)
    }

    pub fn norm_witness(&self) -> NormWitness {
        norm::norm_witness(self, &self.dual_tree(), |i, j| {
            self.leaves[i].geodesic.distance_to(&self.leaves[j].geodesic)
        })
    }

    /// The leaves meeting `x`, with their original weights.
    pub fn intersection(&self, x: &ConvexRegion) -> Result<FiniteLamination> {
        Ok(self.subset(&self.intersection_indices(x)?))
    }

    pub fn intersection_indices(&self, x: &ConvexRegion) -> Result<Vec<usize>> {
        x.validate()?;
        Ok((0..self.len())
            .filter(|&i| x.meets_geodesic(&self.leaves[i].geodesic))
            .collect())
    }

    pub fn flow_box(&self, s: &GeodesicSegment, epsilon: f64) -> Result<FlowBox> {
        flow_box::flow_box(self, s, epsilon)
    }
}

impl Serialize for FiniteLamination {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LaminationRecord {
            leaves: self
                .leaves
                .iter()
                .map(|l| LeafRecord {
                    p: l.geodesic.p(),
                    q: l.geodesic.q(),
                    w: l.weight,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteLamination {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rec = LaminationRecord::deserialize(d)?;
        let leaves = rec
            .leaves
            .into_iter()
            .map(|r| GeodesicH2::new(r.p, r.q).map(|g| Leaf::new(g, r.w)))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        FiniteLamination::new(leaves).map_err(serde::de::Error::custom)
    }
}
