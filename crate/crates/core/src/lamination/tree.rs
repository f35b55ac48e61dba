use std::collections::{HashMap, VecDeque};

use super::{ordered_sum, FiniteLamination};
use crate::hyperbolic::{PointH2, Side};
use crate::precision::precision;

/// Where a point of H² sits relative to a lamination.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Region(usize),
    /// On leaf `leaf`, between regions `left` and `right`.
    OnLeaf {
        leaf: usize,
        left: usize,
        right: usize,
    },
}

/// The tree dual to a finite lamination: one vertex per complementary region, one
/// edge per leaf, with edge length equal to the leaf weight.
#[derive(Debug, Clone)]
pub struct DualTree {
    weights: Vec<f64>,
    /// Side of each leaf (true = right) for every region.
    signatures: Vec<Vec<bool>>,
    lookup: HashMap<Vec<bool>, usize>,
    /// `(left, right)` regions of each leaf.
    edges: Vec<(usize, usize)>,
    parent: Vec<Option<(usize, usize)>>,
    depth: Vec<usize>,
    lam: FiniteLamination,
}

impl DualTree {
    pub fn new(lam: &FiniteLamination) -> Self {
        let n = lam.len();
        let mut signatures: Vec<Vec<bool>> = Vec::new();
        let mut lookup: HashMap<Vec<bool>, usize> = HashMap::new();
        let mut edges = Vec::with_capacity(n);
        let mut region_of = |sig: Vec<bool>| -> usize {
            if let Some(&r) = lookup.get(&sig) {
                return r;
            }
            signatures.push(sig.clone());
            lookup.insert(sig, signatures.len() - 1);
            signatures.len() - 1
        };
        if n == 0 {
            region_of(Vec::new());
        }
        for i in 0..n {
            let g = lam.leaf(i).geodesic;
            let base: Vec<bool> = (0..n)
                .map(|j| {
                    if j == i {
                        false
                    } else {
                        lam.leaf(j).geodesic.side_of_geodesic(&g) == Side::Right
                    }
                })
                .collect();
            let left = region_of(base.clone());
            let mut right_sig = base;
            right_sig[i] = true;
            let right = region_of(right_sig);
            edges.push((left, right));
        }
        let regions = signatures.len();
        let mut adjacency = vec![Vec::new(); regions];
        for (e, &(l, r)) in edges.iter().enumerate() {
            adjacency[l].push((r, e));
            adjacency[r].push((l, e));
        }
        let mut parent = vec![None; regions];
        let mut depth = vec![usize::MAX; regions];
        depth[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for &(w, e) in &adjacency[v] {
                if depth[w] == usize::MAX {
                    depth[w] = depth[v] + 1;
                    parent[w] = Some((v, e));
                    queue.push_back(w);
                }
            }
        }
        DualTree {
            weights: lam.leaves().iter().map(|l| l.weight).collect(),
            signatures,
            lookup,
            edges,
            parent,
            depth,
            lam: lam.clone(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.signatures.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `(left, right)` regions of leaf `i`.
    pub fn edge(&self, i: usize) -> (usize, usize) {
        self.edges[i]
    }

    /// The region on the given side of leaf `i`.
    pub fn region_beside(&self, i: usize, side: Side) -> usize {
        match side {
            Side::Right => self.edges[i].1,
            _ => self.edges[i].0,
        }
    }

    /// Whether region `r` lies on the right of leaf `i`.
    pub fn is_right_of(&self, r: usize, i: usize) -> bool {
        self.signatures[r][i]
    }

    pub fn is_connected(&self) -> bool {
        self.depth.iter().all(|&d| d != usize::MAX)
    }

    pub fn depth(&self, r: usize) -> usize {
        self.depth[r]
    }

    /// Parent region and connecting leaf in the BFS tree rooted at region 0.
    pub fn parent(&self, r: usize) -> Option<(usize, usize)> {
        self.parent[r]
    }

    pub fn locate(&self, x: &PointH2) -> Location {
        let tol = precision().endpoint;
        let mut sig = Vec::with_capacity(self.weights.len());
        let mut on = None;
        for (i, leaf) in self.lam.leaves().iter().enumerate() {
            let v = leaf.geodesic.side_value(x);
            if v.abs() <= tol && on.is_none() {
                on = Some(i);
            }
            sig.push(v > 0.0);
        }
        if let Some(leaf) = on {
            let (left, right) = self.edges[leaf];
            return Location::OnLeaf { leaf, left, right };
        }
        match self.lookup.get(&sig) {
            Some(&r) => Location::Region(r),
            // Only reachable through rounding right next to a leaf: take the
            // region whose signature differs in the fewest places.
            None => Location::Region(
                (0..self.signatures.len())
                    .min_by_key(|&r| self.signatures[r].iter().zip(&sig).filter(|(a, b)| a != b).count())
                    .expect("at least one region"),
            ),
        }
    }

    /// Region containing `x`; points on a leaf are assigned to its left region.
    pub fn project(&self, x: &PointH2) -> usize {
        match self.locate(x) {
            Location::Region(r) => r,
            Location::OnLeaf { left, .. } => left,
        }
    }

    /// Leaves separating two regions, i.e. the edges of the tree path.
    pub fn path_edges(&self, u: usize, v: usize) -> Vec<usize> {
        let (mut a, mut b) = (u, v);
        let mut from_a = Vec::new();
        let mut from_b = Vec::new();
        while self.depth[a] > self.depth[b] {
            let (p, e) = self.parent[a].expect("non-root");
            from_a.push(e);
            a = p;
        }
        while self.depth[b] > self.depth[a] {
            let (p, e) = self.parent[b].expect("non-root");
            from_b.push(e);
            b = p;
        }
        while a != b {
            let (pa, ea) = self.parent[a].expect("non-root");
            let (pb, eb) = self.parent[b].expect("non-root");
            from_a.push(ea);
            from_b.push(eb);
            a = pa;
            b = pb;
        }
        from_b.reverse();
        from_a.extend(from_b);
        from_a
    }

    pub fn tree_distance(&self, u: usize, v: usize) -> f64 {
        ordered_sum(self.path_edges(u, v).into_iter().map(|e| self.weights[e]))
    }
}
