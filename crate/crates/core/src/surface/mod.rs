//! A punctured-torus Fuchsian group, its simple closed curves by slope, and the
//! lifts of those curves to H² seen through a compact window.

mod continued;
mod diagnostics;

pub use continued::{convergents, loop_measure, Convergent, Slope};
pub use diagnostics::{
    angle_decay, approximation, component_norm_report, least_squares_slope, norm_decay, nt_norm_estimate, AngleRow,
    ApproxRow, ApproxSequence, ComponentNorm, ComponentReport, NormRow, NtEstimate, NtSampling, PROXY_OFFSET,
};

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::{dist_h2, GeodesicH2, Ideal, MobiusMap, PointH2, Side};
use crate::lamination::{ConvexRegion, FiniteLamination, HalfPlane, Leaf};

/// Generator letters; `a` and `b` are the inverses of `A` and `B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Letter {
    A,
    B,
    AInv,
    BInv,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::A, Letter::B, Letter::AInv, Letter::BInv];

    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::AInv,
            Letter::B => Letter::BInv,
            Letter::AInv => Letter::A,
            Letter::BInv => Letter::B,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'A',
            Letter::B => 'B',
            Letter::AInv => 'a',
            Letter::BInv => 'b',
        }
    }
}

/// A word in the generators, read as the product left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, letter: Letter) -> usize {
        self.0.iter().filter(|&&l| l == letter).count()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// The cyclic rotation starting at letter `k`.
    pub fn rotation(&self, k: usize) -> Word {
        let k = k % self.len().max(1);
        Word([&self.0[k..], &self.0[..k]].concat())
    }

    fn concat(&self, other: &Word) -> Word {
        Word([self.0.as_slice(), other.0.as_slice()].concat())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|l| write!(f, "{}", l.as_char()))
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                'A' => Ok(Letter::A),
                'B' => Ok(Letter::B),
                'a' => Ok(Letter::AInv),
                'b' => Ok(Letter::BInv),
                other => Err(Error::Parse(format!("unknown generator `{other}`"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

/// Christoffel word of the slope `p/q` (`p` letters `A`, `q` letters `B`) by
/// Stern–Brocot descent from `0/1 ↦ B` and `1/0 ↦ A`; the mediant's word is the
/// upper parent's word followed by the lower parent's. Negative `p` uses `a`.
pub fn slope_word(p: i64, q: i64) -> Result<Word> {
    if q < 0 {
        return Err(Error::InvalidInput(format!(
            "slope denominator must be nonnegative, got {q}"
        )));
    }
    let pa = p.unsigned_abs();
    let qa = q as u64;
    if pa.gcd(&qa) != 1 {
        return Err(Error::InvalidInput(format!("slope {p}/{q} is not in lowest terms")));
    }
    let a = if p < 0 { Letter::AInv } else { Letter::A };
    let (mut lo, mut hi) = ((0u64, 1u64, Word(vec![Letter::B])), (1u64, 0u64, Word(vec![a])));
    if (pa, qa) == (0, 1) {
        return Ok(lo.2);
    }
    if (pa, qa) == (1, 0) {
        return Ok(hi.2);
    }
    loop {
        let m = (lo.0 + hi.0, lo.1 + hi.1, hi.2.concat(&lo.2));
        if (m.0, m.1) == (pa, qa) {
            return Ok(m.2);
        }
        // compare pa/qa with the mediant
        if (pa as u128) * (m.1 as u128) < (m.0 as u128) * (qa as u128) {
            hi = m;
        } else {
            lo = m;
        }
    }
}

/// Geometric intersection number `|p q′ − p′ q|` of two slopes on the torus.
pub fn intersection_number(a: (i64, i64), b: (i64, i64)) -> u64 {
    (a.0 as i128 * b.1 as i128 - b.0 as i128 * a.1 as i128).unsigned_abs() as u64
}

/// A marked two-generator Fuchsian group with real hyperbolic generators.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuchsianSurface {
    pub name: String,
    pub a: MobiusMap,
    pub b: MobiusMap,
    pub commutator_trace: f64,
}

type Real2 = [f64; 4];

fn real_entries(m: &MobiusMap) -> Real2 {
    let [a, b, c, d] = m.entries();
    [a.re, b.re, c.re, d.re]
}

fn mul(m: &Real2, n: &Real2) -> Real2 {
    [
        m[0] * n[0] + m[1] * n[2],
        m[0] * n[1] + m[1] * n[3],
        m[2] * n[0] + m[3] * n[2],
        m[2] * n[1] + m[3] * n[3],
    ]
}

fn inv(m: &Real2) -> Real2 {
    [m[3], -m[1], -m[2], m[0]]
}

fn apply_point(m: &Real2, z: Complex64) -> Complex64 {
    (z * m[0] + m[1]) / (z * m[2] + m[3])
}

/// Surface input: real generator matrices `[a, b, c, d]`, or a trace triple
/// `[tr A, tr B, tr AB]` realized in Fricke normal form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub struct SurfaceSpec {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub generators: Option<[[f64; 4]; 2]>,
    #[serde(default)]
    pub traces: Option<[f64; 3]>,
}

impl SurfaceSpec {
    pub fn build(&self) -> Result<FuchsianSurface> {
        let mut surface = match (&self.generators, &self.traces) {
            (Some([a, b]), None) => FuchsianSurface::from_generators(
                "custom generators",
                MobiusMap::from_real(a[0], a[1], a[2], a[3])?,
                MobiusMap::from_real(b[0], b[1], b[2], b[3])?,
            )?,
            (None, Some([x, y, z])) => punctured_torus(*x, *y, *z)?,
            _ => {
                return Err(Error::InvalidInput(
                    "surface needs exactly one of `generators` or `traces`".into(),
                ))
            }
        };
        if let Some(name) = &self.name {
            surface.name = name.clone();
        }
        Ok(surface)
    }
}

impl FuchsianSurface {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: SurfaceSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        spec.build()
    }

    /// The complete punctured torus with `A = [[1,1],[1,2]]`, `B = [[1,−1],[−1,2]]`.
    pub fn default_torus() -> Self {
        let a = MobiusMap::from_real(1.0, 1.0, 1.0, 2.0).expect("unit determinant");
        let b = MobiusMap::from_real(1.0, -1.0, -1.0, 2.0).expect("unit determinant");
        Self::from_generators("punctured torus (3,3,3)", a, b).expect("valid default")
    }

    pub fn from_generators(name: &str, a: MobiusMap, b: MobiusMap) -> Result<Self> {
        for (label, m) in [("A", &a), ("B", &b)] {
            if !m.is_real(1e-12) {
                return Err(Error::InvalidInput(format!("generator {label} has non-real entries")));
            }
            if m.trace().re.abs() <= 2.0 + 1e-12 {
                return Err(Error::Constraint(format!(
                    "generator {label} is not hyperbolic (|tr| = {})",
                    m.trace().re.abs()
                )));
            }
        }
        // the commutator trace does not depend on the signs of the SL(2) lifts
        let (ra, rb) = (real_entries(&a), real_entries(&b));
        let comm = mul(&mul(&ra, &rb), &mul(&inv(&ra), &inv(&rb)));
        Ok(FuchsianSurface {
            name: name.to_string(),
            a,
            b,
            commutator_trace: comm[0] + comm[3],
        })
    }

    /// `(tr A, tr B, tr AB)` for lifts to SL(2) with `tr A, tr B > 0`.
    pub fn trace_triple(&self) -> (f64, f64, f64) {
        let lift = |m: &MobiusMap| {
            let r = real_entries(m);
            if r[0] + r[3] < 0.0 {
                r.map(|x| -x)
            } else {
                r
            }
        };
        let (a, b) = (lift(&self.a), lift(&self.b));
        let ab = mul(&a, &b);
        (a[0] + a[3], b[0] + b[3], ab[0] + ab[3])
    }

    /// `tr[A, B] = −2` within `tol`: the quotient is a complete punctured torus.
    pub fn is_complete_punctured_torus(&self, tol: f64) -> bool {
        (self.commutator_trace + 2.0).abs() <= tol
    }

    pub fn generator(&self, l: Letter) -> MobiusMap {
        match l {
            Letter::A => self.a,
            Letter::B => self.b,
            Letter::AInv => self.a.inverse(),
            Letter::BInv => self.b.inverse(),
        }
    }

    fn letter_matrix(&self, l: Letter) -> Real2 {
        real_entries(&self.generator(l))
    }

    /// The group element of `w`; fails when an entry leaves the floating-point range.
    pub fn evaluate(&self, w: &Word) -> Result<MobiusMap> {
        let mut m = [1.0, 0.0, 0.0, 1.0];
        for &l in w.letters() {
            m = mul(&m, &self.letter_matrix(l));
        }
        if m.iter().any(|x| !x.is_finite() || x.abs() > 1e150) {
            return Err(Error::Degenerate(format!(
                "holonomy of a {}-letter word overflows",
                w.len()
            )));
        }
        MobiusMap::from_real(m[0], m[1], m[2], m[3])
    }

    /// Attracting fixed point of `w` and half its translation length, by iterating
    /// the word on a projective vector; no product matrix is ever formed.
    fn attracting(&self, w: &Word, start: [f64; 2]) -> Result<([f64; 2], f64)> {
        let mats: Vec<Real2> = w.letters().iter().rev().map(|&l| self.letter_matrix(l)).collect();
        let mut v = start;
        let mut last_log = 0.0;
        for pass in 0..400 {
            let before = v;
            let mut log = 0.0;
            for m in &mats {
                let x = m[0] * v[0] + m[1] * v[1];
                let y = m[2] * v[0] + m[3] * v[1];
                let n = x.hypot(y);
                log += n.ln();
                v = [x / n, y / n];
            }
            // projective distance between successive iterates
            let moved = (before[0] * v[1] - before[1] * v[0]).abs();
            if pass > 0 && moved < 1e-15 {
                return Ok((v, log));
            }
            last_log = log;
        }
        if last_log > 1e-6 {
            return Ok((v, last_log));
        }
        Err(Error::Degenerate(format!("word {w} does not act hyperbolically")))
    }

    /// Axis and translation length of the element `w`.
    pub fn word_axis(&self, w: &Word) -> Result<(GeodesicH2, f64)> {
        self.word_axis_from(w, [0.8, 0.6])
    }

    fn word_axis_from(&self, w: &Word, start: [f64; 2]) -> Result<(GeodesicH2, f64)> {
        if w.is_empty() {
            return Err(Error::Degenerate("empty word".into()));
        }
        let (att, log) = self.attracting(w, start)?;
        // the repelling point is attracting for the inverse; start away from att
        let (rep, _) = self.attracting(&w.inverse(), [-att[1], att[0]])?;
        let ideal = |v: [f64; 2]| {
            if v[1].abs() <= 1e-300 {
                Ideal::Infinity
            } else {
                Ideal::Real(v[0] / v[1])
            }
        };
        let g = GeodesicH2::new(ideal(rep), ideal(att))?;
        Ok((g, 2.0 * log))
    }
}

/// Fricke normal form: `A = diag(λ, 1/λ)` and `B` solving `tr B = y`, `tr AB = z`,
/// for traces satisfying `x² + y² + z² = xyz` (so that `tr[A, B] = −2`).
pub fn punctured_torus(x: f64, y: f64, z: f64) -> Result<FuchsianSurface> {
    if !(x.abs() > 2.0 && y.abs() > 2.0 && z.abs() > 2.0) {
        return Err(Error::Constraint(format!(
            "traces ({x}, {y}, {z}) must all exceed 2 in absolute value"
        )));
    }
    let markov = x * x + y * y + z * z - x * y * z;
    if markov.abs() > 1e-9 * (x * y * z).abs().max(1.0) {
        return Err(Error::Constraint(format!(
            "x² + y² + z² − xyz = {markov:e}, expected 0 for tr[A, B] = −2"
        )));
    }
    let lam = (x + x.signum() * (x * x - 4.0).sqrt()) / 2.0;
    let b11 = (z - y / lam) / (lam - 1.0 / lam);
    let b22 = y - b11;
    let a = MobiusMap::from_real(lam, 0.0, 0.0, 1.0 / lam)?;
    let b = MobiusMap::from_real(b11, 1.0, b11 * b22 - 1.0, b22)?;
    FuchsianSurface::from_generators(&format!("punctured torus ({x},{y},{z})"), a, b)
}

/// The simple closed curve of slope `p/q` with its geometric data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeCurve {
    pub p: i64,
    pub q: i64,
    pub word: Word,
    /// `None` when the matrix entries overflow; the axis does not need them.
    pub holonomy: Option<MobiusMap>,
    pub axis: GeodesicH2,
    pub translation_length: f64,
}

impl SlopeCurve {
    pub fn new(surface: &FuchsianSurface, p: i64, q: i64) -> Result<Self> {
        let word = slope_word(p, q)?;
        let (axis, translation_length) = surface.word_axis(&word)?;
        let holonomy = surface.evaluate(&word).ok();
        Ok(SlopeCurve {
            p,
            q,
            word,
            holonomy,
            axis,
            translation_length,
        })
    }

    pub fn slope(&self) -> (i64, i64) {
        (self.p, self.q)
    }

    /// Axes of the conjugates by prefixes (one per cyclic rotation); every lift of
    /// the curve passing near the base orbit point is among them.
    pub fn rotation_axes(&self, surface: &FuchsianSurface) -> Result<Vec<GeodesicH2>> {
        (0..self.word.len())
            .map(|k| surface.word_axis(&self.word.rotation(k)).map(|(g, _)| g))
            .collect()
    }
}

/// A compact window: the closed hyperbolic disk of `radius` about `center`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window {
    pub center: PointH2,
    pub radius: f64,
}

impl Default for Window {
    fn default() -> Self {
        Window {
            center: PointH2::new(0.0, 1.0).expect("valid"),
            radius: 1.0,
        }
    }
}

impl Window {
    pub fn new(center: PointH2, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "window radius must be positive, got {radius}"
            )));
        }
        Ok(Window { center, radius })
    }

    pub fn meets(&self, g: &GeodesicH2) -> bool {
        g.signed_distance(&self.center).abs() < self.radius
    }

    pub fn contains(&self, z: &PointH2) -> bool {
        dist_h2(z, &self.center) <= self.radius
    }

    pub fn transformed(&self, m: &MobiusMap) -> Result<Window> {
        Window::new(m.apply_h2(&self.center)?, self.radius)
    }

    /// The regular polygon with `sides` sides circumscribed about the disk.
    pub fn polygon(&self, sides: usize) -> ConvexRegion {
        let (x, y) = (self.center.x(), self.center.y());
        let lift = MobiusMap::from_real(y.sqrt(), x / y.sqrt(), 0.0, 1.0 / y.sqrt()).expect("regular");
        let half_planes = (0..sides.max(3))
            .map(|k| {
                let phi = std::f64::consts::PI * k as f64 / sides.max(3) as f64;
                let (s, c) = phi.sin_cos();
                let rot = MobiusMap::from_real(c, s, -s, c).expect("rotation");
                let g = GeodesicH2::circle(0.0, self.radius.exp()).expect("valid");
                let g = lift.compose(&rot).apply_geodesic_h2(&g).expect("real map");
                let side = if g.side_value(&self.center) > 0.0 {
                    Side::Right
                } else {
                    Side::Left
                };
                HalfPlane::closed(g, side)
            })
            .collect();
        ConvexRegion::polygon(half_planes)
    }
}

/// Lifts of a weighted multicurve meeting a window.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowLift {
    pub lamination: FiniteLamination,
    /// Index into the input curves for every leaf.
    pub curve_of_leaf: Vec<usize>,
    pub depth: usize,
    pub elements: usize,
    /// No lift met the window within the enumerated depth.
    pub depth_limited: bool,
}

/// Extra translation distance allowed beyond the window radius and the distance
/// from the window centre to the rotation axes when pruning group elements.
const ORBIT_MARGIN: f64 = 3.0;

/// Translates `g·axis` of each curve's rotation axes by the group elements of word
/// length at most `depth`, keeping those meeting the window. Each distinct lift is
/// computed once as the axis of its conjugate word; leaves are sorted by endpoint.
pub fn lift_window(
    surface: &FuchsianSurface,
    curves: &[(SlopeCurve, f64)],
    window: &Window,
    depth: usize,
) -> Result<WindowLift> {
    for (i, (a, wa)) in curves.iter().enumerate() {
        if !(*wa > 0.0) {
            return Err(Error::NonPositiveWeight(i, *wa));
        }
        for (b, _) in &curves[..i] {
            if intersection_number(a.slope(), b.slope()) != 0 {
                return Err(Error::Constraint(format!(
                    "curves {}/{} and {}/{} intersect",
                    a.p, a.q, b.p, b.q
                )));
            }
        }
    }
    // parallel copies of one slope add their weights
    let mut merged: Vec<(usize, f64, Vec<GeodesicH2>)> = Vec::new();
    for (i, (c, w)) in curves.iter().enumerate() {
        if let Some(m) = merged.iter_mut().find(|m| curves[m.0].0.slope() == c.slope()) {
            m.1 += w;
        } else {
            merged.push((i, *w, c.rotation_axes(surface)?));
        }
    }
    let o = window.center.to_complex();
    let reach = merged
        .iter()
        .flat_map(|m| m.2.iter())
        .map(|g| g.signed_distance(&window.center).abs())
        .fold(0.0, f64::max);
    let cutoff = window.radius + reach + ORBIT_MARGIN;

    // The group is free on A and B and slope words are primitive, so two images
    // g·axis(w_k) coincide exactly when the conjugates g·w_k·g⁻¹ reduce to the same
    // word. Float comparison cannot separate lifts that fellow-travel below rounding.
    let words: Vec<Vec<Word>> = merged
        .iter()
        .map(|m| {
            (0..curves[m.0].0.word.len())
                .map(|k| curves[m.0].0.word.rotation(k))
                .collect()
        })
        .collect();
    let mut seen: HashSet<Vec<Letter>> = HashSet::new();
    let mut found: Vec<(Vec<Letter>, usize, usize)> = Vec::new();
    let mut elements = 0;
    let mut visit = |g: &Real2, word: &[Letter]| -> Result<()> {
        elements += 1;
        let back = PointH2::from_complex(apply_point(&inv(g), o))?;
        if dist_h2(&back, &window.center) > cutoff {
            return Ok(());
        }
        for (m, (_, _, axes)) in merged.iter().enumerate() {
            for (k, axis) in axes.iter().enumerate() {
                if axis.signed_distance(&back).abs() >= window.radius + MEET_SLACK {
                    continue;
                }
                let conj = reduced_conjugate(word, words[m][k].letters());
                if seen.insert(conj.clone()) {
                    found.push((conj, m, k));
                }
            }
        }
        Ok(())
    };
    for_each_element(surface, depth, &mut visit)?;

    let mut exact: Vec<(GeodesicH2, usize, f64)> = Vec::with_capacity(found.len());
    for (conj, m, k) in &found {
        let (idx, w, axes) = &merged[*m];
        let g = if conj == words[*m][*k].letters() {
            axes[*k]
        } else {
            surface.word_axis(&Word(conj.clone()))?.0
        };
        if window.meets(&g) {
            exact.push((g, *idx, *w));
        }
    }
    exact.sort_by(|a, b| {
        let key = |g: &GeodesicH2| (g.p().circle_angle(), g.q().circle_angle());
        key(&a.0).partial_cmp(&key(&b.0)).expect("finite angles")
    });
    let separated = separate_asymptotic(&exact.iter().map(|e| e.0).collect::<Vec<_>>())?;
    let mut leaves = Vec::with_capacity(exact.len());
    let mut curve_of_leaf = Vec::with_capacity(exact.len());
    for (g, (_, idx, w)) in separated.into_iter().zip(exact) {
        leaves.push(Leaf::new(g, w));
        curve_of_leaf.push(idx);
    }
    let lamination = FiniteLamination::new(leaves)?;
    Ok(WindowLift {
        depth_limited: lamination.is_empty(),
        lamination,
        curve_of_leaf,
        depth,
        elements,
    })
}

/// Endpoints closer than this on the circle are treated as one asymptotic cluster.
const CLUSTER_TOL: f64 = 1e-11;
/// Spacing given to the endpoints of a cluster.
const CLUSTER_STEP: f64 = 1e-13;

/// Lifts of a long curve can be asymptotic beyond double precision, so distinct
/// leaves would share an endpoint or cross by rounding. Each cluster of nearly equal
/// endpoints is re-spaced in the only order that keeps the leaves nested: the leaf
/// whose other endpoint lies farther counter-clockwise sits first.
fn separate_asymptotic(geodesics: &[GeodesicH2]) -> Result<Vec<GeodesicH2>> {
    use std::f64::consts::{PI, TAU};
    let mut ends: Vec<[f64; 2]> = geodesics
        .iter()
        .map(|g| [g.p().circle_angle(), g.q().circle_angle()])
        .collect();
    let mut order: Vec<(f64, usize, usize)> = ends
        .iter()
        .enumerate()
        .flat_map(|(i, e)| [(e[0], i, 0), (e[1], i, 1)])
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && order[end].0 - order[end - 1].0 < CLUSTER_TOL {
            end += 1;
        }
        if end - start > 1 {
            let base = order[start].0;
            let mut members: Vec<(f64, usize, usize)> = order[start..end]
                .iter()
                .map(|&(x, i, k)| {
                    let other = ends[i][1 - k];
                    ((other - x).rem_euclid(TAU), i, k)
                })
                .collect();
            members.sort_by(|a, b| b.0.total_cmp(&a.0));
            let mid = base + (order[end - 1].0 - base) / 2.0;
            let m = members.len() as f64;
            for (n, &(_, i, k)) in members.iter().enumerate() {
                ends[i][k] = mid + (n as f64 - (m - 1.0) / 2.0) * CLUSTER_STEP;
            }
        }
        start = end;
    }
    let ideal = |a: f64| {
        if a >= PI {
            Ideal::Infinity
        } else {
            Ideal::Real((a / 2.0).tan())
        }
    };
    geodesics
        .iter()
        .zip(&ends)
        .map(|(g, e)| {
            let moved = [e[0] != g.p().circle_angle(), e[1] != g.q().circle_angle()];
            if moved == [false, false] {
                Ok(*g)
            } else {
                GeodesicH2::new(ideal(e[0]), ideal(e[1]))
            }
        })
        .collect()
}

/// Rounding allowance when testing whether a rotation axis passes near the window.
const MEET_SLACK: f64 = 1e-9;

/// Freely reduced word of `g·w·g⁻¹`.
fn reduced_conjugate(g: &[Letter], w: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(2 * g.len() + w.len());
    let inverse = g.iter().rev().map(|l| l.inverse());
    for l in g.iter().copied().chain(w.iter().copied()).chain(inverse) {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

#[cfg(test)]
fn leaf_key(g: &GeodesicH2) -> (i64, i64) {
    let r = |x: Ideal| (x.circle_angle() * 1e9).round() as i64;
    (r(g.p()), r(g.q()))
}

/// Visits every reduced word of length at most `depth` once, depth first, with
/// letters in the fixed order `A, B, a, b`.
fn for_each_element<F: FnMut(&Real2, &[Letter]) -> Result<()>>(
    surface: &FuchsianSurface,
    depth: usize,
    f: &mut F,
) -> Result<()> {
    let mats: Vec<Real2> = Letter::ALL.iter().map(|&l| surface.letter_matrix(l)).collect();
    fn walk<F: FnMut(&Real2, &[Letter]) -> Result<()>>(
        m: &Real2,
        word: &mut Vec<Letter>,
        left: usize,
        mats: &[Real2],
        f: &mut F,
    ) -> Result<()> {
        f(m, word)?;
        if left == 0 {
            return Ok(());
        }
        for (k, lm) in mats.iter().enumerate() {
            if word.last() == Some(&Letter::ALL[k].inverse()) {
                continue;
            }
            word.push(Letter::ALL[k]);
            walk(&mul(m, lm), word, left - 1, mats, f)?;
            word.pop();
        }
        Ok(())
    }
    walk(&[1.0, 0.0, 0.0, 1.0], &mut Vec::new(), depth, &mats, f)
}
