use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperbolic::{Classification, MobiusMap};

/// Collinearity band, relative to the diameter of the sampled curve.
pub const ORIENT_BAND: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Embedding {
    Embedded,
    /// Segments `first` and `second` (indices of their start samples) cross.
    Crossing {
        first: usize,
        second: usize,
    },
    /// Segments come within the collinearity band without a certain crossing.
    Indeterminate {
        first: usize,
        second: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Admissible,
    NotAdmissible,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoopVerdict {
    pub verdict: Verdict,
    pub classification: Classification,
    pub embedding: Embedding,
    /// The condition that failed or could not be decided.
    pub reason: Option<String>,
}

impl LoopVerdict {
    pub fn is_admissible(&self) -> bool {
        self.verdict == Verdict::Admissible
    }
}

/// A loop is admissible when its holonomy is loxodromic and the developed lift,
/// sampled over one period, is embedded.
pub fn is_admissible_loop(holonomy: &MobiusMap, samples: &[Complex64]) -> Result<LoopVerdict> {
    if samples.len() < 4 {
        return Err(Error::InvalidInput(format!(
            "{} samples given, at least 4 needed",
            samples.len()
        )));
    }
    if let Some(i) = samples.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::InvalidInput(format!("sample {i} is not finite")));
    }
    let classification = holonomy.classify();
    let embedding = embedding(samples);
    let (verdict, reason) = match (classification, embedding) {
        (c, _)
            if matches!(
                c,
                Classification::Identity | Classification::Elliptic | Classification::Parabolic
            ) =>
        {
            (Verdict::NotAdmissible, Some(format!("holonomy is {c}, not loxodromic")))
        }
        (_, Embedding::Crossing { first, second }) => (
            Verdict::NotAdmissible,
            Some(format!(
                "developed curve crosses itself at segments {first} and {second}"
            )),
        ),
        (Classification::Indeterminate, _) => (
            Verdict::Indeterminate,
            Some("holonomy trace lies in the indeterminate band".into()),
        ),
        (_, Embedding::Indeterminate { first, second }) => (
            Verdict::Indeterminate,
            Some(format!(
                "segments {first} and {second} touch within the collinearity band"
            )),
        ),
        _ => (Verdict::Admissible, None),
    };
    Ok(LoopVerdict {
        verdict,
        classification,
        embedding,
        reason,
    })
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Signed distance of `c` from the line through `a` and `b`.
fn side(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    cross(b - a, c - a) / (b - a).norm()
}

fn point_segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let t = ((p - a).re * d.re + (p - a).im * d.im) / d.norm_sqr();
    (p - (a + d * t.clamp(0.0, 1.0))).norm()
}

enum Contact {
    Apart,
    Cross,
    Near,
}

fn contact(a: Complex64, b: Complex64, c: Complex64, d: Complex64, band: f64) -> Contact {
    let (d1, d2, d3, d4) = (side(a, b, c), side(a, b, d), side(c, d, a), side(c, d, b));
    let clear = [d1, d2, d3, d4].iter().all(|x| x.abs() > band);
    if clear && d1.signum() != d2.signum() && d3.signum() != d4.signum() {
        return Contact::Cross;
    }
    let separated = |x: f64, y: f64| (x > band && y > band) || (x < -band && y < -band);
    if separated(d1, d2) || separated(d3, d4) {
        return Contact::Apart;
    }
    let gap = [
        point_segment_distance(a, c, d),
        point_segment_distance(b, c, d),
        point_segment_distance(c, a, b),
        point_segment_distance(d, a, b),
    ]
    .into_iter()
    .fold(f64::INFINITY, f64::min);
    if gap > band {
        Contact::Apart
    } else {
        Contact::Near
    }
}

/// Sweep over segments sorted by their left end, testing pairs whose x-ranges
/// overlap. Adjacent segments only fail by folding back onto each other.
fn embedding(points: &[Complex64]) -> Embedding {
    let (mut lo, mut hi) = (points[0], points[0]);
    for z in points {
        lo = Complex64::new(lo.re.min(z.re), lo.im.min(z.im));
        hi = Complex64::new(hi.re.max(z.re), hi.im.max(z.im));
    }
    let band = ORIENT_BAND * (hi - lo).norm().max(f64::MIN_POSITIVE);
    let n = points.len() - 1;
    for i in 0..n {
        if (points[i + 1] - points[i]).norm() <= band {
            return Embedding::Indeterminate { first: i, second: i };
        }
    }
    for i in 0..n.saturating_sub(1) {
        let (a, b, c) = (points[i], points[i + 1], points[i + 2]);
        let u = b - a;
        let v = c - b;
        if side(a, b, c).abs() <= band && u.re * v.re + u.im * v.im < 0.0 {
            return Embedding::Indeterminate {
                first: i,
                second: i + 1,
            };
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let left = |i: usize| points[i].re.min(points[i + 1].re);
    let right = |i: usize| points[i].re.max(points[i + 1].re);
    order.sort_by(|&x, &y| left(x).total_cmp(&left(y)));
    let mut active: Vec<usize> = Vec::new();
    let mut near: Option<(usize, usize)> = None;
    for &i in &order {
        active.retain(|&j| right(j) >= left(i) - band);
        for &j in &active {
            let (first, second) = (i.min(j), i.max(j));
            if second == first + 1 {
                continue;
            }
            match contact(
                points[first],
                points[first + 1],
                points[second],
                points[second + 1],
                band,
            ) {
                Contact::Cross => return Embedding::Crossing { first, second },
                Contact::Near => {
                    near.get_or_insert((first, second));
                }
                Contact::Apart => {}
            }
        }
        active.push(i);
    }
    match near {
        Some((first, second)) => Embedding::Indeterminate { first, second },
        None => Embedding::Embedded,
    }
}
