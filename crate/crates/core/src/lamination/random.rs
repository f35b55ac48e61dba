//! Seeded generators for laminations and sample points.

use rand::Rng;

use super::{FiniteLamination, Leaf};
use crate::hyperbolic::{GeodesicH2, GeodesicSegment, MobiusMap, PointH2};

/// A point of the hyperbolic disk of radius `radius` about `center`, uniform for
/// hyperbolic area.
pub fn point_in_disk<R: Rng + ?Sized>(rng: &mut R, center: &PointH2, radius: f64) -> PointH2 {
    let u: f64 = rng.gen();
    let r = (1.0 + u * (radius.cosh() - 1.0)).acosh();
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    // point of the Poincaré disk at hyperbolic distance r from 0, sent to H² with 0 ↦ i
    let rho = (r / 2.0).tanh();
    let (s, c) = phi.sin_cos();
    let (wx, wy) = (rho * c, rho * s);
    // z = i (1 + w)/(1 − w)
    let den = (1.0 - wx) * (1.0 - wx) + wy * wy;
    let x = -2.0 * wy / den;
    let y = (1.0 - wx * wx - wy * wy) / den;
    let z = PointH2::new(x, y.max(f64::MIN_POSITIVE)).expect("disk interior maps into H²");
    let lift = MobiusMap::from_real(
        center.y().sqrt(),
        center.x() / center.y().sqrt(),
        0.0,
        1.0 / center.y().sqrt(),
    )
    .expect("regular");
    lift.apply_h2(&z).expect("real map")
}

/// A random geodesic segment with start in the given disk, uniform direction and
/// length in `(0, max_len)`.
pub fn segment_in_disk<R: Rng + ?Sized>(rng: &mut R, center: &PointH2, radius: f64, max_len: f64) -> GeodesicSegment {
    loop {
        let a = point_in_disk(rng, center, radius);
        let len = rng.gen_range(0.0..max_len);
        let b = point_at_distance(rng, &a, len);
        if let Ok(s) = GeodesicSegment::new(a, b) {
            return s;
        }
    }
}

/// A point at hyperbolic distance `len` from `a` in a uniformly random direction.
pub fn point_at_distance<R: Rng + ?Sized>(rng: &mut R, a: &PointH2, len: f64) -> PointH2 {
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    // geodesic from i leaving at angle phi from the upward vertical
    let (s, c) = (phi / 2.0).sin_cos();
    let rot = MobiusMap::from_real(c, s, -s, c).expect("rotation");
    let up = PointH2::new(0.0, len.exp()).expect("positive");
    let z = rot.apply_h2(&up).expect("real map");
    let lift = MobiusMap::from_real(a.y().sqrt(), a.x() / a.y().sqrt(), 0.0, 1.0 / a.y().sqrt()).expect("regular");
    lift.apply_h2(&z).expect("real map")
}

/// Pairs `0..2n` into a uniformly chosen non-crossing perfect matching shape.
fn noncrossing_matching<R: Rng + ?Sized>(rng: &mut R, lo: usize, hi: usize, out: &mut Vec<(usize, usize)>) {
    // points lo..hi (exclusive), even count
    if hi <= lo {
        return;
    }
    let pairs = (hi - lo) / 2;
    let k = rng.gen_range(0..pairs);
    let partner = lo + 2 * k + 1;
    out.push((lo, partner));
    noncrossing_matching(rng, lo + 1, partner, out);
    noncrossing_matching(rng, partner + 1, hi, out);
}

/// A lamination of `n` leaves whose endpoints are drawn uniformly on the circle
/// (then sent to R by the Cayley transform) and paired without crossings.
/// Weights are uniform in `(0.5, 1.5)`, before any rescaling by the caller.
pub fn random_lamination<R: Rng + ?Sized>(rng: &mut R, n: usize) -> FiniteLamination {
    loop {
        let mut angles: Vec<f64> = (0..2 * n)
            .map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
            .collect();
        angles.sort_by(f64::total_cmp);
        if angles.windows(2).any(|w| w[1] - w[0] < 1e-9) {
            continue;
        }
        let reals: Vec<f64> = angles.iter().map(|a| (a / 2.0).tan()).collect();
        let mut pairs = Vec::with_capacity(n);
        noncrossing_matching(rng, 0, 2 * n, &mut pairs);
        let leaves = pairs
            .into_iter()
            .map(|(i, j)| {
                Leaf::new(
                    GeodesicH2::from_reals(reals[i], reals[j]).expect("distinct endpoints"),
                    rng.gen_range(0.5..1.5),
                )
            })
            .collect();
        if let Ok(l) = FiniteLamination::new(leaves) {
            return l;
        }
    }
}

/// A random lamination rescaled so that its norm equals `target`.
pub fn random_lamination_with_norm<R: Rng + ?Sized>(rng: &mut R, n: usize, target: f64) -> FiniteLamination {
    let l = random_lamination(rng, n);
    if l.is_empty() {
        return l;
    }
    let k = target / l.norm();
    l.scaled(k).expect("positive factor")
}

/// A lamination of `n` leaves whose endpoints lie in `(lo, hi)`, paired without crossings.
pub fn random_lamination_in<R: Rng + ?Sized>(rng: &mut R, n: usize, lo: f64, hi: f64) -> FiniteLamination {
    loop {
        let mut xs: Vec<f64> = (0..2 * n).map(|_| rng.gen_range(lo..hi)).collect();
        xs.sort_by(f64::total_cmp);
        if xs.windows(2).any(|w| w[1] - w[0] < 1e-9) {
            continue;
        }
        let mut pairs = Vec::with_capacity(n);
        noncrossing_matching(rng, 0, 2 * n, &mut pairs);
        let leaves = pairs
            .into_iter()
            .map(|(i, j)| {
                Leaf::new(
                    GeodesicH2::from_reals(xs[i], xs[j]).expect("distinct endpoints"),
                    rng.gen_range(0.5..1.5),
                )
            })
            .collect();
        if let Ok(l) = FiniteLamination::new(leaves) {
            return l;
        }
    }
}
