//! C ABI over `pleat`.
//!
//! Objects are opaque handles created by `*_new`/`*_from_*` functions and released
//! with the matching `*_free`. Every fallible call returns a [`PleatStatus`]; the
//! message of the last failure on the calling thread is available from
//! [`pleat_last_error`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use pleat::bending::{bend_point, BendConfig, Certificate};
use pleat::grafting::{graft_annulus, Crescent};
use pleat::hyperbolic::{GeodesicH2, GeodesicSegment, Ideal, MobiusMap, PointH2};
use pleat::lamination::{FiniteLamination, Leaf};
use pleat::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PleatStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Geometry = 3,
    Panic = 4,
}

/// A finite measured lamination of the upper half-plane.
pub struct PleatLamination {
    inner: FiniteLamination,
}

/// A bending map, fixed by a lamination and the region containing `i`.
pub struct PleatBendMap {
    inner: BendConfig,
}

/// Quasi-isometry certificate of a lamination.
pub struct PleatCertificate {
    inner: Certificate,
}

/// A point `(z, t)` of upper half-space, `z = re + i·im`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PleatPointH3 {
    pub re: f64,
    pub im: f64,
    pub t: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PleatConstants {
    pub d: f64,
    pub theta0: f64,
    pub delta: f64,
    pub m: f64,
    pub b: f64,
    pub c: f64,
    pub s: f64,
    pub t: f64,
    /// Nonzero when the hypotheses hold and the constants are in range.
    pub valid: i32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PleatGraftSummary {
    pub trace_before: f64,
    pub trace_after: f64,
    pub winding_before: i64,
    pub winding_after: i64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PleatStatus {
    match e {
        Error::Parse(_)
        | Error::MalformedLeaf { .. }
        | Error::InvalidInput(_)
        | Error::NonPositiveWeight(..)
        | Error::Interleaved(..)
        | Error::SharedEndpoint(..)
        | Error::NotInUpperHalfPlane(_)
        | Error::NotInUpperHalfSpace(_)
        | Error::DegenerateGeodesic
        | Error::DegenerateSegment
        | Error::RationalSlope(_) => PleatStatus::InvalidInput,
        _ => PleatStatus::Geometry,
    }
}

/// Runs `f`, converting errors and panics into a status and the thread's last error.
fn guard<F: FnOnce() -> Result<(), (PleatStatus, String)>>(f: F) -> PleatStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PleatStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            PleatStatus::Panic
        }
    }
}

fn lib<T>(r: pleat::Result<T>) -> Result<T, (PleatStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (PleatStatus, String) {
    (PleatStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (PleatStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, (PleatStatus, String)> {
    p.as_mut().ok_or_else(|| null(what))
}

fn ideal(x: f64) -> Result<Ideal, (PleatStatus, String)> {
    if x.is_infinite() {
        Ok(Ideal::Infinity)
    } else if x.is_finite() {
        Ok(Ideal::Real(x))
    } else {
        Err((PleatStatus::InvalidInput, "endpoint is NaN".into()))
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pleat_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pleat_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from a `pleat_*_to_json` call and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pleat_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `{"leaves": [{"p": .., "q": .., "w": ..}, ..]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out_lamination` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pleat_lamination_from_json(
    json: *const c_char,
    out_lamination: *mut *mut PleatLamination,
) -> PleatStatus {
    guard(|| {
        let slot = out(out_lamination, "out_lamination")?;
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|_| (PleatStatus::InvalidInput, "json is not UTF-8".to_string()))?;
        let inner = lib(FiniteLamination::from_json(text))?;
        *slot = Box::into_raw(Box::new(PleatLamination { inner }));
        Ok(())
    })
}

/// Builds a lamination from `n` leaves with endpoints `p[k], q[k]` (±INFINITY for
/// the point at infinity) and weights `w[k]`.
///
/// # Safety
/// `p`, `q` and `w` must point to `n` doubles each (any of them may be NULL when
/// `n` is 0), and `out_lamination` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pleat_lamination_from_leaves(
    p: *const f64,
    q: *const f64,
    w: *const f64,
    n: usize,
    out_lamination: *mut *mut PleatLamination,
) -> PleatStatus {
    guard(|| {
        let slot = out(out_lamination, "out_lamination")?;
        let mut leaves = Vec::with_capacity(n);
        if n > 0 {
            if p.is_null() || q.is_null() || w.is_null() {
                return Err(null("leaf array"));
            }
            let (p, q, w) = (
                std::slice::from_raw_parts(p, n),
                std::slice::from_raw_parts(q, n),
                std::slice::from_raw_parts(w, n),
            );
            for k in 0..n {
                let g = lib(GeodesicH2::new(ideal(p[k])?, ideal(q[k])?))?;
                leaves.push(Leaf::new(g, w[k]));
            }
        }
        let inner = lib(FiniteLamination::new(leaves))?;
        *slot = Box::into_raw(Box::new(PleatLamination { inner }));
        Ok(())
    })
}

/// # Safety
/// `lamination` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pleat_lamination_free(lamination: *mut PleatLamination) {
    if !lamination.is_null() {
        drop(Box::from_raw(lamination));
    }
}

/// Number of leaves; 0 for NULL.
///
/// # Safety
/// `lamination` must be NULL or a valid handle.
#[no_mangle]
pub unsafe extern "C" fn pleat_lamination_len(lamination: *const PleatLamination) -> usize {
    lamination.as_ref().map_or(0, |l| l.inner.len())
}

/// Supremum of the transversal measure over segments shorter than 1.
///
/// # Safety
/// `lamination` and `out_norm` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pleat_lamination_norm(lamination: *const PleatLamination, out_norm: *mut f64) -> PleatStatus {
    guard(|| {
        let l = deref(lamination, "lamination")?;
        *out(out_norm, "out_norm")? = l.inner.norm();
        Ok(())
    })
}

/// Total weight of the leaves crossing the segment from `(x0, y0)` to `(x1, y1)`.
///
/// # Safety
/// `lamination` and `out_measure` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pleat_lamination_transversal_measure(
    lamination: *const PleatLamination,
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
    out_measure: *mut f64,
) -> PleatStatus {
    guard(|| {
        let l = deref(lamination, "lamination")?;
        let slot = out(out_measure, "out_measure")?;
        let s = lib(PointH2::new(x0, y0).and_then(|a| GeodesicSegment::new(a, PointH2::new(x1, y1)?)))?;
        *slot = l.inner.transversal_measure(&s);
        Ok(())
    })
}

/// Serializes the lamination; release the result with [`pleat_string_free`].
///
/// # Safety
/// `lamination` and `out_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pleat_lamination_to_json(
    lamination: *const PleatLamination,
    out_json: *mut *mut c_char,
) -> PleatStatus {
    guard(|| {
        let l = deref(lamination, "lamination")?;
        let slot = out(out_json, "out_json")?;
        *slot = CString::new(l.inner.to_json()).expect("JSON has no NUL").into_raw();
        Ok(())
    })
}

/// Bending map of a lamination with the base region containing `i`. The lamination
/// handle may be freed afterwards.
///
/// # Safety
/// `lamination` and `out_map` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pleat_bend_map_new(
    lamination: *const PleatLamination,
    out_map: *mut *mut PleatBendMap,
) -> PleatStatus {
    guard(|| {
        let l = deref(lamination, "lamination")?;
        let slot = out(out_map, "out_map")?;
        *slot = Box::into_raw(Box::new(PleatBendMap {
            inner: BendConfig::standard(l.inner.clone()),
        }));
        Ok(())
    })
}

/// # Safety
/// `map` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pleat_bend_map_free(map: *mut PleatBendMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Image of `x + iy` under the bending map.
///
/// # Safety
/// `map` and `out_point` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pleat_bend_point(
    map: *const PleatBendMap,
    x: f64,
    y: f64,
    out_point: *mut PleatPointH3,
) -> PleatStatus {
    guard(|| {
        let m = deref(map, "map")?;
        let slot = out(out_point, "out_point")?;
        let p = bend_point(&m.inner, &lib(PointH2::new(x, y))?);
        *slot = PleatPointH3 {
            re: p.z().re,
            im: p.z().im,
            t: p.t(),
        };
        Ok(())
    })
}

/// Certificate for `(D, θ₀)` with the boundary leaves given by their indices.
///
/// # Safety
/// `lamination` and `out_certificate` must be valid; `boundary` must point to
/// `n_boundary` indices (or be NULL when `n_boundary` is 0).
#[no_mangle]
pub unsafe extern "C" fn pleat_certificate_build(
    lamination: *const PleatLamination,
    boundary: *const usize,
    n_boundary: usize,
    d: f64,
    theta0: f64,
    out_certificate: *mut *mut PleatCertificate,
) -> PleatStatus {
    guard(|| {
        let l = deref(lamination, "lamination")?;
        let slot = out(out_certificate, "out_certificate")?;
        let idx: &[usize] = if n_boundary == 0 {
            &[]
        } else if boundary.is_null() {
            return Err(null("boundary"));
        } else {
            std::slice::from_raw_parts(boundary, n_boundary)
        };
        if let Some(&bad) = idx.iter().find(|&&i| i >= l.inner.len()) {
            return Err((PleatStatus::InvalidInput, format!("boundary index {bad} out of range")));
        }
        let sub = l.inner.subset(idx);
        let inner = lib(Certificate::build(&l.inner, &sub, d, theta0))?;
        *slot = Box::into_raw(Box::new(PleatCertificate { inner }));
        Ok(())
    })
}

/// # Safety
/// `certificate` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pleat_certificate_free(certificate: *mut PleatCertificate) {
    if !certificate.is_null() {
        drop(Box::from_raw(certificate));
    }
}

/// # Safety
/// `certificate` and `out_constants` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pleat_certificate_constants(
    certificate: *const PleatCertificate,
    out_constants: *mut PleatConstants,
) -> PleatStatus {
    guard(|| {
        let c = &deref(certificate, "certificate")?.inner;
        *out(out_constants, "out_constants")? = PleatConstants {
            d: c.d,
            theta0: c.theta0,
            delta: c.delta,
            m: c.bounds.m,
            b: c.bounds.b,
            c: c.bounds.c,
            s: c.s,
            t: c.t,
            valid: c.valid as i32,
        };
        Ok(())
    })
}

/// Full certificate as JSON; release the result with [`pleat_string_free`].
///
/// # Safety
/// `certificate` and `out_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pleat_certificate_to_json(
    certificate: *const PleatCertificate,
    out_json: *mut *mut c_char,
) -> PleatStatus {
    guard(|| {
        let c = deref(certificate, "certificate")?;
        let slot = out(out_json, "out_json")?;
        *slot = CString::new(c.inner.to_json()).expect("JSON has no NUL").into_raw();
        Ok(())
    })
}

/// `|q·α − p|`.
#[no_mangle]
pub extern "C" fn pleat_loop_measure(alpha: f64, p: u64, q: u64) -> f64 {
    pleat::surface::loop_measure(alpha, p, q)
}

/// Number of preimages of `re + i·im` under the developing map of the crescent of
/// angle `theta`.
///
/// # Safety
/// `out_count` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pleat_crescent_fiber_count(
    theta: f64,
    re: f64,
    im: f64,
    out_count: *mut usize,
) -> PleatStatus {
    guard(|| {
        let slot = out(out_count, "out_count")?;
        let c = lib(Crescent::new(theta))?;
        *slot = lib(c.fiber(Complex64::new(re, im)))?.len();
        Ok(())
    })
}

/// Grafts the round annulus with holonomy `[[a, b], [c, d]]` (real entries) by a
/// cylinder of degree `n`.
///
/// # Safety
/// `out_summary` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pleat_graft_annulus(
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    n: u32,
    out_summary: *mut PleatGraftSummary,
) -> PleatStatus {
    guard(|| {
        let slot = out(out_summary, "out_summary")?;
        let h = lib(MobiusMap::from_real(a, b, c, d))?;
        let g = lib(graft_annulus(&h, n, 16))?;
        *slot = PleatGraftSummary {
            trace_before: g.trace_before,
            trace_after: g.trace_after,
            winding_before: g.winding_before,
            winding_after: g.winding_after,
        };
        Ok(())
    })
}
