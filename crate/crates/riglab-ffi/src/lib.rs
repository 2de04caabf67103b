//! C ABI for the random intersection graph laboratory.
//!
//! Conventions: every fallible call returns a [`RiglabStatus`] and writes its
//! result through out-pointers; handles are opaque and freed with their
//! matching `_free` function; the last error message of the current thread is
//! available from [`riglab_last_error`] as a string the caller must release
//! with [`riglab_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use riglab::analytic::{
    dstar_pmf, lambda0_spec, mean_lambda0, mixed_poisson_pmf, tau_pmf, tv_distance_padded, Pmf,
};
use riglab::genmodel::{build_intersection, generate_fast, ModelParams};
use riglab::rng::{derive_seed, StreamKind, StreamRng};
use riglab::stats::EmpiricalReport;
use riglab::weights::{BetaRegime, Moments, WeightSpec};

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(msg).ok();
    });
}

/// Status code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RiglabStatus {
    Ok = 0,
    NullPointer = 1,
    Utf8Error = 2,
    InvalidArgument = 3,
    NumericError = 4,
    GuardTripped = 5,
}

/// Opaque weight-law handle.
pub struct RiglabWeight {
    spec: WeightSpec,
}

/// Opaque truncated-pmf handle (probabilities plus residual tail mass).
pub struct RiglabPmf {
    pmf: Pmf,
}

/// Library version as a static NUL-terminated string; do not free.
#[no_mangle]
pub extern "C" fn riglab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Last error message of this thread, or NULL when none was recorded.
/// The caller owns the returned string and frees it with
/// `riglab_string_free`.
#[no_mangle]
pub extern "C" fn riglab_last_error() -> *mut c_char {
    LAST_ERROR.with(|slot| match slot.borrow().as_ref() {
        Some(msg) => msg.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must have been returned by a riglab function and not freed before.
#[no_mangle]
pub unsafe extern "C" fn riglab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a weight law from its JSON form, e.g.
/// `{"variant":"pareto","t0":1.0,"kappa":3.5}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn riglab_weight_from_json(
    json: *const c_char,
    out: *mut *mut RiglabWeight,
) -> RiglabStatus {
    if json.is_null() || out.is_null() {
        return RiglabStatus::NullPointer;
    }
    let text = match CStr::from_ptr(json).to_str() {
        Ok(t) => t,
        Err(e) => {
            set_error(format!("invalid utf-8 in weight json: {e}"));
            return RiglabStatus::Utf8Error;
        }
    };
    let spec: WeightSpec = match serde_json::from_str(text) {
        Ok(s) => s,
        Err(e) => {
            set_error(format!("weight json parse error: {e}"));
            return RiglabStatus::InvalidArgument;
        }
    };
    if let Err(e) = spec.validate() {
        set_error(e.to_string());
        return RiglabStatus::InvalidArgument;
    }
    *out = Box::into_raw(Box::new(RiglabWeight { spec }));
    RiglabStatus::Ok
}

/// # Safety
/// `w` must be a handle from `riglab_weight_from_json`, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn riglab_weight_free(w: *mut RiglabWeight) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Closed-form moment `E Z^order`.
///
/// # Safety
/// `w` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn riglab_weight_moment(
    w: *const RiglabWeight,
    order: i32,
    out: *mut f64,
) -> RiglabStatus {
    if w.is_null() || out.is_null() {
        return RiglabStatus::NullPointer;
    }
    match (*w).spec.moment(order) {
        Ok(v) => {
            *out = v;
            RiglabStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            RiglabStatus::NumericError
        }
    }
}

/// One reproducible draw from the stream keyed by `(seed, index)`.
///
/// # Safety
/// `w` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn riglab_weight_sample(
    w: *const RiglabWeight,
    seed: u64,
    index: u64,
    out: *mut f64,
) -> RiglabStatus {
    if w.is_null() || out.is_null() {
        return RiglabStatus::NullPointer;
    }
    let mut rng = StreamRng::new(seed, StreamKind::Misc, index);
    *out = (*w).spec.sample(&mut rng);
    RiglabStatus::Ok
}

/// Mixed Poisson pmf with intensity `scale * Z`, `Z ~ mixer`; entries are
/// certified within `tol`.
///
/// # Safety
/// `mixer` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn riglab_mixed_poisson_pmf(
    mixer: *const RiglabWeight,
    scale: f64,
    r_max: usize,
    tol: f64,
    out: *mut *mut RiglabPmf,
) -> RiglabStatus {
    if mixer.is_null() || out.is_null() {
        return RiglabStatus::NullPointer;
    }
    match mixed_poisson_pmf(&(*mixer).spec, scale, r_max, tol) {
        Ok(pmf) => {
            *out = Box::into_raw(Box::new(RiglabPmf { pmf }));
            RiglabStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            RiglabStatus::NumericError
        }
    }
}

/// Limit law of the vertex degree in the beta regime (`m/n -> beta`):
/// the compound Poisson mixture `d*` built from the two weight laws.
///
/// # Safety
/// `p1`, `p2` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn riglab_dstar_pmf(
    p1: *const RiglabWeight,
    p2: *const RiglabWeight,
    beta: f64,
    r_max: usize,
    tol: f64,
    out: *mut *mut RiglabPmf,
) -> RiglabStatus {
    if p1.is_null() || p2.is_null() || out.is_null() {
        return RiglabStatus::NullPointer;
    }
    let run = || -> Result<Pmf, String> {
        let moments = Moments::from_specs(&(*p1).spec, &(*p2).spec, BetaRegime::Finite(beta));
        let lambda0 = lambda0_spec(&(*p1).spec, &moments)
            .map_err(|e| e.to_string())?
            .pmf(r_max + 1, tol)
            .map_err(|e| e.to_string())?;
        let tau = tau_pmf(&lambda0, mean_lambda0(&moments).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        dstar_pmf(&(*p2).spec, &tau, moments.a1, beta, r_max, tol).map_err(|e| e.to_string())
    };
    match run() {
        Ok(pmf) => {
            *out = Box::into_raw(Box::new(RiglabPmf { pmf }));
            RiglabStatus::Ok
        }
        Err(msg) => {
            set_error(msg);
            RiglabStatus::NumericError
        }
    }
}

/// Limit of the clustering coefficient, `kappa / (kappa + sqrt(beta))`.
///
/// # Safety
/// `p1`, `p2` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn riglab_clustering_limit(
    p1: *const RiglabWeight,
    p2: *const RiglabWeight,
    beta: f64,
    out: *mut f64,
) -> RiglabStatus {
    if p1.is_null() || p2.is_null() || out.is_null() {
        return RiglabStatus::NullPointer;
    }
    let moments = Moments::from_specs(&(*p1).spec, &(*p2).spec, BetaRegime::Finite(beta));
    match riglab::analytic::clustering_limit(&moments) {
        Ok(v) => {
            *out = v;
            RiglabStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            RiglabStatus::NumericError
        }
    }
}

/// Sample `replicas` intersection graphs with the fast generator and return
/// the pooled empirical degree pmf.
///
/// # Safety
/// `p1`, `p2` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn riglab_simulate_degree_pmf(
    p1: *const RiglabWeight,
    p2: *const RiglabWeight,
    n: usize,
    m: usize,
    seed: u64,
    replicas: u32,
    out: *mut *mut RiglabPmf,
) -> RiglabStatus {
    if p1.is_null() || p2.is_null() || out.is_null() {
        return RiglabStatus::NullPointer;
    }
    if replicas == 0 {
        set_error("replicas must be >= 1");
        return RiglabStatus::InvalidArgument;
    }
    let mut pooled = EmpiricalReport::default();
    for r in 0..replicas {
        let params = ModelParams {
            n,
            m,
            p1: (*p1).spec.clone(),
            p2: (*p2).spec.clone(),
            seed: derive_seed(seed, StreamKind::Replica, r as u64),
        };
        let incidence = match generate_fast(&params) {
            Ok(i) => i,
            Err(e) => {
                set_error(e.to_string());
                return RiglabStatus::InvalidArgument;
            }
        };
        let view = match build_intersection(&incidence, u128::MAX) {
            Ok(v) => v,
            Err(e) => {
                set_error(e.to_string());
                return RiglabStatus::GuardTripped;
            }
        };
        pooled.merge(&EmpiricalReport::from_view(&view));
    }
    *out = Box::into_raw(Box::new(RiglabPmf {
        pmf: pooled.degree_pmf(),
    }));
    RiglabStatus::Ok
}

/// Number of retained entries (`r_max + 1`); 0 for NULL.
///
/// # Safety
/// `p` must be a valid pmf handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn riglab_pmf_len(p: *const RiglabPmf) -> usize {
    if p.is_null() {
        0
    } else {
        (*p).pmf.probs.len()
    }
}

/// Probability at `r` (0 beyond the truncation or for NULL).
///
/// # Safety
/// `p` must be a valid pmf handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn riglab_pmf_get(p: *const RiglabPmf, r: usize) -> f64 {
    if p.is_null() {
        0.0
    } else {
        (*p).pmf.get(r)
    }
}

/// Certified upper bound on the mass beyond the truncation.
///
/// # Safety
/// `p` must be a valid pmf handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn riglab_pmf_residual(p: *const RiglabPmf) -> f64 {
    if p.is_null() {
        0.0
    } else {
        (*p).pmf.residual
    }
}

/// Copy the probabilities into `buf` (at most `len` entries); returns the
/// number written.
///
/// # Safety
/// `buf` must point to at least `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn riglab_pmf_copy(p: *const RiglabPmf, buf: *mut f64, len: usize) -> usize {
    if p.is_null() || buf.is_null() {
        return 0;
    }
    let probs = &(*p).pmf.probs;
    let count = probs.len().min(len);
    std::ptr::copy_nonoverlapping(probs.as_ptr(), buf, count);
    count
}

/// # Safety
/// `p` must be a pmf handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn riglab_pmf_free(p: *mut RiglabPmf) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Total-variation distance between two pmfs after zero-padding to a common
/// length: `core` over the shared support, `upper` adds both residuals.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn riglab_tv_distance(
    a: *const RiglabPmf,
    b: *const RiglabPmf,
    core: *mut f64,
    upper: *mut f64,
) -> RiglabStatus {
    if a.is_null() || b.is_null() || core.is_null() || upper.is_null() {
        return RiglabStatus::NullPointer;
    }
    let tv = tv_distance_padded(&(*a).pmf, &(*b).pmf);
    *core = tv.core;
    *upper = tv.upper;
    RiglabStatus::Ok
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weight(json: &str) -> *mut RiglabWeight {
        let c = CString::new(json).unwrap();
        let mut out: *mut RiglabWeight = std::ptr::null_mut();
        let status = unsafe { riglab_weight_from_json(c.as_ptr(), &mut out) };
        assert_eq!(status, RiglabStatus::Ok);
        out
    }

    #[test]
    fn version_is_nul_terminated() {
        let v = unsafe { CStr::from_ptr(riglab_version()) };
        assert!(!v.to_str().unwrap().is_empty());
    }

    #[test]
    fn weight_round_trip_and_moment() {
        let w = weight(r#"{"variant":"pareto","t0":1.0,"kappa":4.0}"#);
        let mut m1 = 0.0;
        assert_eq!(
            unsafe { riglab_weight_moment(w, 1, &mut m1) },
            RiglabStatus::Ok
        );
        assert!((m1 - 1.5).abs() < 1e-12);
        // infinite moment surfaces as NumericError with a message
        let mut m3 = 0.0;
        assert_eq!(
            unsafe { riglab_weight_moment(w, 3, &mut m3) },
            RiglabStatus::NumericError
        );
        let err = riglab_last_error();
        assert!(!err.is_null());
        let text = unsafe { CStr::from_ptr(err) }.to_str().unwrap().to_owned();
        assert!(text.contains("infinite"), "{text}");
        unsafe { riglab_string_free(err) };
        unsafe { riglab_weight_free(w) };
    }

    #[test]
    fn bad_json_is_invalid_argument() {
        let c = CString::new("{\"variant\":\"pareto\"}").unwrap();
        let mut out: *mut RiglabWeight = std::ptr::null_mut();
        let status = unsafe { riglab_weight_from_json(c.as_ptr(), &mut out) };
        assert_eq!(status, RiglabStatus::InvalidArgument);
        assert!(out.is_null());
        assert_eq!(
            unsafe { riglab_weight_from_json(std::ptr::null(), &mut out) },
            RiglabStatus::NullPointer
        );
    }

    #[test]
    fn mixed_poisson_geometric_closed_form() {
        // Exponential(1) mixer at scale 3 gives the geometric(1/4) law
        let w = weight(r#"{"variant":"exponential","rate":1.0}"#);
        let mut pmf: *mut RiglabPmf = std::ptr::null_mut();
        let status = unsafe { riglab_mixed_poisson_pmf(w, 3.0, 60, 1e-12, &mut pmf) };
        assert_eq!(status, RiglabStatus::Ok);
        assert_eq!(unsafe { riglab_pmf_len(pmf) }, 61);
        for r in 0..10usize {
            let want = 0.25 * 0.75f64.powi(r as i32);
            let got = unsafe { riglab_pmf_get(pmf, r) };
            assert!((got - want).abs() < 1e-12, "r={r}: {got} vs {want}");
        }
        let mut buf = vec![0.0; 61];
        assert_eq!(
            unsafe { riglab_pmf_copy(pmf, buf.as_mut_ptr(), buf.len()) },
            61
        );
        assert!((buf[0] - 0.25).abs() < 1e-12);
        unsafe { riglab_pmf_free(pmf) };
        unsafe { riglab_weight_free(w) };
    }

    #[test]
    fn dstar_and_simulated_degree_agree() {
        let one = weight(r#"{"variant":"degenerate","value":1.0}"#);
        let mut analytic: *mut RiglabPmf = std::ptr::null_mut();
        assert_eq!(
            unsafe { riglab_dstar_pmf(one, one, 1.0, 40, 1e-10, &mut analytic) },
            RiglabStatus::Ok
        );
        // P(d* = 0) = exp(-(1 - e^-1))
        let want = (-(1.0 - (-1.0f64).exp())).exp();
        assert!((unsafe { riglab_pmf_get(analytic, 0) } - want).abs() < 1e-10);
        let mut empirical: *mut RiglabPmf = std::ptr::null_mut();
        assert_eq!(
            unsafe { riglab_simulate_degree_pmf(one, one, 20_000, 20_000, 9, 10, &mut empirical) },
            RiglabStatus::Ok
        );
        let (mut core, mut upper) = (0.0, 0.0);
        assert_eq!(
            unsafe { riglab_tv_distance(empirical, analytic, &mut core, &mut upper) },
            RiglabStatus::Ok
        );
        assert!(upper < 0.05, "tv {upper}");
        unsafe { riglab_pmf_free(analytic) };
        unsafe { riglab_pmf_free(empirical) };
        unsafe { riglab_weight_free(one) };
    }

    #[test]
    fn clustering_limit_unit_weights() {
        let one = weight(r#"{"variant":"degenerate","value":1.0}"#);
        let mut c = 0.0;
        assert_eq!(
            unsafe { riglab_clustering_limit(one, one, 1.0, &mut c) },
            RiglabStatus::Ok
        );
        assert!((c - 0.5).abs() < 1e-12);
        unsafe { riglab_weight_free(one) };
    }
}
