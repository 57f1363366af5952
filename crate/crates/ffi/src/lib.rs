//! C ABI surface over the imaging core. Handles are opaque pointers
//! owned by the caller and released with the matching `_free` function;
//! every fallible call returns a `csar_status` and stores a description
//! of the most recent failure in thread-local storage.

#![allow(non_camel_case_types)]

use std::ffi::{c_char, c_double, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use csar_core::error::Error;
use csar_core::geometry::{derive_geometry, DerivedGeometry};
use csar_core::image::{read_image, write_image, ComplexImage};
use csar_core::params::RadarParams;
use csar_core::rda::{build_filters, focus, RdaFilters};
use csar_core::sampling::{make_pattern, split_rate, subsample};
use csar_core::scene::PointScene;
use csar_core::sim::{add_noise, generate_raw, NoiseSpec};
use csar_core::solver::{reconstruct, SolverConfig};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum csar_status {
    /// Success.
    CSAR_OK = 0,
    /// A required pointer argument was null.
    CSAR_NULL_ARGUMENT = 1,
    /// An argument failed validation.
    CSAR_INVALID_ARGUMENT = 2,
    /// The operation itself failed; see `csar_last_error`.
    CSAR_RUNTIME_ERROR = 3,
    /// A Rust panic was caught at the boundary.
    CSAR_INTERNAL_ERROR = 4,
}

use csar_status::*;

thread_local! {
    static LAST_ERROR: std::cell::RefCell<CString> =
        std::cell::RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().map(|c| if c == '\0' { ' ' } else { c }).collect();
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(sanitized).unwrap());
}

fn classify(err: &Error) -> csar_status {
    match err {
        Error::InvalidParams(_) | Error::InvalidConfig(_) | Error::DimensionMismatch { .. } => {
            CSAR_INVALID_ARGUMENT
        }
        _ => CSAR_RUNTIME_ERROR,
    }
}

fn fail(err: Error) -> csar_status {
    let status = classify(&err);
    set_error(&err.to_string());
    status
}

/// Geometry handle: validated radar parameters plus the derived focusing
/// filters. Opaque to C.
pub struct csar_geometry {
    geo: DerivedGeometry,
    filters: RdaFilters,
}

/// Complex image handle (row-major interleaved storage). Opaque to C.
pub struct csar_image {
    inner: ComplexImage,
}

fn guard<F: FnOnce() -> csar_status>(f: F) -> csar_status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic caught at the C boundary");
            CSAR_INTERNAL_ERROR
        }
    }
}

unsafe fn path_arg<'a>(p: *const c_char) -> Result<&'a Path, csar_status> {
    if p.is_null() {
        set_error("path argument is null");
        return Err(CSAR_NULL_ARGUMENT);
    }
    match CStr::from_ptr(p).to_str() {
        Ok(s) => Ok(Path::new(s)),
        Err(_) => {
            set_error("path argument is not valid UTF-8");
            Err(CSAR_INVALID_ARGUMENT)
        }
    }
}

macro_rules! nonnull {
    ($p:expr, $name:literal) => {
        if $p.is_null() {
            set_error(concat!($name, " is null"));
            return CSAR_NULL_ARGUMENT;
        }
    };
}

/// Returns the description of the most recent failure on this thread.
/// The pointer stays valid until the next failing call on the same
/// thread. Never null; empty string when no error has occurred.
#[no_mangle]
pub extern "C" fn csar_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Create a geometry handle from a key = value config file.
/// On success writes the new handle to `out`.
#[no_mangle]
pub unsafe extern "C" fn csar_geometry_from_config(
    path: *const c_char,
    out: *mut *mut csar_geometry,
) -> csar_status {
    guard(|| {
        nonnull!(out, "out");
        let path = match path_arg(path) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let params = match RadarParams::from_config_file(path) {
            Ok(p) => p,
            Err(e) => return fail(e),
        };
        finish_geometry(params, out)
    })
}

/// Create a geometry handle for the built-in airborne simulation preset.
#[no_mangle]
pub unsafe extern "C" fn csar_geometry_preset(out: *mut *mut csar_geometry) -> csar_status {
    guard(|| {
        nonnull!(out, "out");
        finish_geometry(RadarParams::simulation_preset(), out)
    })
}

unsafe fn finish_geometry(params: RadarParams, out: *mut *mut csar_geometry) -> csar_status {
    let geo = match derive_geometry(&params) {
        Ok(g) => g,
        Err(e) => return fail(e),
    };
    let filters = build_filters(&geo);
    *out = Box::into_raw(Box::new(csar_geometry { geo, filters }));
    CSAR_OK
}

/// Release a geometry handle. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn csar_geometry_free(g: *mut csar_geometry) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Raw-data grid of a geometry: scene size plus aperture and pulse
/// padding. Either output pointer may be null.
#[no_mangle]
pub unsafe extern "C" fn csar_geometry_raw_dims(
    g: *const csar_geometry,
    rows: *mut usize,
    cols: *mut usize,
) -> csar_status {
    guard(|| {
        nonnull!(g, "geometry");
        let dims = (*g).geo.raw_dims;
        if !rows.is_null() {
            *rows = dims.0;
        }
        if !cols.is_null() {
            *cols = dims.1;
        }
        CSAR_OK
    })
}

/// Number of rows in an image.
#[no_mangle]
pub unsafe extern "C" fn csar_image_rows(img: *const csar_image) -> usize {
    if img.is_null() {
        return 0;
    }
    (*img).inner.rows()
}

/// Number of columns in an image.
#[no_mangle]
pub unsafe extern "C" fn csar_image_cols(img: *const csar_image) -> usize {
    if img.is_null() {
        return 0;
    }
    (*img).inner.cols()
}

/// Read one complex sample. `re` and `im` may each be null.
#[no_mangle]
pub unsafe extern "C" fn csar_image_sample(
    img: *const csar_image,
    row: usize,
    col: usize,
    re: *mut c_double,
    im: *mut c_double,
) -> csar_status {
    guard(|| {
        nonnull!(img, "image");
        let inner = &(*img).inner;
        if row >= inner.rows() || col >= inner.cols() {
            set_error("sample index out of range");
            return CSAR_INVALID_ARGUMENT;
        }
        let v = inner.at(row, col);
        if !re.is_null() {
            *re = v.re;
        }
        if !im.is_null() {
            *im = v.im;
        }
        CSAR_OK
    })
}

/// Load an image from the binary interchange format.
#[no_mangle]
pub unsafe extern "C" fn csar_image_load(
    path: *const c_char,
    out: *mut *mut csar_image,
) -> csar_status {
    guard(|| {
        nonnull!(out, "out");
        let path = match path_arg(path) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match read_image(path) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(csar_image { inner }));
                CSAR_OK
            }
            Err(e) => fail(e),
        }
    })
}

/// Save an image to the binary interchange format.
#[no_mangle]
pub unsafe extern "C" fn csar_image_save(
    img: *const csar_image,
    path: *const c_char,
) -> csar_status {
    guard(|| {
        nonnull!(img, "image");
        let path = match path_arg(path) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match write_image(&(*img).inner, path) {
            Ok(()) => CSAR_OK,
            Err(e) => fail(e),
        }
    })
}

/// Release an image handle. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn csar_image_free(img: *mut csar_image) {
    if !img.is_null() {
        drop(Box::from_raw(img));
    }
}

/// Simulate raw echoes for a point-target scene given as a CSV file.
/// `snr_db` sets additive white Gaussian noise; pass INFINITY for a
/// noiseless simulation.
#[no_mangle]
pub unsafe extern "C" fn csar_simulate(
    g: *const csar_geometry,
    scene_csv: *const c_char,
    snr_db: c_double,
    seed: u64,
    out: *mut *mut csar_image,
) -> csar_status {
    guard(|| {
        nonnull!(g, "geometry");
        nonnull!(out, "out");
        let scene_path = match path_arg(scene_csv) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let handle = &*g;
        let result = (|| {
            let scene = PointScene::from_csv_file(scene_path)?;
            scene.check_in_grid(handle.geo.params.n_azimuth, handle.geo.params.n_range)?;
            let raw = generate_raw(&scene, &handle.geo)?;
            add_noise(&raw, &NoiseSpec { snr_db, seed })
        })();
        match result {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(csar_image { inner }));
                CSAR_OK
            }
            Err(e) => fail(e),
        }
    })
}

/// Classical focusing of a full raw data set.
#[no_mangle]
pub unsafe extern "C" fn csar_focus(
    g: *const csar_geometry,
    raw: *const csar_image,
    out: *mut *mut csar_image,
) -> csar_status {
    guard(|| {
        nonnull!(g, "geometry");
        nonnull!(raw, "raw");
        nonnull!(out, "out");
        match focus(&(*raw).inner, &(*g).filters) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(csar_image { inner }));
                CSAR_OK
            }
            Err(e) => fail(e),
        }
    })
}

/// Sparse reconstruction from randomly subsampled raw data. `rate` is
/// the kept fraction of samples in (0, 1]; `ratio_az` and `ratio_rg`
/// weight how the rate splits across the two axes; `sparsity` bounds the
/// number of recovered pixels. `max_iters <= 0` selects the default.
#[no_mangle]
pub unsafe extern "C" fn csar_reconstruct(
    g: *const csar_geometry,
    raw: *const csar_image,
    rate: c_double,
    ratio_az: c_double,
    ratio_rg: c_double,
    seed: u64,
    sparsity: usize,
    max_iters: c_int,
    out: *mut *mut csar_image,
) -> csar_status {
    guard(|| {
        nonnull!(g, "geometry");
        nonnull!(raw, "raw");
        nonnull!(out, "out");
        let handle = &*g;
        let result = (|| {
            let (s_a, s_r) = split_rate(rate, ratio_az, ratio_rg)?;
            let pattern = make_pattern(handle.geo.raw_dims, s_a, s_r, seed)?;
            let y = subsample(&(*raw).inner, &pattern)?;
            let mut cfg = SolverConfig::new(sparsity);
            if max_iters > 0 {
                cfg.max_iters = max_iters as usize;
            }
            reconstruct(&y, &pattern, &handle.filters, &cfg).map(|(x, _)| x)
        })();
        match result {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(csar_image { inner }));
                CSAR_OK
            }
            Err(e) => fail(e),
        }
    })
}
