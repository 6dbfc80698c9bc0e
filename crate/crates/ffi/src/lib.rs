//! C ABI for qcat.
//!
//! Every fallible call returns a [`QcatStatus`]; on failure the message is
//! available from [`qcat_last_error`] on the same thread. Objects cross the
//! boundary as opaque handles released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use qcat::doublewell::{gap_ratio, ground_deficit, parabolic_cylinder, PiecewiseWell};
use qcat::pathfinder::{build_graph, shortest_schedule, EdgeConvention, GraphOptions, PathResult};
use qcat::spectrum::{lowest_levels, saddle_search, scan_landscape, GapLandscape, SaddleOptions};
use qcat::spinspace::{build_pspin_hamiltonian, ControlPoint, SpinParams, TwiceSpin};
use qcat::{Error, Exec};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QcatStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfEnvelope = 3,
    NoConvergence = 4,
    Numerical = 5,
    Panic = 6,
}

/// Which endpoint's gap weights a schedule step.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QcatEdgeConvention {
    Destination = 0,
    Source = 1,
    Average = 2,
}

/// Gap landscape over a (Gamma, kappa) raster.
pub struct QcatLandscape(GapLandscape);

/// Piecewise-parabolic double well in scale-free units.
pub struct QcatWell(PiecewiseWell);

/// Optimal annealing schedule.
pub struct QcatPath(PathResult);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> QcatStatus {
    match e {
        Error::OutOfEnvelope(_) => QcatStatus::OutOfEnvelope,
        Error::NoConvergence { .. } => QcatStatus::NoConvergence,
        Error::AtPoint { source, .. } => status_of(source),
        e if e.is_input_error() => QcatStatus::InvalidArgument,
        _ => QcatStatus::Numerical,
    }
}

/// Runs `f`, recording any error or panic for [`qcat_last_error`].
fn guard<F: FnOnce() -> Result<(), QcatStatus>>(f: F) -> QcatStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            QcatStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            QcatStatus::Panic
        }
    }
}

fn check<T>(r: qcat::Result<T>) -> Result<T, QcatStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

fn null_error(what: &str) -> QcatStatus {
    set_error(format!("{what} is null"));
    QcatStatus::NullPointer
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, QcatStatus> {
    p.as_mut().ok_or_else(|| null_error(what))
}

unsafe fn input<'a, T>(p: *const T, n: usize, what: &str) -> Result<&'a [T], QcatStatus> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null_error(what));
    }
    Ok(slice::from_raw_parts(p, n))
}

fn params(two_j: u32, p: u32, gamma: f64, kappa: f64) -> qcat::Result<SpinParams> {
    SpinParams::new(TwiceSpin::new(two_j), p, ControlPoint::new(gamma, kappa)?)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qcat_version() -> *const c_char {
    static V: &CStr =
        match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
            Ok(v) => v,
            Err(_) => panic!("version string"),
        };
    V.as_ptr()
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next qcat call on the same thread.
#[no_mangle]
pub extern "C" fn qcat_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// The `k` lowest eigenvalues of the p-spin Hamiltonian at (gamma, kappa), written to `levels[0..k]`.
///
/// # Safety
/// `levels` must point to `k` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qcat_pspin_levels(
    two_j: u32,
    p: u32,
    gamma: f64,
    kappa: f64,
    k: usize,
    levels: *mut f64,
) -> QcatStatus {
    guard(|| {
        if levels.is_null() {
            return Err(null_error("levels"));
        }
        let h = check(params(two_j, p, gamma, kappa).and_then(|sp| build_pspin_hamiltonian(&sp)))?;
        let s = check(lowest_levels(&h, k))?;
        if s.eigenvalues.len() < k {
            set_error(format!("only {} levels available", s.eigenvalues.len()));
            return Err(QcatStatus::InvalidArgument);
        }
        slice::from_raw_parts_mut(levels, k).copy_from_slice(&s.eigenvalues[..k]);
        Ok(())
    })
}

/// Max-min gap saddle of the p-spin landscape with default search grids.
///
/// # Safety
/// Output pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qcat_saddle_search(
    two_j: u32,
    p: u32,
    gamma_c: *mut f64,
    kappa_c: *mut f64,
    gap: *mut f64,
) -> QcatStatus {
    guard(|| {
        let (g, k, d) = (
            out(gamma_c, "gamma_c")?,
            out(kappa_c, "kappa_c")?,
            out(gap, "gap")?,
        );
        let s = check(saddle_search(
            TwiceSpin::new(two_j),
            p,
            &SaddleOptions::default(),
        ))?;
        (*g, *k, *d) = (s.control.gamma, s.control.kappa, s.gap);
        Ok(())
    })
}

/// Weber parabolic cylinder function D_nu(x).
///
/// # Safety
/// `value` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qcat_parabolic_cylinder(nu: f64, x: f64, value: *mut f64) -> QcatStatus {
    guard(|| {
        let v = out(value, "value")?;
        *v = check(parabolic_cylinder(nu, x))?;
        Ok(())
    })
}

/// Scans Delta01 over the raster `gamma[0..ng] x kappa[0..nk]`.
///
/// # Safety
/// Axis pointers must hold `ng` and `nk` doubles; `handle` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qcat_landscape_scan(
    two_j: u32,
    p: u32,
    gamma: *const f64,
    ng: usize,
    kappa: *const f64,
    nk: usize,
    handle: *mut *mut QcatLandscape,
) -> QcatStatus {
    guard(|| {
        let h = out(handle, "handle")?;
        *h = ptr::null_mut();
        let (g, k) = (input(gamma, ng, "gamma")?, input(kappa, nk, "kappa")?);
        let land = check(scan_landscape(
            TwiceSpin::new(two_j),
            p,
            g,
            k,
            Exec::Parallel,
        ))?;
        *h = Box::into_raw(Box::new(QcatLandscape(land)));
        Ok(())
    })
}

/// Raster shape as (Gamma points, kappa points).
///
/// # Safety
/// `handle` must come from [`qcat_landscape_scan`]; outputs valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qcat_landscape_shape(
    handle: *const QcatLandscape,
    ng: *mut usize,
    nk: *mut usize,
) -> QcatStatus {
    guard(|| {
        let l = handle.as_ref().ok_or_else(|| null_error("handle"))?;
        let (a, b) = l.0.shape();
        *out(ng, "ng")? = a;
        *out(nk, "nk")? = b;
        Ok(())
    })
}

/// Delta01 at raster cell (gi, ki).
///
/// # Safety
/// `handle` must come from [`qcat_landscape_scan`]; `value` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qcat_landscape_delta01(
    handle: *const QcatLandscape,
    gi: usize,
    ki: usize,
    value: *mut f64,
) -> QcatStatus {
    guard(|| {
        let l = handle.as_ref().ok_or_else(|| null_error("handle"))?;
        let v = out(value, "value")?;
        let (ng, nk) = l.0.shape();
        if gi >= ng || ki >= nk {
            set_error(format!("cell ({gi}, {ki}) outside {ng} x {nk} raster"));
            return Err(QcatStatus::InvalidArgument);
        }
        *v = l.0.delta01(gi, ki);
        Ok(())
    })
}

/// Releases a landscape. Null is ignored.
///
/// # Safety
/// `handle` must come from [`qcat_landscape_scan`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qcat_landscape_free(handle: *mut QcatLandscape) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Creates a double well with displacements xi1, xi2 and width ratios beta1, beta2.
///
/// # Safety
/// `handle` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qcat_well_new(
    xi1: f64,
    xi2: f64,
    beta1: f64,
    beta2: f64,
    handle: *mut *mut QcatWell,
) -> QcatStatus {
    guard(|| {
        let h = out(handle, "handle")?;
        *h = ptr::null_mut();
        let w = check(PiecewiseWell::new(xi1, xi2, beta1, beta2))?;
        *h = Box::into_raw(Box::new(QcatWell(w)));
        Ok(())
    })
}

/// Ground-to-first-excited gap in units of hbar omega*.
///
/// # Safety
/// `handle` must come from [`qcat_well_new`]; `value` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qcat_well_gap_ratio(
    handle: *const QcatWell,
    value: *mut f64,
) -> QcatStatus {
    guard(|| {
        let w = handle.as_ref().ok_or_else(|| null_error("handle"))?;
        *out(value, "value")? = check(gap_ratio(&w.0))?;
        Ok(())
    })
}

/// Ground-state energy below the summit in units of hbar omega*.
///
/// # Safety
/// `handle` must come from [`qcat_well_new`]; `value` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qcat_well_ground_deficit(
    handle: *const QcatWell,
    value: *mut f64,
) -> QcatStatus {
    guard(|| {
        let w = handle.as_ref().ok_or_else(|| null_error("handle"))?;
        *out(value, "value")? = check(ground_deficit(&w.0))?;
        Ok(())
    })
}

/// Releases a well. Null is ignored.
///
/// # Safety
/// `handle` must come from [`qcat_well_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qcat_well_free(handle: *mut QcatWell) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Shortest schedule from (1, 1) to (0, 1) over a landscape whose axes run over [0, 1].
///
/// # Safety
/// `landscape` must come from [`qcat_landscape_scan`]; `handle` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qcat_path_shortest(
    landscape: *const QcatLandscape,
    convention: QcatEdgeConvention,
    handle: *mut *mut QcatPath,
) -> QcatStatus {
    guard(|| {
        let h = out(handle, "handle")?;
        *h = ptr::null_mut();
        let l = landscape.as_ref().ok_or_else(|| null_error("landscape"))?;
        let convention = match convention {
            QcatEdgeConvention::Destination => EdgeConvention::Destination,
            QcatEdgeConvention::Source => EdgeConvention::Source,
            QcatEdgeConvention::Average => EdgeConvention::Average,
        };
        let g = check(build_graph(
            &l.0,
            GraphOptions {
                convention,
                forced_kappa_one: false,
            },
        ))?;
        *h = Box::into_raw(Box::new(QcatPath(check(shortest_schedule(&g))?)));
        Ok(())
    })
}

/// Number of cells on the path, and its total time.
///
/// # Safety
/// `handle` must come from [`qcat_path_shortest`]; outputs valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qcat_path_summary(
    handle: *const QcatPath,
    cells: *mut usize,
    total_time: *mut f64,
) -> QcatStatus {
    guard(|| {
        let p = handle.as_ref().ok_or_else(|| null_error("handle"))?;
        *out(cells, "cells")? = p.0.cells.len();
        *out(total_time, "total_time")? = p.0.total_time;
        Ok(())
    })
}

/// Control point and running time at path position `i`.
///
/// # Safety
/// `handle` must come from [`qcat_path_shortest`]; outputs valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qcat_path_cell(
    handle: *const QcatPath,
    i: usize,
    gamma: *mut f64,
    kappa: *mut f64,
    cumulative: *mut f64,
) -> QcatStatus {
    guard(|| {
        let p = handle.as_ref().ok_or_else(|| null_error("handle"))?;
        let Some(c) = p.0.controls.get(i) else {
            set_error(format!(
                "index {i} outside path of {} cells",
                p.0.controls.len()
            ));
            return Err(QcatStatus::InvalidArgument);
        };
        *out(gamma, "gamma")? = c.gamma;
        *out(kappa, "kappa")? = c.kappa;
        *out(cumulative, "cumulative")? = p.0.cumulative[i];
        Ok(())
    })
}

/// Releases a path. Null is ignored.
///
/// # Safety
/// `handle` must come from [`qcat_path_shortest`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qcat_path_free(handle: *mut QcatPath) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}
