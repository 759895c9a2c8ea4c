//! C interface to `tractor-bgg`.
//!
//! Every function returns a [`TbStatus`]. On failure the message is kept per
//! thread and can be read with [`tb_last_error`]. Groups are opaque handles
//! created by [`tb_group_octagon`] and released with [`tb_group_free`].
//! Array outputs take a capacity; when it is too small the call fails with
//! `TB_STATUS_BUFFER_TOO_SMALL` and still writes the required length.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use tractor_bgg::bgg_complex::bgg_weights;
use tractor_bgg::group_cohomology::{
    coefficient_action, cohomology_report, octagon_group, Coefficients, FlatRepresentation, Word,
};
use tractor_bgg::kostant::{homology_dims, realize, ModuleFamily};
use tractor_bgg::linalg::RankTolerance;
use tractor_bgg::tractor_numerics::holonomy::from_rows;
use tractor_bgg::tractor_numerics::{quotient_holonomy, KleinPoint};
use tractor_bgg::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    NumericalFailure = 3,
    BufferTooSmall = 4,
    Panic = 5,
}

/// Octagon surface group acting on a coefficient module.
pub struct TbGroup {
    rep: FlatRepresentation,
}

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_error(msg: &str) {
    LAST_ERROR.with(|e| {
        let mut v = e.borrow_mut();
        v.clear();
        v.extend(msg.bytes().filter(|&b| b != 0));
    });
}

enum Failure {
    Status(TbStatus, String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            TbStatus::Ok
        }
        Ok(Err(Failure::Status(s, msg))) => {
            set_error(&msg);
            s
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(&e.to_string());
            if e.is_input_error() {
                TbStatus::InvalidInput
            } else {
                TbStatus::NumericalFailure
            }
        }
        Err(_) => {
            set_error("internal panic");
            TbStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure::Status(TbStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Status(TbStatus::InvalidInput, msg.into())
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid(format!("{what} is not UTF-8")))
}

/// Copies `data` into `out[..cap]` and stores the length in `len`.
unsafe fn write_out<T: Copy>(data: &[T], out: *mut T, cap: usize, len: *mut usize) -> Result<(), Failure> {
    if len.is_null() {
        return Err(null("length output"));
    }
    *len = data.len();
    if data.len() > cap {
        return Err(Failure::Status(
            TbStatus::BufferTooSmall,
            format!("need room for {} values, got {cap}", data.len()),
        ));
    }
    if !data.is_empty() {
        if out.is_null() {
            return Err(null("output buffer"));
        }
        std::ptr::copy_nonoverlapping(data.as_ptr(), out, data.len());
    }
    Ok(())
}

/// Copies the last error message of this thread, NUL-terminated and
/// truncated to `cap` bytes, and returns the full length without the NUL.
///
/// # Safety
/// `buf` must be null or valid for `cap` bytes.
#[no_mangle]
pub unsafe extern "C" fn tb_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && cap > 0 {
            let n = msg.len().min(cap - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Ranks of the BGG bundles for the `sl(n+1)` label `labels[..n]`.
///
/// # Safety
/// `labels` must hold `n` values, `dims` must be valid for `cap` values and
/// `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tb_bgg_dims(
    n: usize,
    labels: *const i64,
    dims: *mut u64,
    cap: usize,
    len: *mut usize,
) -> TbStatus {
    guard(|| {
        if labels.is_null() {
            return Err(null("labels"));
        }
        let a = std::slice::from_raw_parts(labels, n);
        let c = bgg_weights(n, a)?;
        write_out(&c.dims, dims, cap, len)
    })
}

/// Kostant homology dimensions for a family named as on the command line
/// (`dual`, `symk-dual:2`, ...).
///
/// # Safety
/// `family` must be a NUL-terminated string, `dims` valid for `cap` values
/// and `len` writable.
#[no_mangle]
pub unsafe extern "C" fn tb_kostant_homology(
    family: *const c_char,
    n: usize,
    dims: *mut u64,
    cap: usize,
    len: *mut usize,
) -> TbStatus {
    guard(|| {
        let f: ModuleFamily = c_str(family, "family")?.parse()?;
        let h: Vec<u64> = homology_dims(&realize(f, n)?)?.into_iter().map(|d| d as u64).collect();
        write_out(&h, dims, cap, len)
    })
}

/// Octagon group with coefficients `coefficients` (`trivial`, `defining`,
/// `symk:K`). Release with [`tb_group_free`].
///
/// # Safety
/// `coefficients` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tb_group_octagon(coefficients: *const c_char, out: *mut *mut TbGroup) -> TbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("group output"));
        }
        *out = std::ptr::null_mut();
        let c: Coefficients = c_str(coefficients, "coefficients")?.parse()?;
        let rep = coefficient_action(&octagon_group(), c)?;
        *out = Box::into_raw(Box::new(TbGroup { rep }));
        Ok(())
    })
}

/// # Safety
/// `group` must be null or a handle from [`tb_group_octagon`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tb_group_free(group: *mut TbGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

/// # Safety
/// `group` must be a live handle and `dim` writable.
#[no_mangle]
pub unsafe extern "C" fn tb_group_coefficient_dim(group: *const TbGroup, dim: *mut usize) -> TbStatus {
    guard(|| {
        let g = group.as_ref().ok_or_else(|| null("group"))?;
        let d = dim.as_mut().ok_or_else(|| null("dim"))?;
        *d = g.rep.coefficient_dim();
        Ok(())
    })
}

/// `dim H⁰` and `dim H¹` with the given rank tolerances (pass zero for the
/// defaults).
///
/// # Safety
/// `group` must be a live handle and `h0`, `h1` writable.
#[no_mangle]
pub unsafe extern "C" fn tb_group_cohomology(
    group: *const TbGroup,
    rank_relative: f64,
    rank_gap: f64,
    h0: *mut usize,
    h1: *mut usize,
) -> TbStatus {
    guard(|| {
        let g = group.as_ref().ok_or_else(|| null("group"))?;
        if h0.is_null() || h1.is_null() {
            return Err(null("cohomology output"));
        }
        let mut tol = RankTolerance::default();
        if rank_relative > 0.0 {
            tol.relative = rank_relative;
        }
        if rank_gap > 0.0 {
            tol.gap = rank_gap;
        }
        let r = cohomology_report(&g.rep, tol)?;
        *h0 = r.h0;
        *h1 = r.h1;
        Ok(())
    })
}

/// Holonomy of `word` (such as `"1,-2"`) at the origin, row-major into
/// `matrix`, with RK4 step `step` in hyperbolic arclength. `len` receives the
/// number of entries, the square of the coefficient dimension.
///
/// # Safety
/// `group` must be a live handle, `word` a NUL-terminated string, `matrix`
/// valid for `cap` values and `len` writable.
#[no_mangle]
pub unsafe extern "C" fn tb_group_holonomy(
    group: *const TbGroup,
    word: *const c_char,
    step: f64,
    matrix: *mut f64,
    cap: usize,
    len: *mut usize,
) -> TbStatus {
    guard(|| {
        let g = group.as_ref().ok_or_else(|| null("group"))?;
        let w: Word = c_str(word, "word")?.parse()?;
        if !(step > 0.0 && step < 0.1) {
            return Err(invalid(format!("step must lie in (0, 0.1), got {step}")));
        }
        let h = quotient_holonomy(&g.rep, &w, &KleinPoint::origin(g.rep.n()), step, None)?;
        let m = from_rows(&h.matrix);
        let flat: Vec<f64> = m.transpose().iter().copied().collect();
        write_out(&flat, matrix, cap, len)
    })
}
