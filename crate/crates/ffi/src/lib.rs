//! C ABI over the `cissa` library.
//!
//! Results live behind opaque handles (`CissaDecomposition`, `CissaGrouping`)
//! owned by the caller and released with the matching `*_free` function. Every
//! fallible call returns a [`CissaStatus`]; the message of the most recent
//! failure on the calling thread is available from [`cissa_last_error`].
//! Frequency indices are 1-based throughout.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use cissa::{CissaError, Decomposition, ExtensionMode, GroupingResult, GroupingSpec};

/// Status codes. Values 2..=4 match the command line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CissaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InputError = 3,
    NumericError = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

/// Boundary extension selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CissaExtension {
    Ar = 0,
    Mirror = 1,
    None = 2,
}

/// Opaque decomposition handle.
pub struct CissaDecomposition(Decomposition);

/// Opaque grouping handle.
pub struct CissaGrouping(GroupingResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(err: CissaError) -> CissaStatus {
    let status = match err {
        CissaError::Parameter(_) => CissaStatus::InvalidArgument,
        CissaError::Input(_) | CissaError::Io(_) => CissaStatus::InputError,
        CissaError::Numeric(_) => CissaStatus::NumericError,
    };
    set_error(err.to_string());
    status
}

fn guard(f: impl FnOnce() -> CissaStatus) -> CissaStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| {
        set_error("internal panic");
        CissaStatus::Panic
    })
}

macro_rules! non_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            set_error(concat!("null pointer: ", stringify!($p)));
            return CissaStatus::NullPointer;
        })+
    };
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cissa_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Decomposes `len` samples with window `window`. `ar_order` = 0 selects the
/// default order `floor(T/3)`; it is ignored for the other extensions.
///
/// # Safety
/// `x` must point to `len` readable doubles and `out` to writable storage for
/// one pointer. On success `*out` must later be passed to
/// [`cissa_decomposition_free`].
#[no_mangle]
pub unsafe extern "C" fn cissa_decompose(
    x: *const f64,
    len: usize,
    window: usize,
    extension: CissaExtension,
    ar_order: usize,
    out: *mut *mut CissaDecomposition,
) -> CissaStatus {
    non_null!(x, out);
    guard(|| {
        let data = slice::from_raw_parts(x, len);
        let mode = match extension {
            CissaExtension::Ar => ExtensionMode::Ar {
                order: (ar_order > 0).then_some(ar_order),
            },
            CissaExtension::Mirror => ExtensionMode::Mirror,
            CissaExtension::None => ExtensionMode::None,
        };
        match cissa::cissa(data, window, mode) {
            Ok(dec) => {
                *out = Box::into_raw(Box::new(CissaDecomposition(dec)));
                CissaStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `handle` must be NULL or a pointer from [`cissa_decompose`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cissa_decomposition_free(handle: *mut CissaDecomposition) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Series length `T`, or 0 for NULL.
///
/// # Safety
/// `handle` must be NULL or a live decomposition handle.
#[no_mangle]
pub unsafe extern "C" fn cissa_decomposition_len(handle: *const CissaDecomposition) -> usize {
    handle.as_ref().map_or(0, |h| h.0.len())
}

/// Window length `L`, or 0 for NULL.
///
/// # Safety
/// `handle` must be NULL or a live decomposition handle.
#[no_mangle]
pub unsafe extern "C" fn cissa_decomposition_window(handle: *const CissaDecomposition) -> usize {
    handle.as_ref().map_or(0, |h| h.0.window())
}

/// Number of components `F = floor(L/2)+1`, or 0 for NULL.
///
/// # Safety
/// `handle` must be NULL or a live decomposition handle.
#[no_mangle]
pub unsafe extern "C" fn cissa_decomposition_num_frequencies(
    handle: *const CissaDecomposition,
) -> usize {
    handle.as_ref().map_or(0, |h| h.0.num_frequencies())
}

unsafe fn copy_out(src: &[f64], out: *mut f64, out_len: usize) -> CissaStatus {
    if out_len < src.len() {
        set_error(format!(
            "buffer holds {out_len} values, {} needed",
            src.len()
        ));
        return CissaStatus::BufferTooSmall;
    }
    ptr::copy_nonoverlapping(src.as_ptr(), out, src.len());
    CissaStatus::Ok
}

/// Copies component `k` (1-based) into `out`, which must hold `T` values.
///
/// # Safety
/// `handle` must be a live decomposition handle and `out` must point to
/// `out_len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn cissa_decomposition_component(
    handle: *const CissaDecomposition,
    k: usize,
    out: *mut f64,
    out_len: usize,
) -> CissaStatus {
    non_null!(handle, out);
    let dec = &(*handle).0;
    if k == 0 || k > dec.num_frequencies() {
        set_error(format!(
            "frequency index k={k} outside 1..={}",
            dec.num_frequencies()
        ));
        return CissaStatus::InvalidArgument;
    }
    copy_out(dec.component(k), out, out_len)
}

/// Copies the `L` psd values (`k = 1..L`) into `out`.
///
/// # Safety
/// `handle` must be a live decomposition handle and `out` must point to
/// `out_len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn cissa_decomposition_psd(
    handle: *const CissaDecomposition,
    out: *mut f64,
    out_len: usize,
) -> CissaStatus {
    non_null!(handle, out);
    copy_out((*handle).0.psd().values(), out, out_len)
}

unsafe fn run_group(
    handle: *const CissaDecomposition,
    spec: GroupingSpec,
    out: *mut *mut CissaGrouping,
) -> CissaStatus {
    guard(|| match cissa::group(&(*handle).0, &spec) {
        Ok(r) => {
            *out = Box::into_raw(Box::new(CissaGrouping(r)));
            CissaStatus::Ok
        }
        Err(e) => fail(e),
    })
}

/// Trend, business cycle and seasonal groups for `per_year` observations a year.
///
/// # Safety
/// `handle` must be a live decomposition handle; `out` must be writable. The
/// returned grouping must be released with [`cissa_grouping_free`].
#[no_mangle]
pub unsafe extern "C" fn cissa_group_economic(
    handle: *const CissaDecomposition,
    per_year: usize,
    out: *mut *mut CissaGrouping,
) -> CissaStatus {
    non_null!(handle, out);
    run_group(handle, GroupingSpec::Economic { per_year }, out)
}

/// Manual groups given in CSR layout: group `g` holds
/// `indices[offsets[g] .. offsets[g+1]]`; `offsets` has `num_groups + 1` entries.
///
/// # Safety
/// `indices` must point to `offsets[num_groups]` readable values and `offsets`
/// to `num_groups + 1`; other pointers as for [`cissa_group_economic`].
#[no_mangle]
pub unsafe extern "C" fn cissa_group_manual(
    handle: *const CissaDecomposition,
    indices: *const usize,
    offsets: *const usize,
    num_groups: usize,
    out: *mut *mut CissaGrouping,
) -> CissaStatus {
    non_null!(handle, offsets, out);
    let offsets = slice::from_raw_parts(offsets, num_groups + 1);
    if offsets.windows(2).any(|w| w[0] > w[1]) {
        set_error("group offsets must be non-decreasing");
        return CissaStatus::InvalidArgument;
    }
    let total = offsets[num_groups];
    if total > 0 {
        non_null!(indices);
    }
    let flat = if total == 0 {
        &[][..]
    } else {
        slice::from_raw_parts(indices, total)
    };
    let groups = offsets
        .windows(2)
        .map(|w| flat[w[0]..w[1]].to_vec())
        .collect();
    run_group(handle, GroupingSpec::Manual(groups), out)
}

/// Smallest set of largest-share frequencies reaching `target` in (0,1).
///
/// # Safety
/// As for [`cissa_group_economic`].
#[no_mangle]
pub unsafe extern "C" fn cissa_group_share(
    handle: *const CissaDecomposition,
    target: f64,
    out: *mut *mut CissaGrouping,
) -> CissaStatus {
    non_null!(handle, out);
    run_group(handle, GroupingSpec::CumulativeShare(target), out)
}

/// Frequencies whose psd exceeds percentile `q` in (0,1).
///
/// # Safety
/// As for [`cissa_group_economic`].
#[no_mangle]
pub unsafe extern "C" fn cissa_group_percentile(
    handle: *const CissaDecomposition,
    q: f64,
    out: *mut *mut CissaGrouping,
) -> CissaStatus {
    non_null!(handle, out);
    run_group(handle, GroupingSpec::PsdPercentile(q), out)
}

/// # Safety
/// `handle` must be NULL or a grouping handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cissa_grouping_free(handle: *mut CissaGrouping) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Number of groups, or 0 for NULL.
///
/// # Safety
/// `handle` must be NULL or a live grouping handle.
#[no_mangle]
pub unsafe extern "C" fn cissa_grouping_num_groups(handle: *const CissaGrouping) -> usize {
    handle.as_ref().map_or(0, |h| h.0.num_groups())
}

/// Share of total psd for group `g` (0-based) as a fraction; NaN when out of range.
///
/// # Safety
/// `handle` must be NULL or a live grouping handle.
#[no_mangle]
pub unsafe extern "C" fn cissa_grouping_share(handle: *const CissaGrouping, g: usize) -> f64 {
    handle
        .as_ref()
        .and_then(|h| h.0.shares.get(g).copied())
        .unwrap_or(f64::NAN)
}

/// Copies the reconstructed series of group `g` (0-based) into `out`.
///
/// # Safety
/// `handle` must be a live grouping handle and `out` must point to `out_len`
/// writable doubles.
#[no_mangle]
pub unsafe extern "C" fn cissa_grouping_series(
    handle: *const CissaGrouping,
    g: usize,
    out: *mut f64,
    out_len: usize,
) -> CissaStatus {
    non_null!(handle, out);
    let grouping = &(*handle).0;
    match grouping.series.get(g) {
        Some(s) => copy_out(s, out, out_len),
        None => {
            set_error(format!("group {g} out of range"));
            CissaStatus::InvalidArgument
        }
    }
}

/// Number of frequency indices in group `g` (0-based), or 0 when out of range.
///
/// # Safety
/// `handle` must be NULL or a live grouping handle.
#[no_mangle]
pub unsafe extern "C" fn cissa_grouping_indices_len(
    handle: *const CissaGrouping,
    g: usize,
) -> usize {
    handle
        .as_ref()
        .and_then(|h| h.0.indices.get(g))
        .map_or(0, Vec::len)
}

/// Copies the 1-based frequency indices of group `g` into `out`.
///
/// # Safety
/// `handle` must be a live grouping handle and `out` must point to `out_len`
/// writable values.
#[no_mangle]
pub unsafe extern "C" fn cissa_grouping_indices(
    handle: *const CissaGrouping,
    g: usize,
    out: *mut usize,
    out_len: usize,
) -> CissaStatus {
    non_null!(handle, out);
    let grouping = &(*handle).0;
    let Some(ks) = grouping.indices.get(g) else {
        set_error(format!("group {g} out of range"));
        return CissaStatus::InvalidArgument;
    };
    if out_len < ks.len() {
        set_error(format!(
            "buffer holds {out_len} indices, {} needed",
            ks.len()
        ));
        return CissaStatus::BufferTooSmall;
    }
    ptr::copy_nonoverlapping(ks.as_ptr(), out, ks.len());
    CissaStatus::Ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;

    #[test]
    fn error_kinds_map_to_status() {
        assert_eq!(
            fail(CissaError::Parameter("p".into())),
            CissaStatus::InvalidArgument
        );
        assert_eq!(fail(CissaError::Input("i".into())), CissaStatus::InputError);
        assert_eq!(
            fail(CissaError::Numeric("n".into())),
            CissaStatus::NumericError
        );
        let msg = unsafe { CStr::from_ptr(cissa_last_error()) };
        assert!(msg.to_str().unwrap().contains('n'));
    }

    #[test]
    fn panics_are_contained() {
        assert_eq!(guard(|| panic!("boom")), CissaStatus::Panic);
        set_error("with\0nul");
        let msg = unsafe { CStr::from_ptr(cissa_last_error()) };
        assert_eq!(msg.to_str().unwrap(), "with nul");
    }
}
