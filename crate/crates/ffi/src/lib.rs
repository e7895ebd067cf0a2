//! C interface to the wiretap toolkit.
//!
//! Conventions:
//! - Every fallible call returns a [`WtStatus`]; results come back through
//!   `out` pointers, which are written only when the call returns
//!   `WT_STATUS_OK`.
//! - Handles ([`WtChannel`], [`WtBoundReport`]) are opaque and must be
//!   released with their paired `_free` function. The `_free` functions and
//!   [`wt_string_free`] accept null.
//! - After a failing call, [`wt_last_error_message`] returns a human-readable
//!   description; the pointer stays valid until the next failing call on the
//!   same thread.
//!
//! The build script regenerates the matching C header at
//! `include/wiretap_toolkit.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::Path;

use wiretap_toolkit::bounds::{
    bpsk_asymptote, bpsk_normal_approx, ec_private_capacity, oneshot_private_lower,
    oneshot_public_lower, second_order_private_report, BoundReport,
};
use wiretap_toolkit::error::Error;
use wiretap_toolkit::states::{load_channel, reduce_wiretap, BpskParams, WiretapChannel};
use wiretap_toolkit::textfmt::to_json_17;

/// Result of every fallible call in this interface.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WtStatus {
    /// The call succeeded and its `out` pointers were written.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// An argument was rejected before any computation ran.
    InvalidArgument = 2,
    /// Reading or parsing a channel file failed.
    Io = 3,
    /// A string argument was not valid UTF-8.
    Utf8 = 4,
    /// The computation itself failed; see `wt_last_error_message`.
    ComputeFailure = 5,
}

/// Opaque handle to a loaded wiretap channel.
pub struct WtChannel {
    inner: WiretapChannel,
}

/// Opaque handle to a computed rate bound.
pub struct WtBoundReport {
    inner: BoundReport,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: impl Into<String>) {
    let sanitized = msg.into().replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("NUL bytes were removed");
    });
}

fn fail(err: &Error) -> WtStatus {
    set_last_error(err.to_string());
    match err {
        Error::Io(_) | Error::ChannelParse(_) => WtStatus::Io,
        Error::InvalidParameter(_)
        | Error::InvalidDistribution(_)
        | Error::ChannelValidation(_)
        | Error::DimMismatch { .. } => WtStatus::InvalidArgument,
        _ => WtStatus::ComputeFailure,
    }
}

macro_rules! nonnull {
    ($ptr:expr) => {
        if $ptr.is_null() {
            set_last_error(concat!("null pointer argument: ", stringify!($ptr)));
            return WtStatus::NullArgument;
        }
    };
}

/// Version of the toolkit as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn wt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message describing the most recent failure on the calling thread, or an
/// empty string if none occurred. The pointer is invalidated by the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn wt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Loads a channel description from a `.wtc.json` file.
///
/// On success, `*out` owns the channel and must be released with
/// [`wt_channel_free`].
///
/// # Safety
/// `path` must point to a NUL-terminated string and `out` to writable
/// storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn wt_channel_load(
    path: *const c_char,
    out: *mut *mut WtChannel,
) -> WtStatus {
    nonnull!(path);
    nonnull!(out);
    let path = match CStr::from_ptr(path).to_str() {
        Ok(s) => s,
        Err(_) => {
            set_last_error("path is not valid UTF-8");
            return WtStatus::Utf8;
        }
    };
    match load_channel(Path::new(path)) {
        Ok(ch) => {
            *out = Box::into_raw(Box::new(WtChannel { inner: ch }));
            WtStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Releases a channel handle. Accepts null.
///
/// # Safety
/// `ch` must be null or a pointer obtained from [`wt_channel_load`] that has
/// not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn wt_channel_free(ch: *mut WtChannel) {
    if !ch.is_null() {
        drop(Box::from_raw(ch));
    }
}

/// Number of classical input symbols of the channel.
///
/// # Safety
/// `ch` must be a live channel handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wt_channel_num_symbols(
    ch: *const WtChannel,
    out: *mut usize,
) -> WtStatus {
    nonnull!(ch);
    nonnull!(out);
    *out = (*ch).inner.num_symbols();
    WtStatus::Ok
}

/// Dimension of the legitimate receiver's output system.
///
/// # Safety
/// `ch` must be a live channel handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wt_channel_bob_dim(ch: *const WtChannel, out: *mut usize) -> WtStatus {
    nonnull!(ch);
    nonnull!(out);
    *out = (*ch).inner.d_b();
    WtStatus::Ok
}

/// Dimension of the eavesdropper's output system.
///
/// # Safety
/// `ch` must be a live channel handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wt_channel_eve_dim(ch: *const WtChannel, out: *mut usize) -> WtStatus {
    nonnull!(ch);
    nonnull!(out);
    *out = (*ch).inner.d_e();
    WtStatus::Ok
}

/// Resolves the input distribution: null means the channel's default
/// (declared in the file, else uniform); otherwise `p_x_len` must equal the
/// number of symbols.
unsafe fn resolve_p_x(
    ch: &WiretapChannel,
    p_x: *const f64,
    p_x_len: usize,
) -> Result<Vec<f64>, WtStatus> {
    if p_x.is_null() {
        if p_x_len != 0 {
            set_last_error("p_x is null but p_x_len is nonzero");
            return Err(WtStatus::NullArgument);
        }
        Ok(ch.default_p_x())
    } else if p_x_len != ch.num_symbols() {
        set_last_error(format!(
            "p_x_len = {p_x_len} does not match the channel's {} symbols",
            ch.num_symbols()
        ));
        Err(WtStatus::InvalidArgument)
    } else {
        Ok(std::slice::from_raw_parts(p_x, p_x_len).to_vec())
    }
}

unsafe fn store_report(
    res: Result<BoundReport, Error>,
    out: *mut *mut WtBoundReport,
) -> WtStatus {
    match res {
        Ok(r) => {
            *out = Box::into_raw(Box::new(WtBoundReport { inner: r }));
            WtStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// One-shot lower bound on public (non-private) communication at average
/// error `eps1` with test slack `eta1` in `(0, eps1)`.
///
/// On success, `*out` owns the report and must be released with
/// [`wt_report_free`].
///
/// # Safety
/// `ch` must be a live channel handle, `p_x` null or a readable array of
/// `p_x_len` doubles, and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wt_bound_public(
    ch: *const WtChannel,
    p_x: *const f64,
    p_x_len: usize,
    eps1: f64,
    eta1: f64,
    out: *mut *mut WtBoundReport,
) -> WtStatus {
    nonnull!(ch);
    nonnull!(out);
    let dist = match resolve_p_x(&(*ch).inner, p_x, p_x_len) {
        Ok(d) => d,
        Err(status) => return status,
    };
    let res = reduce_wiretap(&(*ch).inner, &dist)
        .and_then(|red| oneshot_public_lower(&red.rho_xb, eps1, eta1, false));
    store_report(res, out)
}

/// One-shot lower bound on private communication at decoding error `eps1`
/// (slack `eta1`) and secrecy parameter `eps2` (slack `eta2`).
///
/// On success, `*out` owns the report and must be released with
/// [`wt_report_free`].
///
/// # Safety
/// `ch` must be a live channel handle, `p_x` null or a readable array of
/// `p_x_len` doubles, and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wt_bound_private(
    ch: *const WtChannel,
    p_x: *const f64,
    p_x_len: usize,
    eps1: f64,
    eps2: f64,
    eta1: f64,
    eta2: f64,
    out: *mut *mut WtBoundReport,
) -> WtStatus {
    nonnull!(ch);
    nonnull!(out);
    let dist = match resolve_p_x(&(*ch).inner, p_x, p_x_len) {
        Ok(d) => d,
        Err(status) => return status,
    };
    let res = oneshot_private_lower(&(*ch).inner, &dist, eps1, eps2, eta1, eta2);
    store_report(res, out)
}

/// Second-order (normal-approximation) private rate per channel use at block
/// length `n`.
///
/// On success, `*out` owns the report and must be released with
/// [`wt_report_free`].
///
/// # Safety
/// `ch` must be a live channel handle, `p_x` null or a readable array of
/// `p_x_len` doubles, and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wt_bound_second_order(
    ch: *const WtChannel,
    p_x: *const f64,
    p_x_len: usize,
    n: u64,
    eps1: f64,
    eps2: f64,
    out: *mut *mut WtBoundReport,
) -> WtStatus {
    nonnull!(ch);
    nonnull!(out);
    let dist = match resolve_p_x(&(*ch).inner, p_x, p_x_len) {
        Ok(d) => d,
        Err(status) => return status,
    };
    let res = second_order_private_report(&(*ch).inner, &dist, n, eps1, eps2);
    store_report(res, out)
}

/// Rate of a computed bound, in bits.
///
/// # Safety
/// `report` must be a live report handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wt_report_rate_bits(
    report: *const WtBoundReport,
    out: *mut f64,
) -> WtStatus {
    nonnull!(report);
    nonnull!(out);
    *out = (*report).inner.rate_bits;
    WtStatus::Ok
}

/// Whether the bound's preconditions held, so the rate is actually certified.
///
/// # Safety
/// `report` must be a live report handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wt_report_is_valid(
    report: *const WtBoundReport,
    out: *mut bool,
) -> WtStatus {
    nonnull!(report);
    nonnull!(out);
    *out = (*report).inner.valid;
    WtStatus::Ok
}

/// Serializes the full report (rate, per-term breakdown, parameters) as a
/// JSON string with 17-significant-digit floats.
///
/// On success, `*out` owns the string and must be released with
/// [`wt_string_free`].
///
/// # Safety
/// `report` must be a live report handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wt_report_to_json(
    report: *const WtBoundReport,
    out: *mut *mut c_char,
) -> WtStatus {
    nonnull!(report);
    nonnull!(out);
    let json = match to_json_17(&(*report).inner) {
        Ok(s) => s,
        Err(e) => {
            set_last_error(format!("serialization failed: {e}"));
            return WtStatus::ComputeFailure;
        }
    };
    match CString::new(json) {
        Ok(s) => {
            *out = s.into_raw();
            WtStatus::Ok
        }
        Err(_) => {
            set_last_error("serialized report contained a NUL byte");
            WtStatus::ComputeFailure
        }
    }
}

/// Releases a report handle. Accepts null.
///
/// # Safety
/// `report` must be null or a pointer obtained from one of the `wt_bound_*`
/// functions that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn wt_report_free(report: *mut WtBoundReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Releases a string returned by [`wt_report_to_json`]. Accepts null.
///
/// # Safety
/// `s` must be null or a pointer obtained from [`wt_report_to_json`] that has
/// not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn wt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Asymptotic per-use private rate of the binary-phase coherent-state scheme
/// on a pure-loss channel with transmissivity `eta` and mean photon number
/// `nbar`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wt_bpsk_asymptote(eta: f64, nbar: f64, out: *mut f64) -> WtStatus {
    nonnull!(out);
    let res = BpskParams::new(eta, nbar).and_then(|p| bpsk_asymptote(&p));
    match res {
        Ok(v) => {
            *out = v;
            WtStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Energy-constrained private capacity of the pure-loss channel itself, the
/// ceiling no modulation can beat.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wt_bpsk_capacity(eta: f64, nbar: f64, out: *mut f64) -> WtStatus {
    nonnull!(out);
    let res = BpskParams::new(eta, nbar).and_then(|p| ec_private_capacity(&p));
    match res {
        Ok(v) => {
            *out = v;
            WtStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Normal approximation of the binary-phase scheme's per-use private rate at
/// block length `n` with error budgets `eps1` (decoding) and `eps2`
/// (secrecy).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wt_bpsk_normal_approx(
    eta: f64,
    nbar: f64,
    n: u64,
    eps1: f64,
    eps2: f64,
    out: *mut f64,
) -> WtStatus {
    nonnull!(out);
    let res = BpskParams::new(eta, nbar).and_then(|p| bpsk_normal_approx(&p, n, eps1, eps2));
    match res {
        Ok(point) => {
            *out = point.rate_per_use_bits;
            WtStatus::Ok
        }
        Err(e) => fail(&e),
    }
}
