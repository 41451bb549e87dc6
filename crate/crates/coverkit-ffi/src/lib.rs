//! C ABI for the coverkit coverability engine.
//!
//! Instances are parsed from the same line-oriented text format the CLI
//! reads and held behind opaque `CkInstance` handles. Every call returns a
//! `CkStatus`; on any non-OK status a thread-local error message is
//! available through [`ck_last_error_message`]. Strings returned to the
//! caller are heap-allocated and must be released with [`ck_string_free`],
//! instances with [`ck_instance_free`].
//!
//! The C header is generated into `include/coverkit.h` at build time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use coverkit::cli::{parse_instance, render_instance, Instance};
use coverkit::engine::{BackwardEngine, EngineConfig, EngineError};

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

/// Status code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum CkStatus {
    Ok = 0,
    /// The instance text did not parse; see `ck_last_error_message`.
    ParseError = 1,
    /// A null pointer or otherwise unusable argument was passed.
    InvalidArgument = 2,
    /// The engine aborted on a resource cap; the verdict is unknown.
    ResourceCap = 3,
    /// Any other engine failure.
    EngineError = 4,
    /// A panic was caught at the boundary; this is a bug.
    InternalError = 5,
}

/// Which fixpoint computation to run.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum CkView {
    Classical = 0,
    Dual = 1,
}

/// An opaque, parsed coverability instance.
pub struct CkInstance {
    inner: Instance,
}

/// Result of a coverability run.
#[repr(C)]
#[derive(Clone, Copy)]
pub struct CkVerdict {
    /// Whether the instance declared a source configuration.
    pub has_source: bool,
    /// True iff a source was given and it covers the target.
    pub coverable: bool,
    /// Strict fixpoint steps until stabilization.
    pub strict_steps: u64,
    /// Vectors in the extracted pseudo-witness; 0 when not coverable.
    pub witness_len: u64,
}

/// Structural classification flags of the model.
#[repr(C)]
#[derive(Clone, Copy)]
pub struct CkNetClass {
    pub is_vas: bool,
    pub is_reset: bool,
    pub is_transfer: bool,
    pub is_strongly_increasing: bool,
    pub is_invertible: bool,
}

/// Library version as a static NUL-terminated string; do not free.
#[no_mangle]
pub extern "C" fn ck_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Parse an instance from NUL-terminated text into `*out`.
///
/// # Safety
/// `text` must point to a valid NUL-terminated string and `out` to a
/// writable pointer slot. On success the caller owns the handle and must
/// release it with [`ck_instance_free`].
#[no_mangle]
pub unsafe extern "C" fn ck_instance_parse(
    text: *const c_char,
    out: *mut *mut CkInstance,
) -> CkStatus {
    clear_error();
    if text.is_null() || out.is_null() {
        set_error("null pointer argument".into());
        return CkStatus::InvalidArgument;
    }
    let bytes = unsafe { CStr::from_ptr(text) };
    let Ok(text) = bytes.to_str() else {
        set_error("instance text is not valid UTF-8".into());
        return CkStatus::InvalidArgument;
    };
    match parse_instance(text) {
        Ok(instance) => {
            unsafe { *out = Box::into_raw(Box::new(CkInstance { inner: instance })) };
            CkStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            CkStatus::ParseError
        }
    }
}

/// Release an instance handle. Passing NULL is a no-op.
///
/// # Safety
/// `inst` must be NULL or a pointer returned by [`ck_instance_parse`] that
/// has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn ck_instance_free(inst: *mut CkInstance) {
    if !inst.is_null() {
        drop(unsafe { Box::from_raw(inst) });
    }
}

/// Dimension of the instance, or 0 for NULL.
///
/// # Safety
/// `inst` must be NULL or a live handle from [`ck_instance_parse`].
#[no_mangle]
pub unsafe extern "C" fn ck_instance_dim(inst: *const CkInstance) -> usize {
    match unsafe { inst.as_ref() } {
        Some(handle) => handle.inner.model.dim(),
        None => 0,
    }
}

/// Render the canonical text form of the instance. The caller frees the
/// returned string with [`ck_string_free`]; NULL is returned for NULL input.
///
/// # Safety
/// `inst` must be NULL or a live handle from [`ck_instance_parse`].
#[no_mangle]
pub unsafe extern "C" fn ck_instance_render(inst: *const CkInstance) -> *mut c_char {
    match unsafe { inst.as_ref() } {
        Some(handle) => match CString::new(render_instance(&handle.inner)) {
            Ok(s) => s.into_raw(),
            Err(_) => ptr::null_mut(),
        },
        None => ptr::null_mut(),
    }
}

/// Run backward coverability on the instance and fill `*out`.
///
/// `max_iterations` and `max_set_size` of 0 select the engine defaults.
///
/// # Safety
/// `inst` must be a live handle from [`ck_instance_parse`] and `out` must
/// point to writable memory for one `CkVerdict`.
#[no_mangle]
pub unsafe extern "C" fn ck_check(
    inst: *const CkInstance,
    view: CkView,
    max_iterations: u64,
    max_set_size: u64,
    out: *mut CkVerdict,
) -> CkStatus {
    clear_error();
    let (Some(handle), false) = (unsafe { inst.as_ref() }, out.is_null()) else {
        set_error("null pointer argument".into());
        return CkStatus::InvalidArgument;
    };
    let outcome = catch_unwind(AssertUnwindSafe(|| {
        let defaults = EngineConfig::default();
        let config = EngineConfig {
            max_iterations: if max_iterations == 0 {
                defaults.max_iterations
            } else {
                max_iterations as usize
            },
            max_set_size: if max_set_size == 0 {
                defaults.max_set_size
            } else {
                max_set_size as usize
            },
            ..defaults
        };
        let instance = &handle.inner;
        let engine = BackwardEngine::with_config(instance.model.clone(), config)?;
        let target = &instance.target;
        let source = instance.source.as_ref();
        match view {
            CkView::Classical => engine.classical(target, source),
            CkView::Dual => engine.dual(target, source),
        }
    }));
    match outcome {
        Ok(Ok((chain, verdict))) => {
            unsafe {
                *out = CkVerdict {
                    has_source: handle.inner.source.is_some(),
                    coverable: verdict.coverable,
                    strict_steps: chain.ell() as u64,
                    witness_len: verdict
                        .pseudo_witness
                        .as_ref()
                        .map(|w| w.len() as u64)
                        .unwrap_or(0),
                };
            }
            CkStatus::Ok
        }
        Ok(Err(e @ EngineError::ResourceCap { .. })) => {
            set_error(e.to_string());
            CkStatus::ResourceCap
        }
        Ok(Err(e)) => {
            set_error(e.to_string());
            CkStatus::EngineError
        }
        Err(_) => {
            set_error("panic caught at the FFI boundary".into());
            CkStatus::InternalError
        }
    }
}

/// Classify the model of the instance into `*out`.
///
/// # Safety
/// `inst` must be a live handle from [`ck_instance_parse`] and `out` must
/// point to writable memory for one `CkNetClass`.
#[no_mangle]
pub unsafe extern "C" fn ck_classify(inst: *const CkInstance, out: *mut CkNetClass) -> CkStatus {
    clear_error();
    let (Some(handle), false) = (unsafe { inst.as_ref() }, out.is_null()) else {
        set_error("null pointer argument".into());
        return CkStatus::InvalidArgument;
    };
    let class = handle.inner.model.to_affine().classify();
    unsafe {
        *out = CkNetClass {
            is_vas: class.is_vas,
            is_reset: class.is_reset,
            is_transfer: class.is_transfer,
            is_strongly_increasing: class.is_strongly_increasing,
            is_invertible: class.is_invertible,
        };
    }
    CkStatus::Ok
}

/// The message of the most recent failure on this thread, or NULL. The
/// caller frees it with [`ck_string_free`].
#[no_mangle]
pub extern "C" fn ck_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(msg) => msg.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// Release a string returned by this library. Passing NULL is a no-op.
///
/// # Safety
/// `s` must be NULL or a string returned by this library that has not been
/// freed yet.
#[no_mangle]
pub unsafe extern "C" fn ck_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
