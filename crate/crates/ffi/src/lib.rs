//! C ABI over zigzag workspaces.
//!
//! Workspaces are opaque handles. Every fallible call returns a [`ZzStatus`];
//! the message and structured reason of the last failure on the calling
//! thread are available from [`zz_last_error`] and friends. Strings and
//! byte buffers handed out by this library are released with
//! [`zz_string_free`] and [`zz_bytes_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use zigzag::diagram::{slice, Path};
use zigzag::homotopy::First;
use zigzag::monotone::Bias;
use zigzag::render::{emit_svg, emit_text, project, Style};
use zigzag::workspace::{ContractArgs, ExpandArgs, ScriptEnv, Workspace, WorkspaceError};

/// Opaque workspace handle.
pub struct ZzWorkspace {
    inner: Workspace,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZzStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    ParseError = 4,
    VersionUnsupported = 5,
    ValidationFailed = 6,
    UnknownDiagram = 7,
    /// A contraction or expansion was rejected; see [`zz_last_failure_reason`].
    MoveRejected = 8,
    CommandFailed = 9,
    NothingToUndo = 10,
    IoError = 11,
    Panic = 12,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZzBias {
    None = 0,
    Lower = 1,
    Higher = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZzFirst {
    Lower = 0,
    Higher = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZzFormat {
    Svg = 0,
    Text = 1,
}

struct LastError {
    message: String,
    reason: String,
    step: c_int,
    height: Option<usize>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<LastError>> = const { RefCell::new(None) };
}

fn set_error(message: String, reason: &str, step: c_int, height: Option<usize>) {
    LAST_ERROR.with(|e| {
        *e.borrow_mut() = Some(LastError {
            message,
            reason: reason.to_owned(),
            step,
            height,
        })
    });
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &WorkspaceError) -> ZzStatus {
    match e {
        WorkspaceError::Parse { .. } => ZzStatus::ParseError,
        WorkspaceError::VersionUnsupported(_) | WorkspaceError::HashUnsupported(_) => ZzStatus::VersionUnsupported,
        WorkspaceError::ValidationFailed { .. } | WorkspaceError::LogIntegrity { .. } => ZzStatus::ValidationFailed,
        WorkspaceError::UnknownDiagram(_) => ZzStatus::UnknownDiagram,
        WorkspaceError::Homotopy(_) => ZzStatus::MoveRejected,
        WorkspaceError::NothingToUndo => ZzStatus::NothingToUndo,
        WorkspaceError::Io(_) => ZzStatus::IoError,
        WorkspaceError::Command(_) => ZzStatus::InvalidArgument,
        _ => ZzStatus::CommandFailed,
    }
}

fn fail(e: WorkspaceError) -> ZzStatus {
    let r = e.report();
    set_error(e.to_string(), &r.reason, c_int::from(r.step), r.height);
    status_of(&e)
}

fn fail_with(status: ZzStatus, message: impl Into<String>) -> ZzStatus {
    set_error(message.into(), &format!("{status:?}"), 0, None);
    status
}

/// Runs `f`, converting panics into [`ZzStatus::Panic`].
fn guard(f: impl FnOnce() -> Result<(), ZzStatus>) -> ZzStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ZzStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail_with(ZzStatus::Panic, "internal panic"),
    }
}

/// # Safety
/// `p` is null or a NUL-terminated string valid for the call.
unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, ZzStatus> {
    if p.is_null() {
        return Err(fail_with(ZzStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail_with(ZzStatus::InvalidUtf8, "argument is not UTF-8"))
}

/// # Safety
/// As [`text`]; null is `None`.
unsafe fn opt_text<'a>(p: *const c_char) -> Result<Option<&'a str>, ZzStatus> {
    if p.is_null() {
        Ok(None)
    } else {
        text(p).map(Some)
    }
}

/// # Safety
/// `ws` is null or a live handle with no other reference in use.
unsafe fn handle<'a>(ws: *mut ZzWorkspace) -> Result<&'a mut ZzWorkspace, ZzStatus> {
    ws.as_mut().ok_or_else(|| fail_with(ZzStatus::NullArgument, "null workspace"))
}

/// # Safety
/// `p` is null or points to `n` readable values.
unsafe fn slice_arg<'a, T>(p: *const T, n: usize) -> Result<&'a [T], ZzStatus> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail_with(ZzStatus::NullArgument, "null array with nonzero length"));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

fn path_arg(s: &str) -> Result<Path, ZzStatus> {
    s.parse().map_err(|e: String| fail_with(ZzStatus::InvalidArgument, e))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

fn bias(b: ZzBias) -> Bias {
    match b {
        ZzBias::None => Bias::None,
        ZzBias::Lower => Bias::Lower,
        ZzBias::Higher => Bias::Higher,
    }
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn zz_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// A new empty workspace. Never null.
#[no_mangle]
pub extern "C" fn zz_workspace_new() -> *mut ZzWorkspace {
    Box::into_raw(Box::new(ZzWorkspace { inner: Workspace::new() }))
}

/// Parses a saved workspace. On success `*out` receives a new handle.
///
/// # Safety
/// `bytes` points to `len` readable bytes; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn zz_workspace_load(bytes: *const u8, len: usize, out: *mut *mut ZzWorkspace) -> ZzStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail_with(ZzStatus::NullArgument, "null output pointer"));
        }
        let data = slice_arg(bytes, len)?;
        let w = Workspace::load(data).map_err(fail)?;
        *out = Box::into_raw(Box::new(ZzWorkspace { inner: w }));
        Ok(())
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `ws` is null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn zz_workspace_free(ws: *mut ZzWorkspace) {
    if !ws.is_null() {
        drop(Box::from_raw(ws));
    }
}

/// The canonical file bytes; release with [`zz_bytes_free`].
///
/// # Safety
/// `ws` is a live handle; `out` and `out_len` are writable.
#[no_mangle]
pub unsafe extern "C" fn zz_workspace_save(ws: *mut ZzWorkspace, out: *mut *mut u8, out_len: *mut usize) -> ZzStatus {
    guard(|| {
        let w = handle(ws)?;
        if out.is_null() || out_len.is_null() {
            return Err(fail_with(ZzStatus::NullArgument, "null output pointer"));
        }
        let bytes = w.inner.save().into_boxed_slice();
        *out_len = bytes.len();
        *out = Box::into_raw(bytes).cast();
        Ok(())
    })
}

/// Content hash as lowercase hex; release with [`zz_string_free`]. Null if
/// `ws` is null.
///
/// # Safety
/// `ws` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn zz_workspace_hash(ws: *mut ZzWorkspace) -> *mut c_char {
    match ws.as_ref() {
        Some(w) => c_string(w.inner.content_hash()),
        None => ptr::null_mut(),
    }
}

/// Applies one script line. Relative files resolve against `base_dir`
/// (null for the current directory).
///
/// # Safety
/// `ws` is a live handle; strings are NUL-terminated or null where allowed.
#[no_mangle]
pub unsafe extern "C" fn zz_workspace_apply(ws: *mut ZzWorkspace, line: *const c_char, base_dir: *const c_char) -> ZzStatus {
    guard(|| {
        let w = handle(ws)?;
        let line = text(line)?;
        let env = ScriptEnv::new(opt_text(base_dir)?.unwrap_or("."));
        w.inner = w.inner.apply_line(line, &env).map_err(fail)?;
        Ok(())
    })
}

/// Runs a script. On failure the workspace holds the state after the last
/// successful command and `*failed_index` (if non-null) the 0-based index of
/// the failing command.
///
/// # Safety
/// As [`zz_workspace_apply`]; `failed_index` is null or writable.
#[no_mangle]
pub unsafe extern "C" fn zz_workspace_replay(
    ws: *mut ZzWorkspace,
    script: *const c_char,
    base_dir: *const c_char,
    failed_index: *mut usize,
) -> ZzStatus {
    guard(|| {
        let w = handle(ws)?;
        let script = text(script)?;
        let env = ScriptEnv::new(opt_text(base_dir)?.unwrap_or("."));
        match w.inner.replay(script, &env) {
            Ok(next) => {
                w.inner = next;
                Ok(())
            }
            Err(e) => {
                if !failed_index.is_null() {
                    *failed_index = e.index;
                }
                w.inner = *e.workspace;
                Err(fail(e.error))
            }
        }
    })
}

/// Contracts the singular heights `a..b` of the slice of `name` at `path`
/// (`"-"` or `""` for the root). `proof` is null or the name of a proof
/// diagram to extend.
///
/// # Safety
/// As [`zz_workspace_apply`].
#[no_mangle]
pub unsafe extern "C" fn zz_workspace_contract(
    ws: *mut ZzWorkspace,
    name: *const c_char,
    path: *const c_char,
    a: usize,
    b: usize,
    bias_: ZzBias,
    proof: *const c_char,
) -> ZzStatus {
    guard(|| {
        let w = handle(ws)?;
        let args = ContractArgs {
            name: text(name)?.to_owned(),
            path: path_arg(text(path)?)?,
            window: (a, b),
            bias: bias(bias_),
            proof: opt_text(proof)?.map(str::to_owned),
            permissive: false,
        };
        w.inner = w.inner.contract(&args).map_err(fail)?;
        Ok(())
    })
}

/// Splits singular height `height` of the addressed slice into the inner
/// heights `lower` and `upper`; `first` says which group comes first.
///
/// # Safety
/// As [`zz_workspace_apply`]; `lower` and `upper` point to `n_lower` and
/// `n_upper` values (or are null when the count is 0).
#[no_mangle]
pub unsafe extern "C" fn zz_workspace_expand(
    ws: *mut ZzWorkspace,
    name: *const c_char,
    path: *const c_char,
    height: usize,
    lower: *const usize,
    n_lower: usize,
    upper: *const usize,
    n_upper: usize,
    first: ZzFirst,
    proof: *const c_char,
) -> ZzStatus {
    guard(|| {
        let w = handle(ws)?;
        let args = ExpandArgs {
            name: text(name)?.to_owned(),
            path: path_arg(text(path)?)?,
            height,
            split: (slice_arg(lower, n_lower)?.to_vec(), slice_arg(upper, n_upper)?.to_vec()),
            first: match first {
                ZzFirst::Lower => First::Lower,
                ZzFirst::Higher => First::Higher,
            },
            proof: opt_text(proof)?.map(str::to_owned),
            permissive: false,
        };
        w.inner = w.inner.expand(&args).map_err(fail)?;
        Ok(())
    })
}

/// Reverts the last logged command.
///
/// # Safety
/// `ws` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn zz_workspace_undo(ws: *mut ZzWorkspace) -> ZzStatus {
    guard(|| {
        let w = handle(ws)?;
        w.inner = w.inner.undo().map_err(fail)?;
        Ok(())
    })
}

/// Number of log entries; 0 for a null handle.
///
/// # Safety
/// `ws` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn zz_workspace_log_len(ws: *mut ZzWorkspace) -> usize {
    ws.as_ref().map_or(0, |w| w.inner.log.len())
}

/// Dimension and top-level length of a diagram.
///
/// # Safety
/// `ws` is a live handle; `name` is NUL-terminated; outputs are writable or
/// null.
#[no_mangle]
pub unsafe extern "C" fn zz_workspace_diagram_shape(
    ws: *mut ZzWorkspace,
    name: *const c_char,
    dimension: *mut usize,
    length: *mut usize,
) -> ZzStatus {
    guard(|| {
        let w = handle(ws)?;
        let d = w.inner.get(text(name)?).map_err(fail)?;
        if !dimension.is_null() {
            *dimension = d.dimension();
        }
        if !length.is_null() {
            *length = d.len();
        }
        Ok(())
    })
}

/// Renders the slice of `name` at `path`; `*out` receives a string to
/// release with [`zz_string_free`].
///
/// # Safety
/// As [`zz_workspace_diagram_shape`]; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn zz_workspace_render(
    ws: *mut ZzWorkspace,
    name: *const c_char,
    path: *const c_char,
    format: ZzFormat,
    out: *mut *mut c_char,
) -> ZzStatus {
    guard(|| {
        let w = handle(ws)?;
        if out.is_null() {
            return Err(fail_with(ZzStatus::NullArgument, "null output pointer"));
        }
        let d = w.inner.get(text(name)?).map_err(fail)?;
        let s = slice(d, &path_arg(text(path)?)?).map_err(|e| fail(e.into()))?;
        let g = project(&w.inner.signature, &s);
        let rendered = match format {
            ZzFormat::Svg => emit_svg(&w.inner.signature, &g, &Style::default()),
            ZzFormat::Text => emit_text(&g),
        };
        *out = c_string(rendered);
        Ok(())
    })
}

fn last<T>(f: impl FnOnce(&LastError) -> T) -> Option<T> {
    LAST_ERROR.with(|e| e.borrow().as_ref().map(f))
}

/// Message of the last failure on this thread, or null; release with
/// [`zz_string_free`].
#[no_mangle]
pub extern "C" fn zz_last_error() -> *mut c_char {
    last(|e| c_string(e.message.clone())).unwrap_or(ptr::null_mut())
}

/// Reason name of the last failure (for example `DeltaColimitFailed`), or
/// null; release with [`zz_string_free`].
#[no_mangle]
pub extern "C" fn zz_last_failure_reason() -> *mut c_char {
    last(|e| c_string(e.reason.clone())).unwrap_or(ptr::null_mut())
}

/// Step of the colimit procedure where the last failure occurred (0 when
/// not applicable), or -1 if there was no failure.
#[no_mangle]
pub extern "C" fn zz_last_failure_step() -> c_int {
    last(|e| e.step).unwrap_or(-1)
}

/// Height of the last failure, if it has one: returns 1 and writes
/// `*height`, otherwise returns 0.
///
/// # Safety
/// `height` is writable.
#[no_mangle]
pub unsafe extern "C" fn zz_last_failure_height(height: *mut usize) -> c_int {
    match last(|e| e.height).flatten() {
        Some(h) if !height.is_null() => {
            *height = h;
            1
        }
        _ => 0,
    }
}

/// # Safety
/// `s` is null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn zz_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `p` and `len` come from [`zz_workspace_save`] and were not yet freed.
#[no_mangle]
pub unsafe extern "C" fn zz_bytes_free(p: *mut u8, len: usize) {
    if !p.is_null() {
        drop(Box::from_raw(ptr::slice_from_raw_parts_mut(p, len)));
    }
}
