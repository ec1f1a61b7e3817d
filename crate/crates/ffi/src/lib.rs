//! C interface to `orbindex`.
//!
//! Objects cross the boundary as opaque handles; every fallible call returns
//! an [`OrbStatus`] and leaves a message for [`orb_last_error`]. Rationals
//! come back as `"p/q"` strings owned by the caller and released with
//! [`orb_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use orbindex::charts::{cc, cc_inverse, intersect_zero_section, LagrangianCycleTable};
use orbindex::error::Error;
use orbindex::io::{self, Workspace};
use orbindex::morse::{morse_evaluate, VertexOrder};
use orbindex::orbifold::{class_of, coarse_weighted_integral, orbifold_integral, quotient, regularize};
use orbindex::rational::render;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Invalid = 4,
    NotFound = 5,
    Computation = 6,
    Panic = 7,
}

/// A loaded set of named complexes, functions, actions, charts and tables.
pub struct OrbWorkspace {
    inner: Workspace,
}

/// A characteristic cycle table together with the names it refers to.
pub struct OrbTable {
    table: LagrangianCycleTable,
    chart: String,
    complex: String,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(OrbStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse { .. } => OrbStatus::Parse,
            Error::Invalid { .. } => OrbStatus::Invalid,
            _ => OrbStatus::Computation,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> OrbStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OrbStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            OrbStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(OrbStatus::NullArgument, format!("{what} is null"))
}

fn not_found(kind: &str, name: &str) -> Failure {
    Failure(OrbStatus::NotFound, format!("no {kind} named {name:?}"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(OrbStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = CString::new(s)
        .map_err(|_| Failure(OrbStatus::Computation, "result contains NUL".into()))?
        .into_raw();
    Ok(())
}

unsafe fn workspace<'a>(ws: *const OrbWorkspace) -> Result<&'a Workspace, Failure> {
    ws.as_ref().map(|w| &w.inner).ok_or_else(|| null("workspace"))
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn orb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn orb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn orb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Load every `*.json` file in a directory.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn orb_workspace_load(path: *const c_char, out: *mut *mut OrbWorkspace) -> OrbStatus {
    guard(|| {
        let path = text(path, "path")?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let inner = Workspace::load_dir(Path::new(path))?;
        *out = Box::into_raw(Box::new(OrbWorkspace { inner }));
        Ok(())
    })
}

/// Build a workspace from `n` named JSON documents held in memory.
///
/// # Safety
/// `names` and `texts` must each point to `n` NUL-terminated strings; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn orb_workspace_from_sources(
    names: *const *const c_char,
    texts: *const *const c_char,
    n: usize,
    out: *mut *mut OrbWorkspace,
) -> OrbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        if n > 0 && (names.is_null() || texts.is_null()) {
            return Err(null("source arrays"));
        }
        let mut sources = Vec::with_capacity(n);
        for i in 0..n {
            sources.push((
                text(*names.add(i), "name")?.to_owned(),
                text(*texts.add(i), "document")?.to_owned(),
            ));
        }
        let inner = Workspace::from_sources(sources)?;
        *out = Box::into_raw(Box::new(OrbWorkspace { inner }));
        Ok(())
    })
}

/// # Safety
/// `ws` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn orb_workspace_free(ws: *mut OrbWorkspace) {
    if !ws.is_null() {
        drop(Box::from_raw(ws));
    }
}

/// Euler integral of a named function.
///
/// # Safety
/// Pointers must be valid; `out` receives a string to free with
/// [`orb_string_free`].
#[no_mangle]
pub unsafe extern "C" fn orb_euler_integral(
    ws: *const OrbWorkspace,
    function: *const c_char,
    out: *mut *mut c_char,
) -> OrbStatus {
    guard(|| {
        let ws = workspace(ws)?;
        let name = text(function, "function")?;
        let f = ws.functions.get(name).ok_or_else(|| not_found("function", name))?;
        put_string(out, render(&f.value.euler_integral()))
    })
}

/// Sum of local Morse indices for a seeded random vertex order.
///
/// # Safety
/// As for [`orb_euler_integral`].
#[no_mangle]
pub unsafe extern "C" fn orb_morse_evaluate(
    ws: *const OrbWorkspace,
    function: *const c_char,
    seed: u64,
    out: *mut *mut c_char,
) -> OrbStatus {
    guard(|| {
        let ws = workspace(ws)?;
        let name = text(function, "function")?;
        let f = &ws.functions.get(name).ok_or_else(|| not_found("function", name))?.value;
        let order = VertexOrder::random(f.complex(), &mut ChaCha8Rng::seed_from_u64(seed));
        put_string(out, render(&morse_evaluate(f, &order)?))
    })
}

/// Characteristic cycle of a named function on a named chart.
///
/// # Safety
/// Pointers must be valid; `out` receives a handle to free with
/// [`orb_table_free`].
#[no_mangle]
pub unsafe extern "C" fn orb_cc(
    ws: *const OrbWorkspace,
    function: *const c_char,
    chart: *const c_char,
    out: *mut *mut OrbTable,
) -> OrbStatus {
    guard(|| {
        let ws = workspace(ws)?;
        let (fname, cname) = (text(function, "function")?, text(chart, "chart")?);
        let f = ws.functions.get(fname).ok_or_else(|| not_found("function", fname))?;
        let c = ws.charts.get(cname).ok_or_else(|| not_found("chart", cname))?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let table = cc(&f.value, &c.value)?;
        *out = Box::into_raw(Box::new(OrbTable {
            table,
            chart: cname.to_owned(),
            complex: c.parent.clone(),
        }));
        Ok(())
    })
}

/// A table stored in the workspace.
///
/// # Safety
/// As for [`orb_cc`].
#[no_mangle]
pub unsafe extern "C" fn orb_table_get(
    ws: *const OrbWorkspace,
    name: *const c_char,
    out: *mut *mut OrbTable,
) -> OrbStatus {
    guard(|| {
        let ws = workspace(ws)?;
        let name = text(name, "table")?;
        let t = ws.tables.get(name).ok_or_else(|| not_found("table", name))?;
        let complex = ws.charts.get(&t.parent).map(|c| c.parent.clone()).unwrap_or_default();
        if out.is_null() {
            return Err(null("output pointer"));
        }
        *out = Box::into_raw(Box::new(OrbTable {
            table: t.value.clone(),
            chart: t.parent.clone(),
            complex,
        }));
        Ok(())
    })
}

/// Number of nonzero chamber multiplicities.
///
/// # Safety
/// `table` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn orb_table_len(table: *const OrbTable, out: *mut usize) -> OrbStatus {
    guard(|| {
        let t = table.as_ref().ok_or_else(|| null("table"))?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        *out = t.table.entries().len();
        Ok(())
    })
}

/// Intersection with the zero section at the default generic covector.
///
/// # Safety
/// As for [`orb_euler_integral`].
#[no_mangle]
pub unsafe extern "C" fn orb_table_intersect(table: *const OrbTable, out: *mut *mut c_char) -> OrbStatus {
    guard(|| {
        let t = table.as_ref().ok_or_else(|| null("table"))?;
        put_string(out, render(&intersect_zero_section(&t.table, None)?))
    })
}

/// The table as a workspace JSON document.
///
/// # Safety
/// As for [`orb_euler_integral`].
#[no_mangle]
pub unsafe extern "C" fn orb_table_to_json(table: *const OrbTable, out: *mut *mut c_char) -> OrbStatus {
    guard(|| {
        let t = table.as_ref().ok_or_else(|| null("table"))?;
        put_string(out, io::to_text(&io::table_json(&t.table, &t.chart)))
    })
}

/// The function whose characteristic cycle is `table`, as a JSON document.
///
/// # Safety
/// As for [`orb_euler_integral`].
#[no_mangle]
pub unsafe extern "C" fn orb_table_inverse(table: *const OrbTable, out: *mut *mut c_char) -> OrbStatus {
    guard(|| {
        let t = table.as_ref().ok_or_else(|| null("table"))?;
        let f = cc_inverse(&t.table)?;
        put_string(out, io::to_text(&io::function_json(&f, &t.complex)))
    })
}

/// # Safety
/// `table` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn orb_table_free(table: *mut OrbTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Orbifold integral of the class of a named function under a named action.
///
/// # Safety
/// As for [`orb_euler_integral`].
#[no_mangle]
pub unsafe extern "C" fn orb_orbifold_integral(
    ws: *const OrbWorkspace,
    function: *const c_char,
    action: *const c_char,
    out: *mut *mut c_char,
) -> OrbStatus {
    guard(|| {
        let ws = workspace(ws)?;
        let (fname, aname) = (text(function, "function")?, text(action, "action")?);
        let f = ws.functions.get(fname).ok_or_else(|| not_found("function", fname))?;
        let a = ws.actions.get(aname).ok_or_else(|| not_found("action", aname))?;
        put_string(out, render(&orbifold_integral(&class_of(&f.value, &a.value)?)))
    })
}

/// `∫ p_!(f)·ι` on the coarse space, after regularizing the action.
///
/// # Safety
/// As for [`orb_euler_integral`].
#[no_mangle]
pub unsafe extern "C" fn orb_coarse_weighted_integral(
    ws: *const OrbWorkspace,
    function: *const c_char,
    action: *const c_char,
    out: *mut *mut c_char,
) -> OrbStatus {
    guard(|| {
        let ws = workspace(ws)?;
        let (fname, aname) = (text(function, "function")?, text(action, "action")?);
        let f = ws.functions.get(fname).ok_or_else(|| not_found("function", fname))?;
        let a = ws.actions.get(aname).ok_or_else(|| not_found("action", aname))?;
        let reg = regularize(&a.value)?;
        let qd = quotient(&reg.action)?;
        let h = f.value.pullback_subdivision(&reg.subdivision)?;
        let c = class_of(&h, &reg.action)?;
        put_string(out, render(&coarse_weighted_integral(&c, &qd)?))
    })
}

/// Run the command-line interface in process. `argv` excludes the program
/// name. Standard output and error are captured into `out` and `err`
/// (either may be NULL to discard) and the exit code is stored in `code`.
///
/// # Safety
/// `argv` must point to `argc` NUL-terminated strings; `code` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn orb_cli_run(
    argv: *const *const c_char,
    argc: usize,
    out: *mut *mut c_char,
    err: *mut *mut c_char,
    code: *mut i32,
) -> OrbStatus {
    guard(|| {
        if code.is_null() {
            return Err(null("exit code pointer"));
        }
        if argc > 0 && argv.is_null() {
            return Err(null("argv"));
        }
        let mut args = vec!["orbindex".to_owned()];
        for i in 0..argc {
            args.push(text(*argv.add(i), "argument")?.to_owned());
        }
        let (mut o, mut e) = (Vec::new(), Vec::new());
        *code = orbindex::cli::run(args, &mut o, &mut e);
        if !out.is_null() {
            put_string(out, String::from_utf8_lossy(&o).into_owned())?;
        }
        if !err.is_null() {
            put_string(err, String::from_utf8_lossy(&e).into_owned())?;
        }
        Ok(())
    })
}
