//! C interface to `bgpmatch`.
//!
//! Stores and solution sets are opaque handles created and freed through
//! this API. Every fallible call returns a [`BgpStatus`]; on failure,
//! [`bgp_last_error`] describes the problem. Strings handed out by the
//! library are NUL-terminated, owned by the caller and released with
//! [`bgp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bgpmatch::results::{self, Format};
use bgpmatch::rdf::RdfError;
use bgpmatch::{EngineError, SolutionSet, Store};

/// Bumped whenever a signature or the meaning of a status changes.
pub const BGP_ABI_VERSION: u32 = 1;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BgpStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    IoError = 3,
    DataParseError = 4,
    QueryParseError = 5,
    OutOfRange = 6,
    Internal = 7,
}

/// A loaded dataset.
pub struct BgpStore(Store);

/// The answer to one query: variables and rows of N-Triples terms.
pub struct BgpSolutions(SolutionSet);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Failure(BgpStatus, String);

impl Failure {
    fn null(what: &str) -> Self {
        Failure(BgpStatus::NullArgument, format!("{what} is null"))
    }
}

impl From<RdfError> for Failure {
    fn from(e: RdfError) -> Self {
        let status = match e {
            RdfError::Io(_) => BgpStatus::IoError,
            _ => BgpStatus::DataParseError,
        };
        Failure(status, e.to_string())
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Data(e) => e.into(),
            EngineError::Query(e) => Failure(BgpStatus::QueryParseError, e.to_string()),
            e => Failure(BgpStatus::Internal, e.to_string()),
        }
    }
}

/// Runs `f`, turning errors and panics into a status plus last-error text.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> BgpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BgpStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            BgpStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(BgpStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::null(what))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::null("out"));
    }
    out.write(value);
    Ok(())
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', "\\u0000")).map_or(ptr::null_mut(), CString::into_raw)
}

#[no_mangle]
pub extern "C" fn bgp_abi_version() -> u32 {
    BGP_ABI_VERSION
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn bgp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Loads an N-Triples file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bgp_store_open(path: *const c_char, out: *mut *mut BgpStore) -> BgpStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        if out.is_null() {
            return Err(Failure::null("out"));
        }
        let store = Store::load(path)?;
        put(out, Box::into_raw(Box::new(BgpStore(store))))
    })
}

/// Parses `len` bytes of N-Triples text.
///
/// # Safety
/// `data` must point to `len` readable bytes and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bgp_store_from_ntriples(data: *const u8, len: usize, out: *mut *mut BgpStore) -> BgpStatus {
    guard(|| {
        if data.is_null() && len > 0 {
            return Err(Failure::null("data"));
        }
        if out.is_null() {
            return Err(Failure::null("out"));
        }
        let bytes = if len == 0 { &[][..] } else { std::slice::from_raw_parts(data, len) };
        let text = std::str::from_utf8(bytes).map_err(|e| Failure(BgpStatus::InvalidUtf8, format!("data: {e}")))?;
        let store = Store::from_ntriples(text)?;
        put(out, Box::into_raw(Box::new(BgpStore(store))))
    })
}

/// # Safety
/// `store` must come from this library and not be used afterwards. Null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn bgp_store_free(store: *mut BgpStore) {
    if !store.is_null() {
        drop(Box::from_raw(store));
    }
}

/// Statements loaded, duplicates included.
///
/// # Safety
/// `store` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bgp_store_triple_count(store: *const BgpStore, out: *mut usize) -> BgpStatus {
    guard(|| put(out, handle(store, "store")?.0.triples().len()))
}

/// Distinct subjects and objects, i.e. graph vertices.
///
/// # Safety
/// `store` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bgp_store_vertex_count(store: *const BgpStore, out: *mut usize) -> BgpStatus {
    guard(|| put(out, handle(store, "store")?.0.graph().num_vertices()))
}

/// Distinct statements, i.e. graph edges.
///
/// # Safety
/// `store` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bgp_store_edge_count(store: *const BgpStore, out: *mut usize) -> BgpStatus {
    guard(|| put(out, handle(store, "store")?.0.graph().num_edges()))
}

/// Answers a query. `threads` of 0 uses the default worker pool.
///
/// # Safety
/// `store` must be a live handle, `query` NUL-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bgp_store_query(
    store: *const BgpStore,
    query: *const c_char,
    threads: usize,
    out: *mut *mut BgpSolutions,
) -> BgpStatus {
    guard(|| {
        let store = &handle(store, "store")?.0;
        let query = str_arg(query, "query")?;
        if out.is_null() {
            return Err(Failure::null("out"));
        }
        let prepared = store.prepare(query).map_err(EngineError::from)?;
        let threads = (threads > 0).then_some(threads);
        let exec = store.execute_with_threads(&prepared, threads)?;
        put(out, Box::into_raw(Box::new(BgpSolutions(exec.solutions))))
    })
}

/// # Safety
/// `solutions` must come from this library and not be used afterwards.
/// Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn bgp_solutions_free(solutions: *mut BgpSolutions) {
    if !solutions.is_null() {
        drop(Box::from_raw(solutions));
    }
}

/// Number of rows; 0 for a null handle.
///
/// # Safety
/// `solutions` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bgp_solutions_row_count(solutions: *const BgpSolutions) -> usize {
    solutions.as_ref().map_or(0, |s| s.0.len())
}

/// Number of projected variables; 0 for a null handle.
///
/// # Safety
/// `solutions` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bgp_solutions_var_count(solutions: *const BgpSolutions) -> usize {
    solutions.as_ref().map_or(0, |s| s.0.vars().len())
}

/// Name of column `col`, without the `?`.
///
/// # Safety
/// `solutions` must be a live handle and `out` valid. Free the string with
/// [`bgp_string_free`].
#[no_mangle]
pub unsafe extern "C" fn bgp_solutions_var_name(
    solutions: *const BgpSolutions,
    col: usize,
    out: *mut *mut c_char,
) -> BgpStatus {
    guard(|| {
        let s = &handle(solutions, "solutions")?.0;
        let var = s
            .vars()
            .get(col)
            .ok_or_else(|| Failure(BgpStatus::OutOfRange, format!("column {col} of {}", s.vars().len())))?;
        put(out, c_string(var.name().to_string()))
    })
}

/// Term at (`row`, `col`) in N-Triples syntax.
///
/// # Safety
/// `solutions` must be a live handle and `out` valid. Free the string with
/// [`bgp_string_free`].
#[no_mangle]
pub unsafe extern "C" fn bgp_solutions_term(
    solutions: *const BgpSolutions,
    row: usize,
    col: usize,
    out: *mut *mut c_char,
) -> BgpStatus {
    guard(|| {
        let s = &handle(solutions, "solutions")?.0;
        let term = s
            .rows()
            .get(row)
            .and_then(|r| r.get(col))
            .ok_or_else(|| Failure(BgpStatus::OutOfRange, format!("cell ({row}, {col}) of {}x{}", s.len(), s.vars().len())))?;
        put(out, c_string(term.to_string()))
    })
}

/// Whole result as TSV, the same bytes the CLI prints.
///
/// # Safety
/// `solutions` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bgp_solutions_to_tsv(solutions: *const BgpSolutions, out: *mut *mut c_char) -> BgpStatus {
    guard(|| put(out, c_string(results::to_string(&handle(solutions, "solutions")?.0, Format::Tsv))))
}

/// Whole result as JSON: `{"vars": [...], "rows": [[...], ...]}`.
///
/// # Safety
/// `solutions` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bgp_solutions_to_json(solutions: *const BgpSolutions, out: *mut *mut c_char) -> BgpStatus {
    guard(|| put(out, c_string(results::to_string(&handle(solutions, "solutions")?.0, Format::Json))))
}

/// # Safety
/// `s` must be a string returned by this library, or null.
#[no_mangle]
pub unsafe extern "C" fn bgp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
