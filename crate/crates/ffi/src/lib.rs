//! C ABI over `topocent`.
//!
//! Graphs and spectral bundles are opaque heap handles released with their
//! `_free` function. Every entry point returns a [`TcStatus`]; on failure a
//! description is available from [`tc_last_error_message`] on the same
//! thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use topocent::spectral::{effective_resistance, kirchhoff_index, topological_centrality};
use topocent::walks::{estimate_hitting_mc, hitting_times_exact};
use topocent::{build_spectral, parse_edge_list, Error, Graph, SpectralBundle};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Disconnected = 4,
    NodeOutOfRange = 5,
    InvalidGraph = 6,
    InvalidArgument = 7,
    BufferSize = 8,
    Numerical = 9,
    Panic = 10,
}

/// Opaque graph handle.
pub struct TcGraph(Graph);

/// Opaque handle to `L⁺` and its derived quantities.
pub struct TcSpectral(SpectralBundle);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> TcStatus {
    match e {
        Error::Parse { .. } => TcStatus::Parse,
        Error::Disconnected { .. } => TcStatus::Disconnected,
        Error::NodeOutOfRange { .. } | Error::UnknownLabel(_) => TcStatus::NodeOutOfRange,
        Error::SelfLoop(_) | Error::DuplicateEdge(..) | Error::MissingEdge(..) | Error::InvalidWeight(_) => {
            TcStatus::InvalidGraph
        }
        Error::Numerical(_) | Error::Overflow(_) | Error::StepCapExceeded { .. } => TcStatus::Numerical,
        Error::LengthMismatch { .. } => TcStatus::BufferSize,
        _ => TcStatus::InvalidArgument,
    }
}

struct Fail(TcStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(TcStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records any failure and converts panics into [`TcStatus::Panic`].
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> TcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TcStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            TcStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Parses a whitespace-separated edge list (`u v [w]` per line, `#`
/// comments).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_graph_parse(text: *const c_char, out: *mut *mut TcGraph) -> TcStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| Fail(TcStatus::InvalidUtf8, e.to_string()))?;
        let g = parse_edge_list(text)?;
        write(out, Box::into_raw(Box::new(TcGraph(g))), "out")
    })
}

/// Builds a graph on `n` nodes from `m` edges `(us[k], vs[k])`. `weights`
/// may be null for an unweighted graph.
///
/// # Safety
/// `us` and `vs` (and `weights` when non-null) must point to `m` elements.
#[no_mangle]
pub unsafe extern "C" fn tc_graph_from_edges(
    n: usize,
    us: *const usize,
    vs: *const usize,
    weights: *const f64,
    m: usize,
    out: *mut *mut TcGraph,
) -> TcStatus {
    guard(|| {
        if m > 0 && (us.is_null() || vs.is_null()) {
            return Err(null("edge array"));
        }
        let (us, vs) = if m == 0 {
            (&[][..], &[][..])
        } else {
            (std::slice::from_raw_parts(us, m), std::slice::from_raw_parts(vs, m))
        };
        let g = if weights.is_null() {
            Graph::unweighted(n, us.iter().copied().zip(vs.iter().copied()))?
        } else {
            let ws = std::slice::from_raw_parts(weights, m);
            Graph::from_edges(n, (0..m).map(|k| (us[k], vs[k], ws[k])))?
        };
        write(out, Box::into_raw(Box::new(TcGraph(g))), "out")
    })
}

/// # Safety
/// `g` must come from a `tc_graph_*` constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn tc_graph_free(g: *mut TcGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn tc_graph_node_count(g: *const TcGraph, out: *mut usize) -> TcStatus {
    guard(|| write(out, deref(g, "graph")?.0.node_count(), "out"))
}

/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn tc_graph_edge_count(g: *const TcGraph, out: *mut usize) -> TcStatus {
    guard(|| write(out, deref(g, "graph")?.0.edge_count(), "out"))
}

/// Computes `L⁺` for a connected graph.
///
/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn tc_spectral_build(g: *const TcGraph, out: *mut *mut TcSpectral) -> TcStatus {
    guard(|| {
        let b = build_spectral(&deref(g, "graph")?.0)?;
        write(out, Box::into_raw(Box::new(TcSpectral(b))), "out")
    })
}

/// # Safety
/// `s` must come from [`tc_spectral_build`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn tc_spectral_free(s: *mut TcSpectral) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

unsafe fn fill(buf: *mut f64, len: usize, values: &[f64]) -> Result<(), Fail> {
    if buf.is_null() {
        return Err(null("buffer"));
    }
    if len != values.len() {
        return Err(Fail(TcStatus::BufferSize, format!("buffer holds {len} values, need {}", values.len())));
    }
    std::slice::from_raw_parts_mut(buf, len).copy_from_slice(values);
    Ok(())
}

/// Writes `C*(i) = 1/l⁺_ii` for every node; `len` must equal the node count.
///
/// # Safety
/// `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn tc_spectral_cstar(s: *const TcSpectral, buf: *mut f64, len: usize) -> TcStatus {
    guard(|| fill(buf, len, &topological_centrality(&deref(s, "spectral")?.0)))
}

/// Writes `diag(L⁺)`; `len` must equal the node count.
///
/// # Safety
/// `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn tc_spectral_lplus_diag(s: *const TcSpectral, buf: *mut f64, len: usize) -> TcStatus {
    guard(|| fill(buf, len, &deref(s, "spectral")?.0.lplus_diag()))
}

/// `K = Tr(L⁺)` and `K* = 1/K`. Either output may be null.
///
/// # Safety
/// `s` must be a live spectral handle.
#[no_mangle]
pub unsafe extern "C" fn tc_spectral_kirchhoff(s: *const TcSpectral, k: *mut f64, kstar: *mut f64) -> TcStatus {
    guard(|| {
        let (kv, ks) = kirchhoff_index(&deref(s, "spectral")?.0);
        if !k.is_null() {
            k.write(kv);
        }
        if !kstar.is_null() {
            kstar.write(ks);
        }
        Ok(())
    })
}

/// # Safety
/// `s` must be a live spectral handle.
#[no_mangle]
pub unsafe extern "C" fn tc_spectral_effective_resistance(
    s: *const TcSpectral,
    i: usize,
    j: usize,
    out: *mut f64,
) -> TcStatus {
    guard(|| {
        let b = &deref(s, "spectral")?.0;
        let n = b.node_count();
        for node in [i, j] {
            if node >= n {
                return Err(Error::NodeOutOfRange { node, n }.into());
            }
        }
        write(out, effective_resistance(b, i, j), "out")
    })
}

/// Exact expected hitting time `H(i, j)`.
///
/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn tc_hitting_time(g: *const TcGraph, i: usize, j: usize, out: *mut f64) -> TcStatus {
    guard(|| {
        let g = &deref(g, "graph")?.0;
        g.check_node(i)?;
        g.check_node(j)?;
        write(out, hitting_times_exact(g)?.hitting[(i, j)], "out")
    })
}

/// Monte Carlo estimate of `H(i, j)` over `runs` seeded walks.
/// `std_error` may be null.
///
/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn tc_hitting_time_mc(
    g: *const TcGraph,
    i: usize,
    j: usize,
    runs: u64,
    seed: u64,
    mean: *mut f64,
    std_error: *mut f64,
) -> TcStatus {
    guard(|| {
        let est = estimate_hitting_mc(&deref(g, "graph")?.0, i, j, runs, seed)?;
        write(mean, est.mean, "mean")?;
        if !std_error.is_null() {
            std_error.write(est.std_error);
        }
        Ok(())
    })
}

/// Message for the last failed call on this thread, or null. The caller
/// owns the string and releases it with [`tc_string_free`].
#[no_mangle]
pub extern "C" fn tc_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().clone().map_or(ptr::null_mut(), CString::into_raw))
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn tc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
