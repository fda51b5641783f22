// SPDX-License-Identifier: Apache-2.0

//! C ABI over `bcc-core`.
//!
//! Graphs and results are opaque heap handles released with their `_free`
//! function. Every fallible call returns a [`BccStatus`]; on failure the
//! message is available from [`bcc_last_error`] on the same thread.
//! Vertex ids crossing the boundary are the external ids of the input files.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use bcc_core::io::{load_graph_files, LoadError, LoadOptions};
use bcc_core::{mbcc_search, online_search, Algorithm, BccQuery, CoreParam, LabeledGraph, MbccQuery, Status};

/// Result codes of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BccStatus {
    Ok = 0,
    /// The query ran but no community satisfies it; a result is still returned.
    Infeasible = 1,
    /// Null pointer, bad UTF-8 or an out-of-range parameter.
    InvalidArgument = 2,
    /// A file could not be read.
    Io = 3,
    /// An input file is malformed.
    Parse = 4,
    /// The query was rejected, e.g. unknown vertex or same labels.
    Query = 5,
    /// A panic was caught at the boundary.
    Internal = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BccAlgorithm {
    Online = 0,
    Lp = 1,
    L2p = 2,
}

impl From<BccAlgorithm> for Algorithm {
    fn from(a: BccAlgorithm) -> Self {
        match a {
            BccAlgorithm::Online => Algorithm::Online,
            BccAlgorithm::Lp => Algorithm::Lp,
            BccAlgorithm::L2p => Algorithm::L2p,
        }
    }
}

/// Two-vertex query. A negative `k1` or `k2` selects the query vertex's
/// coreness. Start from [`bcc_query_params_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BccQueryParams {
    pub q_l: u64,
    pub q_r: u64,
    pub k1: i32,
    pub k2: i32,
    pub b: u64,
    pub algorithm: BccAlgorithm,
    pub eta: usize,
    pub rho: u32,
    pub gamma1: f64,
    pub gamma2: f64,
}

/// A loaded labeled graph.
pub struct BccGraph {
    graph: LabeledGraph,
}

/// A search result with vertices translated to external ids.
pub struct BccResult {
    found: bool,
    reason: Option<CString>,
    vertices: Vec<u64>,
    leaders: Option<(u64, u64)>,
    query_distance: u32,
    diameter: u32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Failure(BccStatus, String);

/// Runs `f` with panics and errors turned into a status and a stored message.
fn guard(f: impl FnOnce() -> Result<BccStatus, Failure>) -> BccStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            BccStatus::Internal
        }
    }
}

fn invalid(msg: &str) -> Failure {
    Failure(BccStatus::InvalidArgument, msg.to_string())
}

/// # Safety
/// `p` must be null or a valid NUL-terminated string.
unsafe fn path_arg<'a>(p: *const c_char, name: &str) -> Result<&'a Path, Failure> {
    if p.is_null() {
        return Err(invalid(&format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map(Path::new)
        .map_err(|_| invalid(&format!("{name} is not UTF-8")))
}

fn core_param(k: i32) -> CoreParam {
    if k < 0 {
        CoreParam::Auto
    } else {
        CoreParam::Fixed(k as u32)
    }
}

fn vertex(g: &LabeledGraph, id: u64) -> Result<u32, Failure> {
    g.vertex_of(id)
        .ok_or_else(|| Failure(BccStatus::Query, format!("query vertex {id} is not in the graph")))
}

fn finish(out: *mut *mut BccResult, r: BccResult) -> BccStatus {
    let status = if r.found { BccStatus::Ok } else { BccStatus::Infeasible };
    // SAFETY: callers checked `out` for null.
    unsafe { *out = Box::into_raw(Box::new(r)) };
    status
}

fn reason(status: &Status) -> Option<CString> {
    match status {
        Status::Found => None,
        Status::Infeasible(r) => CString::new(r.as_str()).ok(),
    }
}

/// Default query parameters: automatic cores, `b = 1`, lp mode.
#[no_mangle]
pub extern "C" fn bcc_query_params_default() -> BccQueryParams {
    BccQueryParams {
        q_l: 0,
        q_r: 0,
        k1: -1,
        k2: -1,
        b: 1,
        algorithm: BccAlgorithm::Lp,
        eta: BccQuery::DEFAULT_ETA,
        rho: BccQuery::DEFAULT_RHO,
        gamma1: BccQuery::DEFAULT_GAMMA,
        gamma2: BccQuery::DEFAULT_GAMMA,
    }
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bcc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Loads a graph from an edge file and a label file.
///
/// # Safety
/// Paths must be null or NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bcc_graph_load(
    edges_path: *const c_char,
    labels_path: *const c_char,
    out: *mut *mut BccGraph,
) -> BccStatus {
    guard(|| {
        if out.is_null() {
            return Err(invalid("out is null"));
        }
        let edges = path_arg(edges_path, "edges_path")?;
        let labels = path_arg(labels_path, "labels_path")?;
        let graph = load_graph_files(edges, labels, LoadOptions::default()).map_err(|e| {
            let status = if matches!(e, LoadError::Io { .. }) {
                BccStatus::Io
            } else {
                BccStatus::Parse
            };
            Failure(status, e.to_string())
        })?;
        *out = Box::into_raw(Box::new(BccGraph { graph }));
        Ok(BccStatus::Ok)
    })
}

/// Releases a graph. Null is ignored.
///
/// # Safety
/// `g` must be null or come from [`bcc_graph_load`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn bcc_graph_free(g: *mut BccGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn bcc_graph_vertex_count(g: *const BccGraph) -> usize {
    g.as_ref().map_or(0, |g| g.graph.vertex_count())
}

/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn bcc_graph_edge_count(g: *const BccGraph) -> usize {
    g.as_ref().map_or(0, |g| g.graph.edge_count())
}

/// Runs a two-vertex search. Returns `BCC_STATUS_OK` or
/// `BCC_STATUS_INFEASIBLE` with a result in `*out`; other codes leave
/// `*out` untouched.
///
/// # Safety
/// `g` must be a live graph handle, `params` readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bcc_query(
    g: *const BccGraph,
    params: *const BccQueryParams,
    out: *mut *mut BccResult,
) -> BccStatus {
    guard(|| {
        let (Some(g), Some(p)) = (g.as_ref(), params.as_ref()) else {
            return Err(invalid("graph or params is null"));
        };
        if out.is_null() {
            return Err(invalid("out is null"));
        }
        let g = &g.graph;
        let mut q = BccQuery::new(vertex(g, p.q_l)?, vertex(g, p.q_r)?)
            .with_b(p.b)
            .with_algorithm(p.algorithm.into());
        q.k1 = core_param(p.k1);
        q.k2 = core_param(p.k2);
        q.eta = p.eta;
        q.rho = p.rho;
        q.gamma1 = p.gamma1;
        q.gamma2 = p.gamma2;
        let r = online_search(g, &q).map_err(|e| Failure(BccStatus::Query, e.to_string()))?;
        let ext = |vs: &[u32]| vs.iter().map(|&v| g.external_id(v)).collect::<Vec<_>>();
        Ok(finish(
            out,
            BccResult {
                found: r.status.is_found(),
                reason: reason(&r.status),
                vertices: ext(&r.vertices),
                leaders: r.leaders.map(|l| (g.external_id(l.v_l), g.external_id(l.v_r))),
                query_distance: r.query_distance,
                diameter: r.diameter,
            },
        ))
    })
}

/// Runs a search over `m >= 2` query vertices of distinct labels. `ks` may
/// be null for automatic cores; otherwise it holds `m` entries where a
/// negative value means automatic.
///
/// # Safety
/// `g` must be a live graph handle, `queries` must hold `m` ids, `ks` must
/// be null or hold `m` values, and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bcc_query_multi(
    g: *const BccGraph,
    queries: *const u64,
    ks: *const i32,
    m: usize,
    b: u64,
    algorithm: BccAlgorithm,
    out: *mut *mut BccResult,
) -> BccStatus {
    guard(|| {
        let Some(g) = g.as_ref() else {
            return Err(invalid("graph is null"));
        };
        if queries.is_null() || out.is_null() {
            return Err(invalid("queries or out is null"));
        }
        let g = &g.graph;
        let ids = std::slice::from_raw_parts(queries, m);
        let mut q = MbccQuery::new(ids.iter().map(|&id| vertex(g, id)).collect::<Result<_, _>>()?);
        if !ks.is_null() {
            q.k = std::slice::from_raw_parts(ks, m)
                .iter()
                .map(|&k| core_param(k))
                .collect();
        }
        q.b = b;
        q.algorithm = algorithm.into();
        let r = mbcc_search(g, &q).map_err(|e| Failure(BccStatus::Query, e.to_string()))?;
        Ok(finish(
            out,
            BccResult {
                found: r.status.is_found(),
                reason: reason(&r.status),
                vertices: r.vertices.iter().map(|&v| g.external_id(v)).collect(),
                leaders: r
                    .leaders
                    .first()
                    .map(|p| (g.external_id(p.leaders.v_l), g.external_id(p.leaders.v_r))),
                query_distance: r.query_distance,
                diameter: r.diameter,
            },
        ))
    })
}

/// # Safety
/// `r` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn bcc_result_found(r: *const BccResult) -> bool {
    r.as_ref().is_some_and(|r| r.found)
}

/// Community vertices in ascending id order; `*len` receives the count.
/// The array lives as long as the result.
///
/// # Safety
/// `r` must be null or a live result handle; `len` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn bcc_result_vertices(r: *const BccResult, len: *mut usize) -> *const u64 {
    let (ptr, n) = r
        .as_ref()
        .map_or((ptr::null(), 0), |r| (r.vertices.as_ptr(), r.vertices.len()));
    if !len.is_null() {
        *len = n;
    }
    ptr
}

/// # Safety
/// `r` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn bcc_result_query_distance(r: *const BccResult) -> u32 {
    r.as_ref().map_or(0, |r| r.query_distance)
}

/// # Safety
/// `r` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn bcc_result_diameter(r: *const BccResult) -> u32 {
    r.as_ref().map_or(0, |r| r.diameter)
}

/// Writes the leader pair (the first pair for multi-vertex searches).
/// Returns false when the result has none.
///
/// # Safety
/// `r` must be null or a live result handle; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn bcc_result_leaders(r: *const BccResult, v_l: *mut u64, v_r: *mut u64) -> bool {
    match r.as_ref().and_then(|r| r.leaders) {
        Some((a, b)) if !v_l.is_null() && !v_r.is_null() => {
            *v_l = a;
            *v_r = b;
            true
        }
        _ => false,
    }
}

/// Machine-readable infeasibility reason such as `core-infeasible:left`,
/// or null for a found community.
///
/// # Safety
/// `r` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn bcc_result_reason(r: *const BccResult) -> *const c_char {
    r.as_ref()
        .and_then(|r| r.reason.as_ref())
        .map_or(ptr::null(), |s| s.as_ptr())
}

/// Releases a result. Null is ignored.
///
/// # Safety
/// `r` must be null or come from a query call and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn bcc_result_free(r: *mut BccResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}
