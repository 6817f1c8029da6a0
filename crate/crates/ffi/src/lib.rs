//! C ABI over the sparsify library. Graphs are opaque handles; results come
//! back as caller-freed edge buffers; every function returns a status code
//! and stores a human-readable message retrievable per thread.

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::ffi::{c_char, CStr};
use std::ptr;

use sparsify::graph::{Graph, Node, PairSet};
use sparsify::preserver::{self, PreserverParams};
use sparsify::spanner::{self, StandardParams};
use sparsify::{instances, io, verify, Error};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SparsifyStatus {
    Ok = 0,
    InvalidArgument = 1,
    NoPath = 2,
    ParseError = 3,
    IoError = 4,
    InternalError = 5,
    NullPointer = 6,
}

/// Opaque graph handle.
pub struct SparsifyGraph {
    inner: Graph,
}

/// A flat edge buffer: `len` edges as 2*len node ids. Free with
/// `sparsify_edges_free`.
#[repr(C)]
pub struct SparsifyEdges {
    pub nodes: *mut u32,
    pub len: usize,
    pub capacity: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(err: &Error) -> SparsifyStatus {
    match err {
        Error::InvalidArgument(_) => SparsifyStatus::InvalidArgument,
        Error::NoPath { .. } => SparsifyStatus::NoPath,
        Error::Parse { .. } => SparsifyStatus::ParseError,
        Error::Io(_) => SparsifyStatus::IoError,
        Error::Internal(_) => SparsifyStatus::InternalError,
    }
}

fn fail(err: Error) -> SparsifyStatus {
    let code = status_of(&err);
    set_error(err.to_string());
    code
}

/// Copies the last error message for the calling thread into `buf` (NUL
/// terminated, truncated to `cap`). Returns the full message length.
///
/// # Safety
/// `buf` must point to `cap` writable bytes, or be null (length query).
#[no_mangle]
pub unsafe extern "C" fn sparsify_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

fn emit_graph(out: *mut *mut SparsifyGraph, g: Graph) -> SparsifyStatus {
    if out.is_null() {
        set_error("null output pointer");
        return SparsifyStatus::NullPointer;
    }
    let handle = Box::new(SparsifyGraph { inner: g });
    unsafe { *out = Box::into_raw(handle) };
    SparsifyStatus::Ok
}

/// Parses an edge-list text ("u v" lines, '#' comments, optional "n <count>"
/// header) into a new graph handle.
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sparsify_graph_parse(
    text: *const c_char,
    out: *mut *mut SparsifyGraph,
) -> SparsifyStatus {
    if text.is_null() {
        set_error("null text pointer");
        return SparsifyStatus::NullPointer;
    }
    let s = match CStr::from_ptr(text).to_str() {
        Ok(s) => s,
        Err(_) => {
            set_error("edge list text is not valid UTF-8");
            return SparsifyStatus::ParseError;
        }
    };
    match io::parse_graph(s) {
        Ok(g) => emit_graph(out, g),
        Err(e) => fail(e),
    }
}

/// Seeded uniform random graph with exactly `m` edges.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sparsify_graph_random(
    n: usize,
    m: usize,
    seed: u64,
    out: *mut *mut SparsifyGraph,
) -> SparsifyStatus {
    match instances::random_graph(n, m, seed) {
        Ok(g) => emit_graph(out, g),
        Err(e) => fail(e),
    }
}

/// Frees a graph handle. Null is a no-op.
///
/// # Safety
/// `g` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sparsify_graph_free(g: *mut SparsifyGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn sparsify_graph_nodes(g: *const SparsifyGraph) -> usize {
    if g.is_null() {
        return 0;
    }
    (*g).inner.n()
}

/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn sparsify_graph_edges(g: *const SparsifyGraph) -> usize {
    if g.is_null() {
        return 0;
    }
    (*g).inner.m()
}

/// Hop distance; -1 when unreachable.
///
/// # Safety
/// `g` must be a live graph handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sparsify_graph_distance(
    g: *const SparsifyGraph,
    u: u32,
    v: u32,
    out: *mut i64,
) -> SparsifyStatus {
    if g.is_null() || out.is_null() {
        set_error("null pointer");
        return SparsifyStatus::NullPointer;
    }
    match (*g).inner.distance(u, v) {
        Ok(d) => {
            *out = d.finite().map_or(-1, |x| x as i64);
            SparsifyStatus::Ok
        }
        Err(e) => fail(e),
    }
}

fn emit_edges(out: *mut SparsifyEdges, edges: &BTreeSet<(Node, Node)>) -> SparsifyStatus {
    if out.is_null() {
        set_error("null output pointer");
        return SparsifyStatus::NullPointer;
    }
    let mut flat: Vec<u32> = Vec::with_capacity(edges.len() * 2);
    for &(u, v) in edges {
        flat.push(u);
        flat.push(v);
    }
    let len = edges.len();
    let capacity = flat.capacity();
    let nodes = flat.as_mut_ptr();
    std::mem::forget(flat);
    unsafe {
        (*out).nodes = nodes;
        (*out).len = len;
        (*out).capacity = capacity;
    }
    SparsifyStatus::Ok
}

/// Frees an edge buffer produced by this library. Null contents are a no-op.
///
/// # Safety
/// The buffer must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sparsify_edges_free(edges: *mut SparsifyEdges) {
    if edges.is_null() || (*edges).nodes.is_null() {
        return;
    }
    drop(Vec::from_raw_parts(
        (*edges).nodes,
        (*edges).len * 2,
        (*edges).capacity,
    ));
    (*edges).nodes = ptr::null_mut();
    (*edges).len = 0;
    (*edges).capacity = 0;
}

unsafe fn pairs_from_flat(flat: *const u32, count: usize, n: usize) -> Result<PairSet, Error> {
    if count > 0 && flat.is_null() {
        return Err(Error::invalid("null pair pointer"));
    }
    let slice = std::slice::from_raw_parts(flat, count * 2);
    let raw: Vec<(Node, Node)> = slice.chunks_exact(2).map(|c| (c[0], c[1])).collect();
    PairSet::new(&raw, n)
}

/// Union of canonical shortest paths over the demand pairs (2*pair_count ids
/// in `pairs`).
///
/// # Safety
/// `g` live handle; `pairs` holds 2*pair_count ids; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn sparsify_naive_preserver(
    g: *const SparsifyGraph,
    pairs: *const u32,
    pair_count: usize,
    out: *mut SparsifyEdges,
) -> SparsifyStatus {
    if g.is_null() {
        set_error("null graph handle");
        return SparsifyStatus::NullPointer;
    }
    let graph = &(*g).inner;
    let p = match pairs_from_flat(pairs, pair_count, graph.n()) {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    match preserver::naive_preserver(graph, &p) {
        Ok(pres) => emit_edges(out, &pres.edges),
        Err(e) => fail(e),
    }
}

/// Detection-based preserver. `epsilon < 0` selects the automatic threshold.
///
/// # Safety
/// As `sparsify_naive_preserver`.
#[no_mangle]
pub unsafe extern "C" fn sparsify_new_preserver(
    g: *const SparsifyGraph,
    pairs: *const u32,
    pair_count: usize,
    epsilon: f64,
    c_detect: f64,
    out: *mut SparsifyEdges,
) -> SparsifyStatus {
    if g.is_null() {
        set_error("null graph handle");
        return SparsifyStatus::NullPointer;
    }
    let graph = &(*g).inner;
    let p = match pairs_from_flat(pairs, pair_count, graph.n()) {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    let params = PreserverParams {
        epsilon: if epsilon < 0.0 { None } else { Some(epsilon) },
        c_detect,
        ..Default::default()
    };
    match preserver::new_preserver(graph, &p, &params) {
        Ok(pres) => emit_edges(out, &pres.edges),
        Err(e) => fail(e),
    }
}

/// Subset spanner over `node_count` subset nodes with additive budget n^d.
///
/// # Safety
/// `g` live handle; `nodes` holds node_count ids; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn sparsify_subset_spanner(
    g: *const SparsifyGraph,
    nodes: *const u32,
    node_count: usize,
    d: f64,
    out: *mut SparsifyEdges,
) -> SparsifyStatus {
    if g.is_null() || (node_count > 0 && nodes.is_null()) {
        set_error("null pointer");
        return SparsifyStatus::NullPointer;
    }
    let subset = std::slice::from_raw_parts(nodes, node_count);
    match spanner::subset_spanner(&(*g).inner, subset, d) {
        Ok(res) => emit_edges(out, &res.edges),
        Err(e) => fail(e),
    }
}

/// Standard additive spanner with budget 8 n^d.
///
/// # Safety
/// `g` live handle; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn sparsify_standard_spanner(
    g: *const SparsifyGraph,
    d: f64,
    a: f64,
    b: f64,
    seed: u64,
    out: *mut SparsifyEdges,
) -> SparsifyStatus {
    if g.is_null() {
        set_error("null graph handle");
        return SparsifyStatus::NullPointer;
    }
    let sp = match StandardParams::new(d, a, b, seed) {
        Ok(sp) => sp,
        Err(e) => return fail(e),
    };
    match spanner::standard_spanner(&(*g).inner, &sp) {
        Ok(res) => emit_edges(out, &res.edges),
        Err(e) => fail(e),
    }
}

/// Audits subgraph edges (2*edge_count ids) against the demands; writes the
/// maximum additive error and the violation count.
///
/// # Safety
/// `g` live handle; flat buffers sized as documented; outputs valid.
#[no_mangle]
pub unsafe extern "C" fn sparsify_verify(
    g: *const SparsifyGraph,
    h_edges: *const u32,
    edge_count: usize,
    pairs: *const u32,
    pair_count: usize,
    budget: f64,
    out_max_error: *mut u32,
    out_violations: *mut usize,
) -> SparsifyStatus {
    if g.is_null() || out_max_error.is_null() || out_violations.is_null() {
        set_error("null pointer");
        return SparsifyStatus::NullPointer;
    }
    if edge_count > 0 && h_edges.is_null() {
        set_error("null edge pointer");
        return SparsifyStatus::NullPointer;
    }
    let graph = &(*g).inner;
    let flat = std::slice::from_raw_parts(h_edges, edge_count * 2);
    let edges: BTreeSet<(Node, Node)> = flat
        .chunks_exact(2)
        .map(|c| sparsify::graph::norm_edge(c[0], c[1]))
        .collect();
    let p = match pairs_from_flat(pairs, pair_count, graph.n()) {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    match verify::verify(graph, &edges, &p, budget) {
        Ok(rep) => {
            *out_max_error = rep.max_additive_error;
            *out_violations = rep.violations.len();
            SparsifyStatus::Ok
        }
        Err(e) => fail(e),
    }
}
