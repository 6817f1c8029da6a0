//! Instance generators: layered lower-bound graphs with their modular path
//! scheme, random and grid families, and seeded pair-set sampling.
//!
//! All randomized generators use ChaCha8 seeded from the caller's 64-bit
//! seed; the same seed always yields the same bytes.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, Node, PairSet, Path};

/// Layered graph: `layers` layers of `q` nodes, complete bipartite between
/// consecutive layers, with one modular scheme path per first-layer ×
/// last-layer pair. Node id = layer * q + index.
#[derive(Debug, Clone)]
pub struct LayeredInstance {
    pub q: u32,
    pub layers: u32,
    pub graph: Graph,
    pub pairs: PairSet,
    pub scheme_paths: BTreeMap<(Node, Node), Path>,
}

pub fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn mod_inverse(x: u64, q: u64) -> Option<u64> {
    // q is prime, so x^(q-2) mod q when x != 0 mod q.
    let x = x % q;
    if x == 0 {
        return None;
    }
    let mut result = 1u64;
    let mut base = x;
    let mut e = q - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % q;
        }
        base = base * base % q;
        e >>= 1;
    }
    Some(result)
}

/// The lower-bound family: `layers` layers of width `q` (prime), with the
/// modular scheme path for every first-layer × last-layer pair. Width must be
/// prime so that any two scheme paths intersect on at most one node. For
/// `layers = q` the per-layer step for pair (i, j) is `(i - j) mod q`; in
/// general it is `(j - i) (layers-1)^{-1} mod q`, which requires `layers - 1`
/// to be invertible mod q.
pub fn layered_graph(q: u32, layers: u32) -> Result<LayeredInstance> {
    if !is_prime(q) {
        return Err(Error::invalid(format!("layer width {q} is not prime")));
    }
    if layers < 2 {
        return Err(Error::invalid("need at least 2 layers"));
    }
    let step_scale = mod_inverse((layers as u64 - 1) % q as u64, q as u64).ok_or_else(|| {
        Error::invalid(format!(
            "layers - 1 = {} is divisible by q = {q}; the modular scheme cannot hit its endpoint",
            layers - 1
        ))
    })?;
    let n = (q * layers) as usize;
    let node = |layer: u32, idx: u32| -> Node { layer * q + (idx % q) };
    let mut edges = Vec::with_capacity((q * q * (layers - 1)) as usize);
    for layer in 0..layers - 1 {
        for a in 0..q {
            for b in 0..q {
                edges.push((node(layer, a), node(layer + 1, b)));
            }
        }
    }
    let graph = Graph::new(n, &edges)?;

    let mut raw_pairs = Vec::with_capacity((q * q) as usize);
    let mut scheme_paths = BTreeMap::new();
    for i in 0..q {
        for j in 0..q {
            let u = node(0, i);
            let v = node(layers - 1, j);
            raw_pairs.push((u, v));
            let diff = (j as u64 + q as u64 - i as u64) % q as u64;
            let step = (diff * step_scale % q as u64) as u32;
            let mut nodes = Vec::with_capacity(layers as usize);
            let mut k = i;
            for layer in 0..layers {
                nodes.push(node(layer, k));
                k = (k + step) % q;
            }
            debug_assert_eq!(*nodes.last().unwrap(), v);
            scheme_paths.insert((u, v), Path::new(nodes)?);
        }
    }
    Ok(LayeredInstance {
        q,
        layers,
        graph,
        pairs: PairSet::new(&raw_pairs, n)?,
        scheme_paths,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct LayeredAuditReport {
    pub pairwise_node_overlap_max: usize,
    pub edge_disjoint: bool,
    pub union_edges: usize,
}

/// Exhaustive pairwise audit of the scheme paths: maximum node overlap
/// between distinct paths, edge-disjointness, and the union size.
pub fn audit_layered(inst: &LayeredInstance) -> LayeredAuditReport {
    let paths: Vec<&Path> = inst.scheme_paths.values().collect();
    let mut overlap_max = 0;
    for (i, p) in paths.iter().enumerate() {
        let nodes: std::collections::HashSet<Node> = p.nodes().iter().copied().collect();
        for q in &paths[i + 1..] {
            let shared = q.nodes().iter().filter(|v| nodes.contains(v)).count();
            overlap_max = overlap_max.max(shared);
        }
    }
    let mut union = std::collections::HashSet::new();
    let mut edge_disjoint = true;
    let mut total = 0usize;
    for p in &paths {
        for e in p.edges() {
            total += 1;
            if !union.insert(e) {
                edge_disjoint = false;
            }
        }
    }
    let _ = total;
    LayeredAuditReport {
        pairwise_node_overlap_max: overlap_max,
        edge_disjoint,
        union_edges: union.len(),
    }
}

/// Uniform random simple graph with exactly `m` edges, deterministic for a
/// fixed seed.
pub fn random_graph(n: usize, m: usize, seed: u64) -> Result<Graph> {
    let total = n * n.saturating_sub(1) / 2;
    if m > total {
        return Err(Error::invalid(format!(
            "m = {m} exceeds the {total} possible edges on {n} nodes"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Partial Fisher-Yates over edge indices.
    let mut indices: Vec<usize> = (0..total).collect();
    for i in 0..m {
        let j = rng.gen_range(i..total);
        indices.swap(i, j);
    }
    let edges: Vec<(Node, Node)> = indices[..m].iter().map(|&idx| decode_edge(n, idx)).collect();
    Graph::new(n, &edges)
}

fn decode_edge(n: usize, idx: usize) -> (Node, Node) {
    // Row u covers indices [offset(u), offset(u) + n - 1 - u).
    let mut u = 0usize;
    let mut offset = 0usize;
    loop {
        let row = n - 1 - u;
        if idx < offset + row {
            return (u as Node, (u + 1 + idx - offset) as Node);
        }
        offset += row;
        u += 1;
    }
}

/// `w x h` grid with 2wh - w - h edges; node id = row * w + col.
pub fn grid_graph(w: usize, h: usize) -> Result<Graph> {
    if w == 0 || h == 0 {
        return Err(Error::invalid("grid dimensions must be positive"));
    }
    let node = |x: usize, y: usize| (y * w + x) as Node;
    let mut edges = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if x + 1 < w {
                edges.push((node(x, y), node(x + 1, y)));
            }
            if y + 1 < h {
                edges.push((node(x, y), node(x, y + 1)));
            }
        }
    }
    Graph::new(w * h, &edges)
}

/// `k` distinct connected pairs, sampled uniformly with a fixed seed. Never
/// returns a cross-component pair.
pub fn random_pairs(g: &Graph, k: usize, seed: u64) -> Result<PairSet> {
    let mut comp = vec![usize::MAX; g.n()];
    let mut c = 0usize;
    for start in 0..g.n() as Node {
        if comp[start as usize] != usize::MAX {
            continue;
        }
        for (v, d) in g.bfs_distances(start)?.iter().enumerate() {
            if d.is_reachable() {
                comp[v] = c;
            }
        }
        c += 1;
    }
    let mut candidates: Vec<(Node, Node)> = Vec::new();
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            if comp[u] == comp[v] {
                candidates.push((u as Node, v as Node));
            }
        }
    }
    if k > candidates.len() {
        return Err(Error::invalid(format!(
            "requested {k} pairs but only {} connected pairs exist",
            candidates.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..k {
        let j = rng.gen_range(i..candidates.len());
        candidates.swap(i, j);
    }
    PairSet::new(&candidates[..k], g.n())
}
