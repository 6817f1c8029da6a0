//! Padded-core clustering, small/large classification, choke-layer search,
//! pair budgets, and path decomposition.
//!
//! Each center v_i carries a core C_i = B<=(v_i, r_i) and a cluster
//! X_i = B<=(v_i, 2 r_i). Radii come from a per-node quadrupling loop that
//! stops once the ball stops growing by a log factor, so clusters stay light
//! while cores cover every node with r_i of padding around them.

use crate::error::{Error, Result};
use crate::graph::{BallMode, Graph, Node, Path};

#[derive(Debug, Clone)]
pub struct Clustering {
    pub base_radius: u32,
    pub centers: Vec<Node>,
    /// Core radius r_i per center; the cluster radius is 2 r_i.
    pub radii: Vec<u32>,
    pub cores: Vec<Vec<Node>>,
    pub clusters: Vec<Vec<Node>>,
    n: usize,
}

impl Clustering {
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Smallest index whose core contains v.
    pub fn core_index_of(&self, v: Node) -> Option<usize> {
        self.cores
            .iter()
            .position(|c| c.binary_search(&v).is_ok())
    }

    pub fn cluster_contains(&self, i: usize, v: Node) -> bool {
        self.clusters[i].binary_search(&v).is_ok()
    }

    pub fn cluster_sizes_total(&self) -> usize {
        self.clusters.iter().map(|x| x.len()).sum()
    }
}

fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        (n - 1).ilog2() + 1
    }
}

/// Exponent cap on the quadrupling loop: ceil(log n / log log n), logs base
/// 2, at least 1.
pub fn radius_growth_exponent(n: usize) -> u32 {
    if n <= 2 {
        return 1;
    }
    let l = (n as f64).log2();
    ((l / l.log2()).ceil() as u32).max(1)
}

fn per_node_radius(g: &Graph, v: Node, r: u32, log_factor: u64) -> Result<u32> {
    let dist = g.bfs_distances(v)?;
    let ball = |radius: u64| -> u64 {
        dist.iter()
            .filter(|d| d.finite().is_some_and(|x| x as u64 <= radius))
            .count() as u64
    };
    let mut r_v = r as u64;
    while ball(r_v) * log_factor < ball(4 * r_v) {
        r_v *= 4;
    }
    Ok(r_v.min(u32::MAX as u64) as u32)
}

/// Greedy padded-core clustering with base radius `r`. Every node ends up in
/// some core, cluster sizes sum to at most n ceil(log2 n) + n, and the
/// floor(r_i / 2)-balls around centers are pairwise disjoint.
pub fn build_clustering(g: &Graph, r: u32) -> Result<Clustering> {
    if r < 1 {
        return Err(Error::invalid("base radius must be at least 1"));
    }
    let n = g.n();
    if n == 0 {
        return Err(Error::invalid("clustering needs a nonempty graph"));
    }
    let log_factor = ceil_log2(n).max(1) as u64;

    let mut r_node = vec![0u32; n];
    for v in 0..n as Node {
        r_node[v as usize] = per_node_radius(g, v, r, log_factor)?;
    }
    let mut order: Vec<Node> = (0..n as Node).collect();
    order.sort_unstable_by_key(|&v| (std::cmp::Reverse(r_node[v as usize]), v));

    let mut deleted = vec![false; n];
    let mut centers = Vec::new();
    let mut radii = Vec::new();
    let mut cores = Vec::new();
    let mut clusters = Vec::new();
    for &v in &order {
        if deleted[v as usize] {
            continue;
        }
        let r_v = r_node[v as usize];
        let dist = g.bfs_distances(v)?;
        for u in 0..n as Node {
            if deleted[u as usize] || u == v {
                continue;
            }
            if let Some(d) = dist[u as usize].finite() {
                if d as u64 <= r_node[u as usize] as u64 + r_v as u64 {
                    deleted[u as usize] = true;
                }
            }
        }
        deleted[v as usize] = true;
        let r_i = 2 * r_v;
        let collect = |radius: u32| -> Vec<Node> {
            (0..n as Node)
                .filter(|&u| {
                    dist[u as usize]
                        .finite()
                        .is_some_and(|d| d <= radius)
                })
                .collect()
        };
        centers.push(v);
        radii.push(r_i);
        cores.push(collect(r_i));
        clusters.push(collect(2 * r_i));
    }
    Ok(Clustering {
        base_radius: r,
        centers,
        radii,
        cores,
        clusters,
        n,
    })
}

/// Checks every structural clustering invariant; errors name the first
/// violation.
pub fn audit_clustering(g: &Graph, cl: &Clustering) -> Result<()> {
    let n = g.n();
    let r = cl.base_radius;
    let cap = (r as u64) << (2 * radius_growth_exponent(n));
    let mut covered = vec![false; n];
    for (i, core) in cl.cores.iter().enumerate() {
        let r_i = cl.radii[i];
        if (r_i as u64) < r as u64 || r_i as u64 > cap {
            return Err(Error::internal(format!(
                "radius r_{i} = {r_i} outside [{r}, {cap}]"
            )));
        }
        for &v in core {
            covered[v as usize] = true;
        }
    }
    if let Some(v) = covered.iter().position(|c| !c) {
        return Err(Error::internal(format!("node {v} lies in no core")));
    }
    let budget = n * ceil_log2(n) as usize + n;
    let total = cl.cluster_sizes_total();
    if total > budget {
        return Err(Error::internal(format!(
            "cluster sizes sum to {total} > {budget}"
        )));
    }
    // Half-radius balls around centers must be pairwise disjoint.
    let mut owner = vec![usize::MAX; n];
    for (i, &c) in cl.centers.iter().enumerate() {
        for v in g.ball(c, cl.radii[i] / 2, BallMode::AtMost)? {
            if owner[v as usize] != usize::MAX {
                return Err(Error::internal(format!(
                    "half-radius balls of centers {} and {} share node {v}",
                    owner[v as usize], i
                )));
            }
            owner[v as usize] = i;
        }
    }
    Ok(())
}

/// Exponent knobs shared by the clustering thresholds and the spanner
/// formulas.
#[derive(Debug, Clone, Copy)]
pub struct BoundParams {
    pub a: f64,
    pub b: f64,
    pub d: f64,
    pub e: f64,
    pub c_large: f64,
    pub c_choke: f64,
    pub c_heavy: f64,
}

impl BoundParams {
    pub fn new(a: f64, b: f64, d: f64, e: f64) -> Result<BoundParams> {
        let p = BoundParams {
            a,
            b,
            d,
            e,
            c_large: 1.0,
            c_choke: 1.0,
            c_heavy: 1.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if 2.0 * self.b + self.a - 1.0 <= 0.0 {
            return Err(Error::invalid("need 2b + a - 1 > 0"));
        }
        if self.e <= 0.0 {
            return Err(Error::invalid("density target must be positive"));
        }
        if self.d < 0.0 {
            return Err(Error::invalid("error exponent must be nonnegative"));
        }
        if self.c_large <= 0.0 || self.c_choke <= 0.0 || self.c_heavy <= 0.0 {
            return Err(Error::invalid("tuning constants must be positive"));
        }
        Ok(())
    }

    fn denom(&self) -> f64 {
        2.0 * self.b + self.a - 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClusterClass {
    Small,
    Large,
}

/// Threshold |X| >= c_large r^{2b/(2b+a-1)} E^{1/(2b+a-1)}.
pub fn classify_cluster(x_size: usize, r: u32, p: &BoundParams) -> ClusterClass {
    let threshold = p.c_large
        * (r as f64).powf(2.0 * p.b / p.denom())
        * p.e.powf(1.0 / p.denom());
    if x_size as f64 >= threshold {
        ClusterClass::Large
    } else {
        ClusterClass::Small
    }
}

/// The radius in (r_i, 2 r_i] minimizing |B<=|^a (|B=|^2)^b / |B<|, with the
/// achieved ratio. The ratio bound against c_choke E is the caller's
/// diagnostic; the argmin itself is always well defined.
pub fn find_choke_layer(
    g: &Graph,
    center: Node,
    r_i: u32,
    p: &BoundParams,
) -> Result<(u32, f64)> {
    if r_i < 1 {
        return Err(Error::invalid("choke-layer search needs r_i >= 1"));
    }
    let dist = g.bfs_distances(center)?;
    let count = |pred: &dyn Fn(u32) -> bool| -> usize {
        dist.iter()
            .filter(|d| d.finite().is_some_and(pred))
            .count()
    };
    let mut best: Option<(u32, f64)> = None;
    for rb in r_i + 1..=2 * r_i {
        let le = count(&|x| x <= rb) as f64;
        let eq = count(&|x| x == rb) as f64;
        let lt = count(&|x| x < rb) as f64;
        let ratio = le.powf(p.a) * (eq * eq).powf(p.b) / lt;
        match best {
            Some((_, r0)) if r0 <= ratio => {}
            _ => best = Some((rb, ratio)),
        }
    }
    Ok(best.expect("range (r_i, 2 r_i] is nonempty for r_i >= 1"))
}

/// Pair budget floor(c_large r^{2(1-a)/(2b+a-1)} E^{2/(2b+a-1)}), at least 1.
pub fn large_pair_budget(r: u32, p: &BoundParams) -> usize {
    let v = p.c_large
        * (r as f64).powf(2.0 * (1.0 - p.a) / p.denom())
        * p.e.powf(2.0 / p.denom());
    (v.floor() as usize).max(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubpathClass {
    Extreme,
    Small,
    Large,
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    /// Consecutive subpaths share their boundary node.
    pub subpaths: Vec<(Path, SubpathClass, usize)>,
    pub pair: (Node, Node),
}

impl Decomposition {
    /// True iff gluing the subpaths at shared boundary nodes reproduces
    /// `path`.
    pub fn concatenates_to(&self, path: &Path) -> bool {
        let mut glued: Vec<Node> = Vec::new();
        for (sp, _, _) in &self.subpaths {
            let nodes = sp.nodes();
            if glued.is_empty() {
                glued.extend_from_slice(nodes);
            } else {
                if glued.last() != nodes.first() {
                    return false;
                }
                glued.extend_from_slice(&nodes[1..]);
            }
        }
        glued == path.nodes()
    }
}

/// Splits a shortest path into cluster-attributed subpaths. A small-cluster
/// subpath runs to the first node outside the core; a large-cluster subpath
/// runs to the last node whose segment stays inside the cluster. Subpaths
/// whose cluster contains an endpoint of the original pair are extreme.
pub fn decompose_path(
    g: &Graph,
    path: &Path,
    cl: &Clustering,
    labels: &[ClusterClass],
) -> Result<Decomposition> {
    if labels.len() != cl.len() {
        return Err(Error::invalid("one label per cluster required"));
    }
    if !g.is_shortest_path(path) {
        return Err(Error::invalid("decompose_path expects a shortest path"));
    }
    let nodes = path.nodes();
    let pair = (path.first(), path.last());
    let mut subpaths = Vec::new();
    let mut start = 0usize;
    while start + 1 < nodes.len() || (nodes.len() == 1 && subpaths.is_empty()) {
        let x = nodes[start];
        let i = cl.core_index_of(x).ok_or_else(|| {
            Error::internal(format!("node {x} lies in no core of the clustering"))
        })?;
        let end = match labels[i] {
            ClusterClass::Small => {
                // Up to the first node outside the core, inclusive.
                let mut e = start;
                while e + 1 < nodes.len() {
                    e += 1;
                    if cl.cores[i].binary_search(&nodes[e]).is_err() {
                        break;
                    }
                }
                e
            }
            ClusterClass::Large => {
                // Last node whose whole segment from x stays inside X_i.
                let mut e = start;
                while e + 1 < nodes.len() && cl.cluster_contains(i, nodes[e + 1]) {
                    e += 1;
                }
                e
            }
        };
        if end == start {
            if nodes.len() == 1 {
                subpaths.push((path.clone(), class_for(cl, labels, i, pair), i));
                break;
            }
            return Err(Error::internal(format!(
                "decomposition made no progress at node {x}"
            )));
        }
        subpaths.push((path.segment(start, end), class_for(cl, labels, i, pair), i));
        start = end;
    }
    Ok(Decomposition { subpaths, pair })
}

fn class_for(
    cl: &Clustering,
    labels: &[ClusterClass],
    i: usize,
    pair: (Node, Node),
) -> SubpathClass {
    if cl.cluster_contains(i, pair.0) || cl.cluster_contains(i, pair.1) {
        SubpathClass::Extreme
    } else {
        match labels[i] {
            ClusterClass::Small => SubpathClass::Small,
            ClusterClass::Large => SubpathClass::Large,
        }
    }
}

/// Labels every cluster of `cl` by size against the large threshold.
pub fn label_clusters(cl: &Clustering, p: &BoundParams) -> Vec<ClusterClass> {
    cl.clusters
        .iter()
        .map(|x| classify_cluster(x.len(), cl.base_radius, p))
        .collect()
}
