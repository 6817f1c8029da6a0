//! Spanner constructions: greedy multiplicative spanner, subset spanner
//! (multiplicative base plus path patching over a node subset), and the
//! standard additive spanner that patches only path prefixes and suffixes
//! near a random sample, leaving the middle to the subset spanner on the
//! sample.

use std::collections::{BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clustering::{BoundParams, Clustering, SubpathClass};
use crate::error::{Error, Result};
use crate::graph::{norm_edge, Graph, Node, Path};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpannerKind {
    Multiplicative,
    Subset,
    Standard,
}

/// One fired patch: the pair, its canonical path, which path edges were
/// absent beforehand, and which of those this patch added.
#[derive(Debug, Clone)]
pub struct PathAddition {
    pub pair: (Node, Node),
    pub path: Path,
    pub missing_before: Vec<(Node, Node)>,
    pub added_edges: Vec<(Node, Node)>,
}

#[derive(Debug, Clone)]
pub struct SpannerResult {
    pub n: usize,
    pub kind: SpannerKind,
    pub edges: BTreeSet<(Node, Node)>,
    pub beta_target: f64,
    pub mult_edges: usize,
    pub subset_edges: usize,
    pub path_edges: usize,
    pub additions: Vec<PathAddition>,
}

impl SpannerResult {
    pub fn size(&self) -> usize {
        self.edges.len()
    }
}

/// Odd stretch t = max(3, 2 ceil(log2 n / 2) - 1), so t <= log2 n + 1.
pub fn log_stretch(n: usize) -> u32 {
    let t = 2 * ((n.max(2) as f64).log2() / 2.0).ceil() as u32;
    (t - 1).max(3)
}

struct Work {
    adj: Vec<Vec<Node>>,
    edges: BTreeSet<(Node, Node)>,
}

impl Work {
    fn new(n: usize) -> Work {
        Work {
            adj: vec![Vec::new(); n],
            edges: BTreeSet::new(),
        }
    }

    fn insert(&mut self, u: Node, v: Node) -> bool {
        if !self.edges.insert(norm_edge(u, v)) {
            return false;
        }
        self.adj[u as usize].push(v);
        self.adj[v as usize].push(u);
        true
    }

    fn bfs(&self, source: Node) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.adj.len()];
        dist[source as usize] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x as usize] {
                if dist[y as usize] == u32::MAX {
                    dist[y as usize] = dist[x as usize] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Distance if it is <= cap, None otherwise.
    fn dist_bounded(&self, u: Node, v: Node, cap: u32) -> Option<u32> {
        if u == v {
            return Some(0);
        }
        let mut dist = vec![u32::MAX; self.adj.len()];
        dist[u as usize] = 0;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            if dist[x as usize] >= cap {
                return None;
            }
            for &y in &self.adj[x as usize] {
                if dist[y as usize] == u32::MAX {
                    if y == v {
                        return Some(dist[x as usize] + 1);
                    }
                    dist[y as usize] = dist[x as usize] + 1;
                    queue.push_back(y);
                }
            }
        }
        None
    }
}

/// Greedy t-spanner: an edge joins H unless H already connects its endpoints
/// within t hops. H has girth > t + 1.
pub fn multiplicative_spanner(g: &Graph, t: u32) -> Result<SpannerResult> {
    if t < 1 {
        return Err(Error::invalid("stretch must be at least 1"));
    }
    let mut work = Work::new(g.n());
    for &(u, v) in g.edges() {
        if work.dist_bounded(u, v, t).is_none() {
            work.insert(u, v);
        }
    }
    let m = work.edges.len();
    Ok(SpannerResult {
        n: g.n(),
        kind: SpannerKind::Multiplicative,
        edges: work.edges,
        beta_target: 0.0,
        mult_edges: m,
        subset_edges: 0,
        path_edges: 0,
        additions: Vec::new(),
    })
}

fn add_path_segment(
    work: &mut Work,
    path: &Path,
    from: usize,
    to: usize,
    added: &mut Vec<(Node, Node)>,
) {
    let nodes = path.nodes();
    for w in from..to {
        let (u, v) = (nodes[w], nodes[w + 1]);
        if work.insert(u, v) {
            added.push(norm_edge(u, v));
        }
    }
}

fn missing_on(work: &Work, path: &Path) -> Vec<(Node, Node)> {
    path.edges()
        .filter(|e| !work.edges.contains(e))
        .collect()
}

/// Subset spanner over `s`: start from the log-stretch greedy spanner, then
/// for each subset pair in lexicographic order add the canonical path when
/// the additive error exceeds n^d.
pub fn subset_spanner(g: &Graph, s: &[Node], d: f64) -> Result<SpannerResult> {
    if d < 0.0 {
        return Err(Error::invalid("error exponent must be nonnegative"));
    }
    let n = g.n();
    let mut subset: Vec<Node> = s.to_vec();
    subset.sort_unstable();
    subset.dedup();
    if subset.iter().any(|&v| (v as usize) >= n) {
        return Err(Error::invalid("subset node out of range"));
    }

    let base = multiplicative_spanner(g, log_stretch(n))?;
    let mult_edges = base.edges.len();
    let mut work = Work::new(n);
    for &(u, v) in &base.edges {
        work.insert(u, v);
    }

    let threshold = (n as f64).powf(d);
    let mut additions = Vec::new();
    for (i, &s1) in subset.iter().enumerate() {
        if subset.len() <= i + 1 {
            break;
        }
        let dg = g.bfs_distances(s1)?;
        let mut dh = work.bfs(s1);
        for &s2 in &subset[i + 1..] {
            let Some(exact) = dg[s2 as usize].finite() else {
                continue;
            };
            let cur = dh[s2 as usize];
            let err = if cur == u32::MAX {
                f64::INFINITY
            } else {
                (cur - exact) as f64
            };
            if err > threshold {
                let path = g.canonical_shortest_path(s1, s2)?;
                let missing_before = missing_on(&work, &path);
                let mut added = Vec::new();
                add_path_segment(&mut work, &path, 0, path.len_edges(), &mut added);
                additions.push(PathAddition {
                    pair: (s1, s2),
                    path,
                    missing_before,
                    added_edges: added,
                });
                dh = work.bfs(s1);
            }
        }
    }
    let subset_edges = work.edges.len() - mult_edges;
    Ok(SpannerResult {
        n,
        kind: SpannerKind::Subset,
        edges: work.edges,
        beta_target: threshold,
        mult_edges,
        subset_edges,
        path_edges: 0,
        additions,
    })
}

/// Derived knobs of the standard construction.
#[derive(Debug, Clone, Copy)]
pub struct StandardParams {
    pub d: f64,
    pub a: f64,
    pub b: f64,
    pub c_sample: f64,
    pub c_err: f64,
    pub seed: u64,
}

impl StandardParams {
    pub fn new(d: f64, a: f64, b: f64, seed: u64) -> Result<StandardParams> {
        let p = StandardParams {
            d,
            a,
            b,
            c_sample: 2.0,
            c_err: 8.0,
            seed,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 0.0 {
            return Err(Error::invalid("error exponent must be nonnegative"));
        }
        if 2.0 * self.b + self.a - 1.0 <= 0.0 {
            return Err(Error::invalid("need 2b + a - 1 > 0"));
        }
        if self.c_sample <= 0.0 || self.c_err <= 0.0 {
            return Err(Error::invalid("tuning constants must be positive"));
        }
        Ok(())
    }

    /// E = n^{(a+2b-1)/(a+2b+1) - d(10b-a+1)/(3(a+2b+1))}.
    pub fn density_target(&self, n: usize) -> f64 {
        let (a, b, d) = (self.a, self.b, self.d);
        let exp = (a + 2.0 * b - 1.0) / (a + 2.0 * b + 1.0)
            - d * (10.0 * b - a + 1.0) / (3.0 * (a + 2.0 * b + 1.0));
        (n as f64).powf(exp)
    }

    /// ceil(c_sample log2 n n^{1 - d(2b-a+1)/(2b+a-1)} / E^{(3-2b-a)/(2b+a-1)}),
    /// clamped to [1, n].
    pub fn sample_size(&self, n: usize) -> usize {
        let (a, b, d) = (self.a, self.b, self.d);
        let nf = n as f64;
        let e = self.density_target(n);
        let num = self.c_sample
            * nf.log2().max(1.0)
            * nf.powf(1.0 - d * (2.0 * b - a + 1.0) / (2.0 * b + a - 1.0));
        let den = e.powf((3.0 - 2.0 * b - a) / (2.0 * b + a - 1.0));
        ((num / den).ceil() as usize).clamp(1, n)
    }
}

fn sample_nodes(n: usize, k: usize, seed: u64) -> Vec<Node> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ids: Vec<Node> = (0..n as Node).collect();
    for i in 0..k.min(n) {
        let j = rng.gen_range(i..n);
        ids.swap(i, j);
    }
    let mut out = ids[..k.min(n)].to_vec();
    out.sort_unstable();
    out
}

fn multi_source_distances(g: &Graph, sources: &[Node]) -> Vec<u32> {
    let mut dist = vec![u32::MAX; g.n()];
    let mut queue = VecDeque::new();
    for &s in sources {
        dist[s as usize] = 0;
        queue.push_back(s);
    }
    while let Some(x) = queue.pop_front() {
        for &y in g.neighbors(x) {
            if dist[y as usize] == u32::MAX {
                dist[y as usize] = dist[x as usize] + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Standard additive spanner with error budget c_err n^d over all pairs.
/// Starts from a subset spanner on a random sample S; any over-budget pair
/// gets its canonical path patched up to the first and last nodes near S
/// (or the whole path if none is near).
pub fn standard_spanner(g: &Graph, sp: &StandardParams) -> Result<SpannerResult> {
    sp.validate()?;
    let n = g.n();
    if n < 2 {
        return Err(Error::invalid("standard spanner needs n >= 2"));
    }
    let sample = sample_nodes(n, sp.sample_size(n), sp.seed);
    let base = subset_spanner(g, &sample, sp.d)?;
    let (mult_edges, subset_edges) = (base.mult_edges, base.subset_edges);
    let mut additions = base.additions;
    let mut work = Work::new(n);
    for &(u, v) in &base.edges {
        work.insert(u, v);
    }

    let nf = n as f64;
    let budget = sp.c_err * nf.powf(sp.d);
    let near_cap = nf.powf(sp.d) / nf.log2().max(1.0);
    let dist_to_s = multi_source_distances(g, &sample);
    let near = |v: Node| -> bool {
        let d = dist_to_s[v as usize];
        d != u32::MAX && (d as f64) <= near_cap
    };

    for u in 0..n as Node {
        let dg = g.bfs_distances(u)?;
        let mut dh = work.bfs(u);
        for v in u + 1..n as Node {
            let Some(exact) = dg[v as usize].finite() else {
                continue;
            };
            let cur = dh[v as usize];
            let err = if cur == u32::MAX {
                f64::INFINITY
            } else {
                (cur - exact) as f64
            };
            if err <= budget {
                continue;
            }
            let path = g.canonical_shortest_path(u, v)?;
            let nodes = path.nodes();
            let missing_before = missing_on(&work, &path);
            let mut added = Vec::new();
            let first_near = nodes.iter().position(|&x| near(x));
            match first_near {
                Some(iu) => {
                    let iv = nodes.iter().rposition(|&x| near(x)).unwrap();
                    add_path_segment(&mut work, &path, 0, iu, &mut added);
                    add_path_segment(&mut work, &path, iv, path.len_edges(), &mut added);
                }
                None => {
                    add_path_segment(&mut work, &path, 0, path.len_edges(), &mut added);
                }
            }
            additions.push(PathAddition {
                pair: (u, v),
                path,
                missing_before,
                added_edges: added,
            });
            dh = work.bfs(u);
        }
    }
    let path_edges = work.edges.len() - mult_edges - subset_edges;
    Ok(SpannerResult {
        n,
        kind: SpannerKind::Standard,
        edges: work.edges,
        beta_target: budget,
        mult_edges,
        subset_edges,
        path_edges,
        additions,
    })
}

/// Per-class counts of patched edges. Extreme + small + large equals the
/// total added across all patches; heavy + light equals large.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassStats {
    pub extreme: usize,
    pub small: usize,
    pub large: usize,
    pub heavy: usize,
    pub light: usize,
}

impl ClassStats {
    pub fn total(&self) -> usize {
        self.extreme + self.small + self.large
    }
}

/// Attributes every patched edge to the class of the decomposed subpath that
/// first added it. Large subpaths are heavy when their missing-edge count
/// reaches c_heavy |X|^{(b+a-1)/b} E^{(b-1)/b}.
pub fn classify_added_edges(
    g: &Graph,
    result: &SpannerResult,
    cl: &Clustering,
    p: &BoundParams,
) -> Result<ClassStats> {
    if result.kind != SpannerKind::Multiplicative && result.additions.is_empty() {
        let patched = result.subset_edges + result.path_edges;
        if patched > 0 {
            return Err(Error::invalid(
                "spanner result has patched edges but no addition log",
            ));
        }
    }
    let labels = crate::clustering::label_clusters(cl, p);
    let mut stats = ClassStats::default();
    for add in &result.additions {
        if add.added_edges.is_empty() {
            continue;
        }
        let dec = crate::clustering::decompose_path(g, &add.path, cl, &labels)?;
        let missing: BTreeSet<(Node, Node)> = add.missing_before.iter().copied().collect();
        let added: BTreeSet<(Node, Node)> = add.added_edges.iter().copied().collect();
        for (sub, class, idx) in &dec.subpaths {
            let added_here = sub.edges().filter(|e| added.contains(e)).count();
            if added_here == 0 {
                continue;
            }
            match class {
                SubpathClass::Extreme => stats.extreme += added_here,
                SubpathClass::Small => stats.small += added_here,
                SubpathClass::Large => {
                    stats.large += added_here;
                    let x = cl.clusters[*idx].len() as f64;
                    let threshold = p.c_heavy
                        * x.powf((p.b + p.a - 1.0) / p.b)
                        * p.e.powf((p.b - 1.0) / p.b);
                    let missing_here = sub.edges().filter(|e| missing.contains(e)).count();
                    if missing_here as f64 >= threshold {
                        stats.heavy += added_here;
                    } else {
                        stats.light += added_here;
                    }
                }
            }
        }
    }
    Ok(stats)
}

/// Count of path edges absent from `h_edges`.
pub fn missing_edges(h_edges: &BTreeSet<(Node, Node)>, path: &Path) -> usize {
    path.edges().filter(|e| !h_edges.contains(e)).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::build_clustering;
    use crate::graph::PairSet;
    use crate::instances;
    use crate::verify;

    fn all_pairs(n: usize) -> PairSet {
        let mut raw = Vec::new();
        for u in 0..n as Node {
            for v in u + 1..n as Node {
                raw.push((u, v));
            }
        }
        PairSet::new(&raw, n).unwrap()
    }

    fn girth_above(g: &Graph, edges: &BTreeSet<(Node, Node)>, t: u32) -> bool {
        // A cycle of length <= t + 1 exists iff removing an edge leaves its
        // endpoints within t hops.
        let mut work = Work::new(g.n());
        for &(u, v) in edges {
            work.insert(u, v);
        }
        for &(u, v) in edges {
            let mut probe = Work::new(g.n());
            for &e in edges {
                if e != (u, v) {
                    probe.insert(e.0, e.1);
                }
            }
            if probe.dist_bounded(u, v, t).is_some() {
                return false;
            }
        }
        true
    }

    #[test]
    fn tree_input_is_kept_whole() {
        let edges: Vec<_> = (1..10u32).map(|v| ((v - 1) / 2, v)).collect();
        let g = Graph::new(10, &edges).unwrap();
        let sp = multiplicative_spanner(&g, 5).unwrap();
        assert_eq!(sp.edges.len(), 9);
    }

    #[test]
    fn four_cycle_with_stretch_one_keeps_all() {
        let g = Graph::new(4, &[(0, 1), (0, 3), (1, 2), (2, 3)]).unwrap();
        let sp = multiplicative_spanner(&g, 1).unwrap();
        assert_eq!(sp.edges.len(), 4);
    }

    #[test]
    fn k5_stretch_three_properties() {
        let mut edges = Vec::new();
        for u in 0..5u32 {
            for v in u + 1..5 {
                edges.push((u, v));
            }
        }
        let g = Graph::new(5, &edges).unwrap();
        let sp = multiplicative_spanner(&g, 3).unwrap();
        assert!(girth_above(&g, &sp.edges, 4 - 1));
        let h = verify::subgraph(&g, &sp.edges).unwrap();
        for &(u, v) in g.edges() {
            let d = h.distance(u, v).unwrap().finite().unwrap();
            assert!(d <= 3);
        }
    }

    #[test]
    fn multiplicative_stretch_holds_globally() {
        let g = instances::random_graph(60, 200, 5).unwrap();
        let t = log_stretch(60);
        let sp = multiplicative_spanner(&g, t).unwrap();
        let rep = verify::verify(&g, &sp.edges, &all_pairs(60), f64::INFINITY).unwrap();
        assert!(rep.max_multiplicative_stretch <= t as f64);
    }

    #[test]
    fn empty_subset_is_just_the_base() {
        let g = instances::random_graph(40, 120, 1).unwrap();
        let sp = subset_spanner(&g, &[], 0.3).unwrap();
        let base = multiplicative_spanner(&g, log_stretch(40)).unwrap();
        assert_eq!(sp.edges, base.edges);
        assert!(sp.additions.is_empty());
    }

    #[test]
    fn huge_budget_never_fires() {
        let g = instances::grid_graph(6, 6).unwrap();
        let s: Vec<Node> = (0..36).collect();
        // n^d >= diameter * stretch makes the trigger unsatisfiable.
        let sp = subset_spanner(&g, &s, 3.0).unwrap();
        assert!(sp.additions.is_empty());
    }

    #[test]
    fn subset_error_certificate_on_grid() {
        let g = instances::grid_graph(10, 10).unwrap();
        let s: Vec<Node> = vec![0, 9, 90, 99, 4, 40, 59, 95];
        let d = 0.3;
        let sp = subset_spanner(&g, &s, d).unwrap();
        let mut raw = Vec::new();
        for (i, &a) in s.iter().enumerate() {
            for &b in &s[i + 1..] {
                raw.push((a, b));
            }
        }
        let pairs = PairSet::new(&raw, 100).unwrap();
        let rep = verify::verify(&g, &sp.edges, &pairs, (100f64).powf(d)).unwrap();
        assert!(rep.passed(), "violations: {:?}", rep.violations);
    }

    #[test]
    fn standard_params_formulas() {
        let sp = StandardParams::new(0.3, 2.0 / 3.0, 2.0 / 3.0, 1).unwrap();
        let n = 1024usize;
        let e = sp.density_target(n);
        assert!((e - (n as f64).powf(0.1)).abs() < 1e-9);
        // 2 * log2(1024) * 1024^{0.4} = 320, up to one unit of ceil slack
        // from the floating-point exponent arithmetic.
        let got = sp.sample_size(n);
        assert!((got as f64 - 320.0).abs() <= 1.0, "got {got}");
    }

    #[test]
    fn standard_error_certificate() {
        let g = instances::random_graph(120, 360, 21).unwrap();
        let sp = StandardParams::new(0.3, 2.0 / 3.0, 2.0 / 3.0, 9).unwrap();
        let res = standard_spanner(&g, &sp).unwrap();
        let rep = verify::verify(&g, &res.edges, &all_pairs(120), res.beta_target).unwrap();
        assert!(rep.passed(), "violations: {:?}", rep.violations);
    }

    #[test]
    fn full_sample_needs_no_endpoint_patches() {
        let g = instances::grid_graph(5, 5).unwrap();
        let sp = StandardParams {
            c_sample: 1e9,
            ..StandardParams::new(0.2, 2.0 / 3.0, 2.0 / 3.0, 3).unwrap()
        };
        assert_eq!(sp.sample_size(25), 25);
        let res = standard_spanner(&g, &sp).unwrap();
        // With S = V, x_u = u and x_v = v: prefixes and suffixes are single
        // nodes, so any new edges come from the subset phase alone.
        assert_eq!(res.path_edges, 0);
    }

    #[test]
    fn classification_conserves_added_edges() {
        let g = instances::grid_graph(10, 10).unwrap();
        let s: Vec<Node> = vec![0, 9, 90, 99, 44, 55];
        let res = subset_spanner(&g, &s, 0.2).unwrap();
        let cl = build_clustering(&g, 1).unwrap();
        let p = BoundParams::new(2.0 / 3.0, 2.0 / 3.0, 0.2, 2.0).unwrap();
        let stats = classify_added_edges(&g, &res, &cl, &p).unwrap();
        let total_added: usize = res.additions.iter().map(|a| a.added_edges.len()).sum();
        assert_eq!(stats.total(), total_added);
        assert_eq!(stats.heavy + stats.light, stats.large);
    }

    #[test]
    fn no_additions_means_zero_stats() {
        let g = instances::grid_graph(6, 6).unwrap();
        let res = subset_spanner(&g, &[], 0.3).unwrap();
        let cl = build_clustering(&g, 1).unwrap();
        let p = BoundParams::new(2.0 / 3.0, 2.0 / 3.0, 0.3, 2.0).unwrap();
        let stats = classify_added_edges(&g, &res, &cl, &p).unwrap();
        assert_eq!(stats, ClassStats::default());
    }

    #[test]
    fn missing_edges_counts() {
        let g = instances::grid_graph(4, 4).unwrap();
        let path = g.canonical_shortest_path(0, 15).unwrap();
        assert_eq!(missing_edges(&BTreeSet::new(), &path), path.len_edges());
        let full: BTreeSet<_> = g.edges().iter().copied().collect();
        assert_eq!(missing_edges(&full, &path), 0);
        let sp = multiplicative_spanner(&g, 3).unwrap();
        let brute = path.edges().filter(|e| !sp.edges.contains(e)).count();
        assert_eq!(missing_edges(&sp.edges, &path), brute);
    }

    #[test]
    fn determinism_same_seed_same_edges() {
        let g = instances::random_graph(80, 240, 13).unwrap();
        let sp = StandardParams::new(0.25, 2.0 / 3.0, 2.0 / 3.0, 77).unwrap();
        let a = standard_spanner(&g, &sp).unwrap();
        let b = standard_spanner(&g, &sp).unwrap();
        assert_eq!(a.edges, b.edges);
    }
}
