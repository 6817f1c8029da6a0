//! Branching-event accounting and the rerouting choke preserver.
//!
//! A path system stores one shortest path per pair, each oriented away from a
//! designated source end. Branching events are counted under the construction
//! orientation, which upper-bounds the minimum over all orientations. The
//! choke preserver takes a low-diameter hub set `S`, expands every demand pair
//! through its owning hub, and reroutes paths whenever a later hub's paths
//! enter an earlier path at too many distinct points.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::graph::{norm_edge, Dist, Graph, Node, PairSet, Path};

/// One stored path: the pair it serves, the path oriented from its source
/// end, and (for choke preservers) the hub that owns it.
#[derive(Debug, Clone)]
pub struct SystemPath {
    pub pair: (Node, Node),
    pub path: Path,
    pub owner: Option<Node>,
}

/// A set of stored shortest paths with per-path orientation, in insertion
/// order.
#[derive(Debug, Clone)]
pub struct OrientedPathSystem {
    n: usize,
    paths: Vec<SystemPath>,
}

/// Report of the branching-bound inequality `m <= n + ceil(sqrt(2 b n))`.
#[derive(Debug, Clone, Copy)]
pub struct BranchReport {
    pub m: usize,
    pub n: usize,
    pub b: u64,
    pub holds: bool,
}

impl OrientedPathSystem {
    pub fn new(n: usize) -> OrientedPathSystem {
        OrientedPathSystem {
            n,
            paths: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn paths(&self) -> &[SystemPath] {
        &self.paths
    }

    pub fn push(&mut self, pair: (Node, Node), path: Path, owner: Option<Node>) {
        self.paths.push(SystemPath { pair, path, owner });
    }

    /// Distinct undirected edges used by any stored path.
    pub fn union_edges(&self) -> BTreeSet<(Node, Node)> {
        self.paths
            .iter()
            .flat_map(|sp| sp.path.edges())
            .collect()
    }

    /// Directs each union edge with the orientation of the first path that
    /// introduced it; a later traversal in the reverse direction contributes
    /// one additional in-edge at the stored orientation's tail.
    fn oriented_indegrees(&self) -> HashMap<Node, u64> {
        let mut first_dir: HashMap<(Node, Node), (Node, Node)> = HashMap::new();
        let mut reversed: HashSet<(Node, Node)> = HashSet::new();
        for sp in &self.paths {
            for w in sp.path.nodes().windows(2) {
                let (x, y) = (w[0], w[1]);
                let key = norm_edge(x, y);
                match first_dir.get(&key) {
                    None => {
                        first_dir.insert(key, (x, y));
                    }
                    Some(&(a, _)) if a != x => {
                        reversed.insert(key);
                    }
                    Some(_) => {}
                }
            }
        }
        let mut indeg: HashMap<Node, u64> = HashMap::new();
        for (key, (tail, head)) in &first_dir {
            *indeg.entry(*head).or_insert(0) += 1;
            if reversed.contains(key) {
                *indeg.entry(*tail).or_insert(0) += 1;
            }
        }
        indeg
    }

    /// Sum over nodes of C(indeg, 2) under the construction orientation.
    pub fn branching_events(&self) -> u64 {
        self.oriented_indegrees()
            .values()
            .map(|&d| d * d.saturating_sub(1) / 2)
            .sum()
    }

    pub fn check_branch_size_bound(&self) -> BranchReport {
        let m = self.union_edges().len();
        let b = self.branching_events();
        let bound = self.n as u64 + ceil_sqrt(2 * b as u128 * self.n as u128);
        BranchReport {
            m,
            n: self.n,
            b,
            holds: m as u64 <= bound,
        }
    }
}

fn ceil_sqrt(x: u128) -> u64 {
    if x == 0 {
        return 0;
    }
    let mut r = (x as f64).sqrt() as u128;
    while r * r < x {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= x {
        r -= 1;
    }
    r as u64
}

/// Input to the choke preserver: a hub set of diameter at most `d` and a
/// demand set whose every pair has a shortest path through some hub.
#[derive(Debug, Clone)]
pub struct ChokeInput {
    pub s_nodes: Vec<Node>,
    pub diameter_bound: u32,
    pub pairs: PairSet,
}

impl ChokeInput {
    /// Checks both structural invariants against the host graph.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        if self.s_nodes.is_empty() {
            return Err(Error::invalid("choke input: empty hub set"));
        }
        let mut dist_from: BTreeMap<Node, Vec<Dist>> = BTreeMap::new();
        for &s in &self.s_nodes {
            dist_from.insert(s, g.bfs_distances(s)?);
        }
        for &s in &self.s_nodes {
            for &t in &self.s_nodes {
                match dist_from[&s][t as usize] {
                    Dist::Finite(d) if d <= self.diameter_bound => {}
                    _ => {
                        return Err(Error::invalid(format!(
                            "choke input: hubs {s} and {t} are more than {} apart",
                            self.diameter_bound
                        )))
                    }
                }
            }
        }
        for &(a, b) in self.pairs.pairs() {
            if self.find_owner(g, a, b)?.is_none() {
                return Err(Error::invalid(format!(
                    "choke input: pair ({a}, {b}) has no shortest path through the hub set"
                )));
            }
        }
        Ok(())
    }

    /// Smallest-id hub witnessing delta(a, s) + delta(s, b) = delta(a, b).
    fn find_owner(&self, g: &Graph, a: Node, b: Node) -> Result<Option<Node>> {
        let da = g.bfs_distances(a)?;
        let db = g.bfs_distances(b)?;
        let dab = match da[b as usize] {
            Dist::Finite(d) => d,
            Dist::Unreachable => return Ok(None),
        };
        let mut hubs: Vec<Node> = self.s_nodes.clone();
        hubs.sort_unstable();
        hubs.dedup();
        for s in hubs {
            if let (Dist::Finite(x), Dist::Finite(y)) = (da[s as usize], db[s as usize]) {
                if x + y == dab {
                    return Ok(Some(s));
                }
            }
        }
        Ok(None)
    }
}

/// Count of distinct nodes of `p` at which `owner`-owned paths enter `p`.
///
/// A node `x` of `p` is an entry point when some path owned by `owner`
/// reaches `x` over an edge that belongs neither to `p` nor to any path of an
/// earlier owner; those are exactly the edges first added on behalf of
/// `owner`.
fn entry_nodes(
    p: &Path,
    owner_paths: &[&Path],
    edges_before_owner: &HashSet<(Node, Node)>,
) -> Vec<(usize, Node)> {
    let p_edges: HashSet<(Node, Node)> = p.edges().collect();
    let pos_in_p: HashMap<Node, usize> = p
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    let mut found: BTreeSet<(usize, Node)> = BTreeSet::new();
    for q in owner_paths {
        let nodes = q.nodes();
        for idx in 1..nodes.len() {
            let x = nodes[idx];
            if let Some(&pos) = pos_in_p.get(&x) {
                let e = norm_edge(nodes[idx - 1], x);
                if !p_edges.contains(&e) && !edges_before_owner.contains(&e) {
                    found.insert((pos, x));
                }
            }
        }
    }
    found.into_iter().collect()
}

/// Full post-construction audit of the choke preserver invariants.
#[derive(Debug, Clone)]
pub struct ChokeAudit {
    pub all_paths_shortest: bool,
    pub max_entry_count: usize,
    /// (earlier pair, earlier owner, later owner, entry count) exceeding 2d+1.
    pub violations: Vec<((Node, Node), Node, Node, usize)>,
}

/// Recounts every (earlier-path, later-owner) entry set in `sys`.
pub fn audit_choke(g: &Graph, sys: &OrientedPathSystem, d: u32) -> ChokeAudit {
    let all_paths_shortest = sys.paths().iter().all(|sp| g.is_shortest_path(&sp.path));
    let limit = (2 * d + 1) as usize;
    let mut owners: Vec<Node> = sys.paths().iter().filter_map(|sp| sp.owner).collect();
    owners.sort_unstable();
    owners.dedup();
    let mut max_entry_count = 0;
    let mut violations = Vec::new();
    for &u in &owners {
        let edges_before: HashSet<(Node, Node)> = sys
            .paths()
            .iter()
            .filter(|sp| sp.owner.is_some_and(|o| o < u))
            .flat_map(|sp| sp.path.edges())
            .collect();
        let u_paths: Vec<&Path> = sys
            .paths()
            .iter()
            .filter(|sp| sp.owner == Some(u))
            .map(|sp| &sp.path)
            .collect();
        for sp in sys.paths() {
            let Some(v) = sp.owner else { continue };
            if v >= u {
                continue;
            }
            let count = entry_nodes(&sp.path, &u_paths, &edges_before).len();
            max_entry_count = max_entry_count.max(count);
            if count > limit {
                violations.push((sp.pair, v, u, count));
            }
        }
    }
    ChokeAudit {
        all_paths_shortest,
        max_entry_count,
        violations,
    }
}

/// Builds a path system for the expanded pair set of `input`, maintaining the
/// entry-count invariant by rerouting (a pigeonhole argument on distance
/// offsets).
pub fn choke_preserver(g: &Graph, input: &ChokeInput) -> Result<OrientedPathSystem> {
    input.validate(g)?;
    let d = input.diameter_bound;

    // Owner assignment, then expansion of (a, b) into (owner, a), (owner, b).
    let mut targets_by_owner: BTreeMap<Node, BTreeSet<Node>> = BTreeMap::new();
    for &(a, b) in input.pairs.pairs() {
        let owner = input
            .find_owner(g, a, b)?
            .ok_or_else(|| Error::invalid("choke input invariant lost"))?;
        for t in [a, b] {
            if t != owner {
                targets_by_owner.entry(owner).or_default().insert(t);
            }
        }
    }

    let mut sys = OrientedPathSystem::new(g.n());
    for (&u, targets) in &targets_by_owner {
        let edges_before: HashSet<(Node, Node)> = sys.union_edges().into_iter().collect();
        let dist_u = g.bfs_distances(u)?;
        for &t in targets {
            let path = g.canonical_shortest_path(u, t)?;
            sys.push((u, t), path, Some(u));
            enforce_entry_invariant(&mut sys, u, d, &dist_u, &edges_before)?;
        }
    }
    Ok(sys)
}

/// Reroutes paths of the current owner `u` until no earlier path has more
/// than 2d+1 entry points from `u`. Each reroute strictly decreases the total
/// entry count, which we assert for loop progress.
fn enforce_entry_invariant(
    sys: &mut OrientedPathSystem,
    u: Node,
    d: u32,
    dist_u: &[Dist],
    edges_before: &HashSet<(Node, Node)>,
) -> Result<()> {
    let limit = (2 * d + 1) as usize;
    let mut prev_total: Option<usize> = None;
    loop {
        let u_paths: Vec<(usize, Path)> = sys
            .paths
            .iter()
            .enumerate()
            .filter(|(_, sp)| sp.owner == Some(u))
            .map(|(i, sp)| (i, sp.path.clone()))
            .collect();
        let u_path_refs: Vec<&Path> = u_paths.iter().map(|(_, p)| p).collect();

        let mut total = 0usize;
        let mut violation: Option<(usize, Vec<(usize, Node)>)> = None;
        for (i, sp) in sys.paths.iter().enumerate() {
            let Some(v) = sp.owner else { continue };
            if v >= u {
                continue;
            }
            let entries = entry_nodes(&sp.path, &u_path_refs, edges_before);
            total += entries.len();
            if entries.len() > limit && violation.is_none() {
                violation = Some((i, entries));
            }
        }
        if let Some(prev) = prev_total {
            if total >= prev {
                return Err(Error::internal(
                    "choke rerouting made no progress on the entry count",
                ));
            }
        }
        let Some((p_idx, entries)) = violation else {
            return Ok(());
        };
        prev_total = Some(total);

        let p = sys.paths[p_idx].path.clone();
        // Offsets delta(u, v_j) - delta(v, v_j); the position of v_j in p is
        // its distance from the earlier owner v, because p starts at v.
        let offsets: Vec<i64> = entries
            .iter()
            .map(|&(pos, node)| {
                let du = dist_u[node as usize]
                    .finite()
                    .expect("entry node reachable from owner") as i64;
                du - pos as i64
            })
            .collect();
        let mut pigeon: Option<(usize, usize)> = None;
        'outer: for k in 1..entries.len() {
            for j in 0..k {
                if offsets[j] == offsets[k] {
                    pigeon = Some((j, k));
                    break 'outer;
                }
            }
        }
        let Some((j, k)) = pigeon else {
            return Err(Error::internal(
                "choke rerouting found no pigeonhole pair; input invariants must be violated",
            ));
        };
        let (pos_j, node_j) = entries[j];
        let (pos_k, node_k) = entries[k];

        // Donor: the first u-owned path entering p at v_j; its prefix up to
        // v_j is a shortest u-v_j path already present in the system.
        let p_edges: HashSet<(Node, Node)> = p.edges().collect();
        let enters_at = |q: &Path, node: Node| -> Option<usize> {
            let pos = q.position(node)?;
            if pos == 0 {
                return None;
            }
            let e = norm_edge(q.nodes()[pos - 1], node);
            (!p_edges.contains(&e) && !edges_before.contains(&e)).then_some(pos)
        };
        let donor_prefix: Vec<Node> = u_paths
            .iter()
            .find_map(|(_, q)| enters_at(q, node_j).map(|pos| q.nodes()[..=pos].to_vec()))
            .ok_or_else(|| Error::internal("entry node without an entering path"))?;

        for (sys_idx, q) in &u_paths {
            let Some(pos_q) = enters_at(q, node_k) else {
                continue;
            };
            let mut nodes = donor_prefix.clone();
            nodes.extend_from_slice(&p.nodes()[pos_j + 1..=pos_k]);
            nodes.extend_from_slice(&q.nodes()[pos_q + 1..]);
            if nodes.len() != q.nodes().len() {
                return Err(Error::internal("reroute changed a path's length"));
            }
            sys.paths[*sys_idx].path = Path::new(nodes)?;
        }
    }
}
