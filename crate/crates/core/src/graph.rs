//! Undirected unweighted simple graphs, BFS machinery, metric balls, and the
//! canonical unique-shortest-path tiebreaking scheme.
//!
//! The canonical scheme assigns each edge a rank (its position in lexicographic
//! `(u, v)` order) and picks, among all hop-shortest paths, the one minimizing
//! total edge rank; residual ties are broken by the lexicographically smallest
//! descending-sorted rank sequence. The resulting path is unique for every
//! connected pair and the scheme is consistent: subpaths of canonical paths are
//! themselves canonical.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};

pub type Node = u32;

/// Distance from a BFS source. `Unreachable` is a distinct sentinel, never a
/// large integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dist {
    Finite(u32),
    Unreachable,
}

impl Dist {
    pub fn finite(self) -> Option<u32> {
        match self {
            Dist::Finite(d) => Some(d),
            Dist::Unreachable => None,
        }
    }

    pub fn is_reachable(self) -> bool {
        matches!(self, Dist::Finite(_))
    }
}

/// An undirected, unweighted simple graph on nodes `0..n`.
///
/// Immutable after construction; adjacency lists are kept sorted so neighbor
/// iteration order is deterministic. Safe to share for concurrent read-only
/// traversal.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    /// Sorted by (min, max) endpoint; the index of an edge here is its rank.
    edges: Vec<(Node, Node)>,
    adj: Vec<Vec<Node>>,
}

impl Graph {
    /// Builds a graph from an edge list. Rejects self-loops, duplicate edges,
    /// and endpoints `>= n`.
    pub fn new(n: usize, edge_list: &[(Node, Node)]) -> Result<Graph> {
        let mut edges: Vec<(Node, Node)> = Vec::with_capacity(edge_list.len());
        for &(u, v) in edge_list {
            if u as usize >= n || v as usize >= n {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) has endpoint out of range for n = {n}"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at node {u}")));
            }
            edges.push((u.min(v), u.max(v)));
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("duplicate edge in edge list"));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(Graph { n, edges, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges sorted by (min, max); the index of an edge is its rank.
    pub fn edges(&self) -> &[(Node, Node)] {
        &self.edges
    }

    pub fn neighbors(&self, v: Node) -> &[Node] {
        &self.adj[v as usize]
    }

    pub fn has_edge(&self, u: Node, v: Node) -> bool {
        self.edge_rank(u, v).is_some()
    }

    /// Rank of the edge {u, v}: its position in lexicographic (min, max) order.
    pub fn edge_rank(&self, u: Node, v: Node) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    fn check_node(&self, v: Node) -> Result<()> {
        if (v as usize) < self.n {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "node {v} out of range for n = {}",
                self.n
            )))
        }
    }

    /// Hop distances from `source` to every node.
    pub fn bfs_distances(&self, source: Node) -> Result<Vec<Dist>> {
        self.check_node(source)?;
        let mut dist = vec![Dist::Unreachable; self.n];
        dist[source as usize] = Dist::Finite(0);
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(source);
        while let Some(x) = queue.pop_front() {
            let dx = match dist[x as usize] {
                Dist::Finite(d) => d,
                Dist::Unreachable => unreachable!(),
            };
            for &y in self.neighbors(x) {
                if dist[y as usize] == Dist::Unreachable {
                    dist[y as usize] = Dist::Finite(dx + 1);
                    queue.push_back(y);
                }
            }
        }
        Ok(dist)
    }

    pub fn distance(&self, u: Node, v: Node) -> Result<Dist> {
        Ok(self.bfs_distances(u)?[v as usize])
    }

    /// The metric ball around `center`.
    pub fn ball(&self, center: Node, radius: u32, mode: BallMode) -> Result<Vec<Node>> {
        self.check_node(center)?;
        let dist = self.bfs_distances(center)?;
        let mut out = Vec::new();
        for (v, d) in dist.iter().enumerate() {
            if let Dist::Finite(d) = d {
                let keep = match mode {
                    BallMode::AtMost => *d <= radius,
                    BallMode::Below => *d < radius,
                    BallMode::Exact => *d == radius,
                };
                if keep {
                    out.push(v as Node);
                }
            }
        }
        Ok(out)
    }

    /// True iff `p` is a valid simple path in this graph whose length equals
    /// the hop distance between its endpoints.
    pub fn is_shortest_path(&self, p: &Path) -> bool {
        let nodes = p.nodes();
        if nodes.iter().any(|&v| v as usize >= self.n) {
            return false;
        }
        if nodes.windows(2).any(|w| !self.has_edge(w[0], w[1])) {
            return false;
        }
        let mut seen = vec![false; self.n];
        for &v in nodes {
            if seen[v as usize] {
                return false;
            }
            seen[v as usize] = true;
        }
        match self.distance(nodes[0], *nodes.last().unwrap()) {
            Ok(Dist::Finite(d)) => d as usize == nodes.len() - 1,
            _ => false,
        }
    }

    /// Canonical unique shortest path between `u` and `v`.
    ///
    /// Deterministic across runs, symmetric in the endpoints, and consistent:
    /// for any `w, x` on the returned path, `canonical_shortest_path(w, x)` is
    /// the exact contiguous segment between them.
    pub fn canonical_shortest_path(&self, u: Node, v: Node) -> Result<Path> {
        self.check_node(u)?;
        self.check_node(v)?;
        if u == v {
            return Path::new(vec![u]);
        }
        // Weighted distances under W(e) = BASE + rank(e). BASE dominates any
        // possible rank sum along a simple path, so W-shortest paths are
        // exactly the hop-shortest paths of minimum total rank.
        let base = (self.n as u64) * (self.m() as u64) + 1;
        let du = self.rank_dijkstra(u, base);
        let dv = self.rank_dijkstra(v, base);
        let total = du[v as usize];
        if total == u64::MAX {
            return Err(Error::NoPath { u, v });
        }

        // Tight edges: directed x -> y when the edge lies on a W-shortest
        // path in that direction.
        let mut tight: Vec<(usize, Node, Node)> = Vec::new(); // (rank, from, to)
        for (rank, &(x, y)) in self.edges.iter().enumerate() {
            let w = base + rank as u64;
            for (a, b) in [(x, y), (y, x)] {
                let (da, db) = (du[a as usize], dv[b as usize]);
                if da != u64::MAX && db != u64::MAX && da + w + db == total {
                    tight.push((rank, a, b));
                }
            }
        }
        // Prune from the largest rank down: drop any tight edge that is
        // avoidable, i.e. u still reaches v without it. What survives is the
        // unique path minimizing the descending-sorted rank sequence among
        // minimum-rank-sum shortest paths.
        tight.sort_unstable_by_key(|e| std::cmp::Reverse(e.0));
        let mut alive = vec![true; tight.len()];
        for i in 0..tight.len() {
            alive[i] = false;
            if !Self::dag_reaches(self.n, &tight, &alive, u, v) {
                alive[i] = true;
            }
        }
        // Walk the surviving edges from u.
        let mut next = vec![None; self.n];
        for (i, &(_, a, b)) in tight.iter().enumerate() {
            if alive[i] {
                debug_assert!(next[a as usize].is_none());
                next[a as usize] = Some(b);
            }
        }
        let mut nodes = vec![u];
        let mut cur = u;
        while cur != v {
            cur = next[cur as usize].ok_or_else(|| {
                Error::internal("canonical path pruning left a broken chain".to_string())
            })?;
            nodes.push(cur);
        }
        Path::new(nodes)
    }

    fn rank_dijkstra(&self, source: Node, base: u64) -> Vec<u64> {
        let mut dist = vec![u64::MAX; self.n];
        dist[source as usize] = 0;
        let mut heap = BinaryHeap::new();
        heap.push(std::cmp::Reverse((0u64, source)));
        while let Some(std::cmp::Reverse((d, x))) = heap.pop() {
            if d > dist[x as usize] {
                continue;
            }
            for &y in self.neighbors(x) {
                let rank = self.edge_rank(x, y).unwrap() as u64;
                let nd = d + base + rank;
                if nd < dist[y as usize] {
                    dist[y as usize] = nd;
                    heap.push(std::cmp::Reverse((nd, y)));
                }
            }
        }
        dist
    }

    fn dag_reaches(
        n: usize,
        tight: &[(usize, Node, Node)],
        alive: &[bool],
        u: Node,
        v: Node,
    ) -> bool {
        let mut adj = vec![Vec::new(); n];
        for (i, &(_, a, b)) in tight.iter().enumerate() {
            if alive[i] {
                adj[a as usize].push(b);
            }
        }
        let mut seen = vec![false; n];
        let mut stack = vec![u];
        seen[u as usize] = true;
        while let Some(x) = stack.pop() {
            if x == v {
                return true;
            }
            for &y in &adj[x as usize] {
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    stack.push(y);
                }
            }
        }
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallMode {
    /// `B<=(c, r)`
    AtMost,
    /// `B<(c, r)`
    Below,
    /// `B=(c, r)`
    Exact,
}

/// A simple path given by its node sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    nodes: Vec<Node>,
}

impl Path {
    pub fn new(nodes: Vec<Node>) -> Result<Path> {
        if nodes.is_empty() {
            return Err(Error::invalid("empty path"));
        }
        Ok(Path { nodes })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len_edges(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn first(&self) -> Node {
        self.nodes[0]
    }

    pub fn last(&self) -> Node {
        *self.nodes.last().unwrap()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Node, Node)> + '_ {
        self.nodes.windows(2).map(|w| norm_edge(w[0], w[1]))
    }

    pub fn reversed(&self) -> Path {
        let mut nodes = self.nodes.clone();
        nodes.reverse();
        Path { nodes }
    }

    pub fn position(&self, v: Node) -> Option<usize> {
        self.nodes.iter().position(|&x| x == v)
    }

    /// The contiguous segment from `from` to `to` (both must lie on the path,
    /// in order).
    pub fn segment(&self, from: usize, to: usize) -> Path {
        assert!(from <= to && to < self.nodes.len());
        Path {
            nodes: self.nodes[from..=to].to_vec(),
        }
    }
}

pub fn norm_edge(u: Node, v: Node) -> (Node, Node) {
    (u.min(v), u.max(v))
}

/// An ordered set of demand pairs, deduplicated up to orientation.
#[derive(Debug, Clone, Default)]
pub struct PairSet {
    pairs: Vec<(Node, Node)>,
}

impl PairSet {
    pub fn new(raw: &[(Node, Node)], n: usize) -> Result<PairSet> {
        let mut seen = std::collections::HashSet::new();
        let mut pairs = Vec::new();
        for &(u, v) in raw {
            if u as usize >= n || v as usize >= n {
                return Err(Error::invalid(format!(
                    "pair ({u}, {v}) has endpoint out of range for n = {n}"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("degenerate pair ({u}, {u})")));
            }
            if seen.insert(norm_edge(u, v)) {
                pairs.push((u, v));
            }
        }
        Ok(PairSet { pairs })
    }

    pub fn pairs(&self) -> &[(Node, Node)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}
