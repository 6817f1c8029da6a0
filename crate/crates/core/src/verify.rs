//! Brute-force verification oracle: exact BFS on host and subgraph for every
//! demand, plus an independent bidirectional BFS used for spot checks.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::graph::{Dist, Graph, Node, PairSet};

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub demand_count: usize,
    pub max_additive_error: u32,
    pub max_multiplicative_stretch: f64,
    /// (u, v, distance in G, distance in H) for every demand over budget.
    pub violations: Vec<(Node, Node, Dist, Dist)>,
    pub runtime: Duration,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Builds the subgraph of `g` spanned by `edges` on the same node set.
pub fn subgraph(g: &Graph, edges: &BTreeSet<(Node, Node)>) -> Result<Graph> {
    for &(u, v) in edges {
        if !g.has_edge(u, v) {
            return Err(Error::invalid(format!(
                "subgraph edge ({u}, {v}) is not an edge of the host graph"
            )));
        }
    }
    let list: Vec<(Node, Node)> = edges.iter().copied().collect();
    Graph::new(g.n(), &list)
}

/// Exact BFS audit of every demand against an additive budget. A pair
/// reachable in G but not in H always violates.
pub fn verify(
    g: &Graph,
    h_edges: &BTreeSet<(Node, Node)>,
    demands: &PairSet,
    budget_beta: f64,
) -> Result<VerifyReport> {
    let start = Instant::now();
    let h = subgraph(g, h_edges)?;

    let mut by_source: BTreeMap<Node, Vec<Node>> = BTreeMap::new();
    for &(u, v) in demands.pairs() {
        by_source.entry(u).or_default().push(v);
    }
    let mut max_add = 0u32;
    let mut max_stretch = 1.0f64;
    let mut violations = Vec::new();
    for (&u, targets) in &by_source {
        let dg = g.bfs_distances(u)?;
        let dh = h.bfs_distances(u)?;
        for &v in targets {
            let in_g = dg[v as usize];
            let in_h = dh[v as usize];
            match (in_g.finite(), in_h.finite()) {
                (None, _) => {}
                (Some(_), None) => violations.push((u, v, in_g, in_h)),
                (Some(a), Some(b)) => {
                    let err = b.saturating_sub(a);
                    max_add = max_add.max(err);
                    if a > 0 {
                        max_stretch = max_stretch.max(b as f64 / a as f64);
                    }
                    if (err as f64) > budget_beta {
                        violations.push((u, v, in_g, in_h));
                    }
                }
            }
        }
    }
    Ok(VerifyReport {
        demand_count: demands.len(),
        max_additive_error: max_add,
        max_multiplicative_stretch: max_stretch,
        violations,
        runtime: start.elapsed(),
    })
}

/// Largest δ_H − δ_G over the pairs; unreachable-in-H counts as an error.
pub fn max_additive_error(g: &Graph, h: &Graph, pairs: &PairSet) -> Result<u32> {
    let mut worst = 0u32;
    let mut by_source: BTreeMap<Node, Vec<Node>> = BTreeMap::new();
    for &(u, v) in pairs.pairs() {
        by_source.entry(u).or_default().push(v);
    }
    for (&u, targets) in &by_source {
        let dg = g.bfs_distances(u)?;
        let dh = h.bfs_distances(u)?;
        for &v in targets {
            match (dg[v as usize].finite(), dh[v as usize].finite()) {
                (None, _) => {}
                (Some(_), None) => return Err(Error::NoPath { u, v }),
                (Some(a), Some(b)) => worst = worst.max(b.saturating_sub(a)),
            }
        }
    }
    Ok(worst)
}

/// Independent distance oracle: BFS grown from both endpoints a level at a
/// time until the frontiers meet.
pub fn bidirectional_distance(g: &Graph, u: Node, v: Node) -> Result<Dist> {
    let n = g.n();
    if (u as usize) >= n || (v as usize) >= n {
        return Err(Error::invalid("endpoint out of range"));
    }
    if u == v {
        return Ok(Dist::Finite(0));
    }
    let mut dist_u = vec![u32::MAX; n];
    let mut dist_v = vec![u32::MAX; n];
    dist_u[u as usize] = 0;
    dist_v[v as usize] = 0;
    let mut frontier_u = VecDeque::from([u]);
    let mut frontier_v = VecDeque::from([v]);
    let mut depth_u = 0u32;
    let mut depth_v = 0u32;
    let mut best = u32::MAX;
    while !frontier_u.is_empty() && !frontier_v.is_empty() {
        if depth_u + depth_v >= best {
            break;
        }
        // Expand the smaller frontier one full level.
        let expand_u = frontier_u.len() <= frontier_v.len();
        let (frontier, dist, other, depth) = if expand_u {
            (&mut frontier_u, &mut dist_u, &dist_v, &mut depth_u)
        } else {
            (&mut frontier_v, &mut dist_v, &dist_u, &mut depth_v)
        };
        let mut next = VecDeque::new();
        while let Some(x) = frontier.pop_front() {
            for &y in g.neighbors(x) {
                if dist[y as usize] == u32::MAX {
                    dist[y as usize] = *depth + 1;
                    if other[y as usize] != u32::MAX {
                        best = best.min(dist[y as usize] + other[y as usize]);
                    }
                    next.push_back(y);
                }
            }
        }
        *frontier = next;
        *depth += 1;
    }
    if best == u32::MAX {
        Ok(Dist::Unreachable)
    } else {
        Ok(Dist::Finite(best))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;

    fn edge_set(g: &Graph) -> BTreeSet<(Node, Node)> {
        g.edges().iter().copied().collect()
    }

    #[test]
    fn identity_subgraph_has_zero_error() {
        let g = instances::random_graph(30, 90, 2).unwrap();
        let pairs = instances::random_pairs(&g, 40, 3).unwrap();
        let rep = verify(&g, &edge_set(&g), &pairs, 0.0).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.max_additive_error, 0);
        assert_eq!(rep.demand_count, 40);
    }

    #[test]
    fn spanning_tree_of_k4_has_error_one() {
        let mut edges = Vec::new();
        for u in 0..4u32 {
            for v in u + 1..4 {
                edges.push((u, v));
            }
        }
        let g = Graph::new(4, &edges).unwrap();
        let star: BTreeSet<_> = [(0, 1), (0, 2), (0, 3)].into_iter().collect();
        let pairs = PairSet::new(&edges, 4).unwrap();
        let rep = verify(&g, &star, &pairs, 1.0).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.max_additive_error, 1);
        let strict = verify(&g, &star, &pairs, 0.0).unwrap();
        assert_eq!(strict.violations.len(), 3);
    }

    #[test]
    fn rejects_foreign_edges() {
        let g = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let bogus: BTreeSet<_> = [(0, 2)].into_iter().collect();
        let p = PairSet::new(&[(0, 2)], 3).unwrap();
        assert!(verify(&g, &bogus, &p, 0.0).is_err());
    }

    #[test]
    fn unreachable_in_subgraph_is_a_violation() {
        let g = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let partial: BTreeSet<_> = [(0, 1)].into_iter().collect();
        let p = PairSet::new(&[(0, 2)], 3).unwrap();
        let rep = verify(&g, &partial, &p, 100.0).unwrap();
        assert_eq!(rep.violations.len(), 1);
    }

    #[test]
    fn bidirectional_agrees_with_bfs() {
        for seed in [1, 2, 3] {
            let g = instances::random_graph(60, 100, seed).unwrap();
            for u in 0..10 {
                let d = g.bfs_distances(u).unwrap();
                for v in 0..g.n() as Node {
                    assert_eq!(bidirectional_distance(&g, u, v).unwrap(), d[v as usize]);
                }
            }
        }
    }

    #[test]
    fn bidirectional_handles_disconnection() {
        let g = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(bidirectional_distance(&g, 0, 3).unwrap(), Dist::Unreachable);
        assert_eq!(bidirectional_distance(&g, 2, 2).unwrap(), Dist::Finite(0));
    }
}
