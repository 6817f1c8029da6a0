//! Pairwise distance preservers.
//!
//! `naive_preserver` takes the union of canonical shortest paths. The richer
//! construction watches per-node path-through counters while inserting paths:
//! when a low-diameter witness set near some node accumulates enough distinct
//! paths, those paths are pulled out into an auxiliary choke preserver and
//! the process continues on the survivors.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{Graph, Node, PairSet, Path};
use crate::tiebreak::{choke_preserver, ChokeInput, OrientedPathSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Provenance {
    Naive,
    Leftover,
    Auxiliary(usize),
}

/// An auxiliary choke preserver extracted by one detection round.
#[derive(Debug, Clone)]
pub struct AuxiliaryPreserver {
    pub witness_set: Vec<Node>,
    pub removed_pairs: PairSet,
    pub system: OrientedPathSystem,
}

/// A distance-preserving subgraph for a pair set.
#[derive(Debug, Clone)]
pub struct Preserver {
    n: usize,
    pub pairs: PairSet,
    pub edges: BTreeSet<(Node, Node)>,
    pub provenance: BTreeMap<(Node, Node), Provenance>,
    /// Paths that were never pulled into an auxiliary preserver.
    pub leftover_system: OrientedPathSystem,
    pub auxiliaries: Vec<AuxiliaryPreserver>,
}

impl Preserver {
    pub fn n(&self) -> usize {
        self.n
    }

    /// The preserver as a standalone graph on the host's node set.
    pub fn subgraph(&self) -> Graph {
        let edges: Vec<(Node, Node)> = self.edges.iter().copied().collect();
        Graph::new(self.n, &edges).expect("preserver edges come from a valid host graph")
    }

    /// Branching events of all stored paths under the construction
    /// orientation.
    pub fn branching_events(&self) -> u64 {
        self.combined_system().branching_events()
    }

    pub fn combined_system(&self) -> OrientedPathSystem {
        let mut sys = OrientedPathSystem::new(self.n);
        for sp in self.leftover_system.paths() {
            sys.push(sp.pair, sp.path.clone(), sp.owner);
        }
        for aux in &self.auxiliaries {
            for sp in aux.system.paths() {
                sys.push(sp.pair, sp.path.clone(), sp.owner);
            }
        }
        sys
    }

    pub fn provenance_histogram(&self) -> BTreeMap<Provenance, usize> {
        let mut hist = BTreeMap::new();
        for p in self.provenance.values() {
            *hist.entry(*p).or_insert(0) += 1;
        }
        hist
    }
}

/// Parameters for the detection-based construction.
#[derive(Debug, Clone, Copy)]
pub struct PreserverParams {
    pub a: f64,
    pub b: f64,
    /// Threshold exponent; `None` selects it from |P| and n.
    pub epsilon: Option<f64>,
    pub c_detect: f64,
}

impl Default for PreserverParams {
    fn default() -> Self {
        PreserverParams {
            a: 2.0 / 3.0,
            b: 2.0 / 3.0,
            epsilon: None,
            c_detect: 1.0,
        }
    }
}

impl PreserverParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.a <= 1.0 && self.b > 0.0 && self.b <= 1.0) {
            return Err(Error::invalid("exponents a, b must lie in (0, 1]"));
        }
        if let Some(e) = self.epsilon {
            if !(0.0..=1.0).contains(&e) {
                return Err(Error::invalid("epsilon must lie in [0, 1]"));
            }
        }
        if self.c_detect <= 0.0 {
            return Err(Error::invalid("c_detect must be positive"));
        }
        Ok(())
    }

    /// The value of n^epsilon: explicit, or |P|^{1/3} when |P| <= n and
    /// |P|^{2/3} / n^{1/3} otherwise.
    pub fn n_eps(&self, n: usize, p_count: usize) -> f64 {
        match self.epsilon {
            Some(e) => (n as f64).powf(e),
            None => {
                let p = p_count as f64;
                if p_count <= n {
                    p.powf(1.0 / 3.0)
                } else {
                    p.powf(2.0 / 3.0) / (n as f64).powf(1.0 / 3.0)
                }
            }
        }
    }
}

/// Union of the canonical shortest paths, one per pair.
pub fn naive_preserver(g: &Graph, pairs: &PairSet) -> Result<Preserver> {
    let mut sys = OrientedPathSystem::new(g.n());
    for &(u, v) in pairs.pairs() {
        let path = g.canonical_shortest_path(u, v)?;
        sys.push((u, v), path, None);
    }
    finish_naive(g, pairs.clone(), sys, Provenance::Naive)
}

/// Union of caller-supplied shortest paths (e.g. a layered instance's modular
/// scheme). Every supplied path must be shortest in `g`.
pub fn scheme_preserver(
    g: &Graph,
    pairs: &PairSet,
    scheme: &BTreeMap<(Node, Node), Path>,
) -> Result<Preserver> {
    let mut sys = OrientedPathSystem::new(g.n());
    for &(u, v) in pairs.pairs() {
        let path = scheme
            .get(&(u, v))
            .or_else(|| scheme.get(&(v, u)))
            .ok_or_else(|| Error::invalid(format!("scheme has no path for pair ({u}, {v})")))?;
        if !g.is_shortest_path(path) {
            return Err(Error::invalid(format!(
                "scheme path for ({u}, {v}) is not a shortest path"
            )));
        }
        sys.push((u, v), path.clone(), None);
    }
    finish_naive(g, pairs.clone(), sys, Provenance::Naive)
}

fn finish_naive(
    g: &Graph,
    pairs: PairSet,
    sys: OrientedPathSystem,
    tag: Provenance,
) -> Result<Preserver> {
    let edges = sys.union_edges();
    let provenance = edges.iter().map(|&e| (e, tag)).collect();
    Ok(Preserver {
        n: g.n(),
        pairs,
        edges,
        provenance,
        leftover_system: sys,
        auxiliaries: Vec::new(),
    })
}

struct DetectionState {
    /// Surviving path per insertion id; `None` once extracted.
    records: Vec<Option<((Node, Node), Path)>>,
    /// Surviving path ids through each node.
    through: Vec<BTreeSet<usize>>,
}

impl DetectionState {
    fn insert(&mut self, pair: (Node, Node), path: Path) -> usize {
        let id = self.records.len();
        for &v in path.nodes() {
            self.through[v as usize].insert(id);
        }
        self.records.push(Some((pair, path)));
        id
    }

    fn remove(&mut self, id: usize) -> ((Node, Node), Path) {
        let (pair, path) = self.records[id].take().expect("removing a live path");
        for &v in path.nodes() {
            self.through[v as usize].remove(&id);
        }
        (pair, path)
    }
}

/// Detection-based preserver: exact on every pair, with edges split between
/// one leftover preserver and zero or more auxiliary choke preservers.
pub fn new_preserver(g: &Graph, pairs: &PairSet, params: &PreserverParams) -> Result<Preserver> {
    params.validate()?;
    let n = g.n();
    let x = params.n_eps(n, pairs.len());
    let witness_size = ((params.c_detect * x).ceil() as usize).max(1);
    let fire_threshold = (params.c_detect * x * x).max(1.0);
    let remove_count = ((params.c_detect * x * x).floor() as usize).max(1);

    let mut state = DetectionState {
        records: Vec::new(),
        through: vec![BTreeSet::new(); n],
    };
    let mut auxiliaries = Vec::new();

    for &(u, v) in pairs.pairs() {
        let path = g.canonical_shortest_path(u, v)?;
        state.insert((u, v), path);

        // Repeat detection until no node qualifies; counters track only
        // surviving paths, so a node may fire more than once.
        while let Some((witness_set, victim_ids)) =
            detect(g, &state, witness_size, fire_threshold, remove_count)
        {
            let mut removed_pairs = Vec::new();
            for id in victim_ids {
                let (pair, _path) = state.remove(id);
                removed_pairs.push(pair);
            }
            let removed = PairSet::new(&removed_pairs, n)?;
            let input = ChokeInput {
                s_nodes: witness_set.clone(),
                diameter_bound: 2,
                pairs: removed.clone(),
            };
            let system = choke_preserver(g, &input)?;
            auxiliaries.push(AuxiliaryPreserver {
                witness_set,
                removed_pairs: removed,
                system,
            });
        }
    }

    let mut leftover_system = OrientedPathSystem::new(n);
    for rec in state.records.iter().flatten() {
        leftover_system.push(rec.0, rec.1.clone(), None);
    }

    let mut edges: BTreeSet<(Node, Node)> = leftover_system.union_edges();
    let mut provenance: BTreeMap<(Node, Node), Provenance> = edges
        .iter()
        .map(|&e| (e, Provenance::Leftover))
        .collect();
    for (k, aux) in auxiliaries.iter().enumerate() {
        for e in aux.system.union_edges() {
            edges.insert(e);
            provenance.entry(e).or_insert(Provenance::Auxiliary(k));
        }
    }

    Ok(Preserver {
        n,
        pairs: pairs.clone(),
        edges,
        provenance,
        leftover_system,
        auxiliaries,
    })
}

/// One detection scan: a node fires when the top `witness_size` path-through
/// counters over its closed neighborhood sum to the threshold. Returns the
/// greedy witness set and the earliest-inserted paths through it.
fn detect(
    g: &Graph,
    state: &DetectionState,
    witness_size: usize,
    fire_threshold: f64,
    remove_count: usize,
) -> Option<(Vec<Node>, Vec<usize>)> {
    for u in 0..g.n() as Node {
        let mut hood: Vec<Node> = vec![u];
        hood.extend_from_slice(g.neighbors(u));
        // Top counters, ties broken by ascending node id.
        hood.sort_unstable_by_key(|&w| {
            (std::cmp::Reverse(state.through[w as usize].len()), w)
        });
        hood.truncate(witness_size);
        hood.retain(|&w| !state.through[w as usize].is_empty());
        if hood.is_empty() {
            continue;
        }
        let sum: usize = hood.iter().map(|&w| state.through[w as usize].len()).sum();
        if (sum as f64) < fire_threshold {
            continue;
        }
        let mut distinct: BTreeSet<usize> = BTreeSet::new();
        for &w in &hood {
            distinct.extend(state.through[w as usize].iter().copied());
        }
        // Insertion ids ascend with insertion time, so the smallest ids are
        // the earliest-inserted paths.
        let victims: Vec<usize> = distinct.into_iter().take(remove_count).collect();
        let mut witness: Vec<Node> = hood;
        witness.sort_unstable();
        return Some((witness, victims));
    }
    None
}

/// The size formula c * (n^a * |P|^b + n).
pub fn preserver_size_bound(n: usize, p_count: usize, a: f64, b: f64, c: f64) -> f64 {
    c * ((n as f64).powf(a) * (p_count as f64).powf(b) + n as f64)
}

/// The (a, b) regime with the best known bound for the given |P|.
pub fn regime_for(n: usize, p_count: usize) -> (f64, f64) {
    let nf = n as f64;
    let p = p_count as f64;
    if p <= nf.powf(0.75) {
        (0.5, 1.0)
    } else if p <= nf {
        (1.0, 1.0 / 3.0)
    } else {
        (2.0 / 3.0, 2.0 / 3.0)
    }
}

/// Soft diagnostic: leftover edge count against 4 n^{1+eps} + n.
pub fn leftover_bound(n: usize, n_eps: f64) -> f64 {
    4.0 * n as f64 * n_eps + n as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use crate::verify::max_additive_error;

    fn exactness(g: &Graph, pres: &Preserver) {
        let h = pres.subgraph();
        let err = max_additive_error(g, &h, &pres.pairs).unwrap();
        assert_eq!(err, 0, "preserver must be exact on its pair set");
    }

    #[test]
    fn naive_on_path_graph() {
        let n = 8;
        let edges: Vec<_> = (0..n as Node - 1).map(|i| (i, i + 1)).collect();
        let g = Graph::new(n, &edges).unwrap();
        let p = PairSet::new(&[(0, n as Node - 1)], n).unwrap();
        let pres = naive_preserver(&g, &p).unwrap();
        assert_eq!(pres.edges.len(), n - 1);
        exactness(&g, &pres);
    }

    #[test]
    fn naive_on_k4_keeps_every_edge() {
        let mut edges = Vec::new();
        for u in 0..4u32 {
            for v in u + 1..4 {
                edges.push((u, v));
            }
        }
        let g = Graph::new(4, &edges).unwrap();
        let all_pairs = PairSet::new(&edges, 4).unwrap();
        let pres = naive_preserver(&g, &all_pairs).unwrap();
        assert_eq!(pres.edges.len(), 6);
    }

    #[test]
    fn naive_reports_disconnected_pair() {
        let g = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        let p = PairSet::new(&[(0, 2)], 4).unwrap();
        assert!(matches!(
            naive_preserver(&g, &p),
            Err(Error::NoPath { u: 0, v: 2 })
        ));
    }

    #[test]
    fn scheme_preserver_on_layered_q5() {
        let inst = instances::layered_graph(5, 5).unwrap();
        let pres = scheme_preserver(&inst.graph, &inst.pairs, &inst.scheme_paths).unwrap();
        assert_eq!(pres.edges.len(), 25 * 4);
        exactness(&inst.graph, &pres);
    }

    #[test]
    fn new_preserver_degenerate_threshold_matches_naive() {
        let g = instances::random_graph(40, 120, 7).unwrap();
        let pairs = instances::random_pairs(&g, 30, 8).unwrap();
        let naive = naive_preserver(&g, &pairs).unwrap();
        let params = PreserverParams {
            epsilon: Some(1.0),
            ..Default::default()
        };
        let new = new_preserver(&g, &pairs, &params).unwrap();
        assert!(new.auxiliaries.is_empty());
        assert_eq!(new.edges, naive.edges);
    }

    #[test]
    fn new_preserver_fires_on_star() {
        // Star with center 0: every leaf pair routes through the center.
        let n = 20;
        let edges: Vec<_> = (1..n as Node).map(|l| (0, l)).collect();
        let g = Graph::new(n, &edges).unwrap();
        let mut raw = Vec::new();
        for u in 1..n as Node {
            for v in u + 1..n as Node {
                raw.push((u, v));
            }
        }
        let pairs = PairSet::new(&raw, n).unwrap();
        let params = PreserverParams {
            epsilon: Some(0.3),
            c_detect: 1.0,
            ..Default::default()
        };
        let pres = new_preserver(&g, &pairs, &params).unwrap();
        assert!(!pres.auxiliaries.is_empty(), "detection must fire at the hub");
        // Auxiliary edges are star edges incident to leaves of removed pairs.
        for aux in &pres.auxiliaries {
            let mut used: BTreeSet<Node> = BTreeSet::new();
            for &(a, b) in aux.removed_pairs.pairs() {
                used.insert(a);
                used.insert(b);
            }
            for (x, y) in aux.system.union_edges() {
                assert_eq!(x, 0);
                assert!(used.contains(&y));
            }
        }
        exactness(&g, &pres);
    }

    #[test]
    fn new_preserver_exact_on_random_instance() {
        let g = instances::random_graph(100, 400, 11).unwrap();
        let pairs = instances::random_pairs(&g, 150, 12).unwrap();
        let pres = new_preserver(&g, &pairs, &PreserverParams::default()).unwrap();
        exactness(&g, &pres);
        assert_eq!(pres.edges.len(), pres.provenance.len());
    }

    #[test]
    fn naive_is_monotone_in_pairs() {
        let g = instances::random_graph(48, 140, 3).unwrap();
        let all = instances::random_pairs(&g, 40, 4).unwrap();
        let mut prev = BTreeSet::new();
        for k in [10, 20, 30, 40] {
            let subset = PairSet::new(&all.pairs()[..k], g.n()).unwrap();
            let pres = naive_preserver(&g, &subset).unwrap();
            assert!(prev.is_subset(&pres.edges));
            prev = pres.edges;
        }
    }

    #[test]
    fn size_bound_arithmetic() {
        let v = preserver_size_bound(1_000_000, 1_000_000, 2.0 / 3.0, 2.0 / 3.0, 1.0);
        assert!((v - (1e8 + 1e6)).abs() / v < 1e-9);
        let v = preserver_size_bound(64, 8, 1.0, 1.0 / 3.0, 1.0);
        assert!((v - 192.0).abs() < 1e-9);
    }

    #[test]
    fn regime_selection() {
        let n = 10_000usize;
        // |P| = n^0.9 falls in the (1, 1/3) band.
        let p = (n as f64).powf(0.9) as usize;
        assert_eq!(regime_for(n, p), (1.0, 1.0 / 3.0));
        assert_eq!(regime_for(n, 10), (0.5, 1.0));
        assert_eq!(regime_for(n, 20 * n), (2.0 / 3.0, 2.0 / 3.0));
    }
}
