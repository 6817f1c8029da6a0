//! Property tests over seeded random instances.

use proptest::prelude::*;

use sparsify::graph::{BallMode, Graph, Node, PairSet};
use sparsify::instances;
use sparsify::preserver;
use sparsify::tiebreak::OrientedPathSystem;

fn seeded_graph(n: usize, density: usize, seed: u64) -> Graph {
    let cap = n * (n - 1) / 2;
    let m = (n * density / 2).clamp(1, cap);
    instances::random_graph(n, m, seed).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_paths_are_consistent(n in 4usize..64, density in 2usize..6, seed: u64) {
        let g = seeded_graph(n, density, seed);
        let pairs = match instances::random_pairs(&g, 6, seed ^ 1) {
            Ok(p) => p,
            Err(_) => return Ok(()),
        };
        for &(u, v) in pairs.pairs() {
            let p = g.canonical_shortest_path(u, v).unwrap();
            let nodes = p.nodes();
            for i in 0..nodes.len() {
                for j in i + 1..nodes.len() {
                    let sub = g.canonical_shortest_path(nodes[i], nodes[j]).unwrap();
                    prop_assert_eq!(sub.nodes(), &nodes[i..=j],
                        "subpath of ({}, {}) between positions {} and {}", u, v, i, j);
                }
            }
        }
    }

    #[test]
    fn canonical_length_matches_bfs(n in 2usize..64, density in 2usize..6, seed: u64) {
        let g = seeded_graph(n, density, seed);
        let dist = g.bfs_distances(0).unwrap();
        for v in 0..n as Node {
            if let Some(d) = dist[v as usize].finite() {
                let p = g.canonical_shortest_path(0, v).unwrap();
                prop_assert_eq!(p.len_edges() as u32, d);
            }
        }
    }

    #[test]
    fn triangle_inequality(n in 3usize..64, density in 2usize..6, seed: u64) {
        let g = seeded_graph(n, density, seed);
        let dist: Vec<_> = (0..n as Node).map(|s| g.bfs_distances(s).unwrap()).collect();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (ab, bc, ac) = (
                        dist[a][b].finite(),
                        dist[b][c].finite(),
                        dist[a][c].finite(),
                    );
                    if let (Some(x), Some(y)) = (ab, bc) {
                        let z = ac.expect("connected through b");
                        prop_assert!(z <= x + y);
                    }
                }
            }
        }
    }

    #[test]
    fn ball_nesting(n in 2usize..64, density in 2usize..6, seed: u64, r in 0u32..6) {
        let g = seeded_graph(n, density, seed);
        let c = (seed % n as u64) as Node;
        let le = g.ball(c, r, BallMode::AtMost).unwrap();
        let lt = g.ball(c, r, BallMode::Below).unwrap();
        let eq = g.ball(c, r, BallMode::Exact).unwrap();
        prop_assert!(lt.iter().all(|v| le.contains(v)));
        prop_assert!(eq.iter().all(|v| le.contains(v)));
        prop_assert!(lt.iter().all(|v| !eq.contains(v)));
        prop_assert_eq!(le.len(), lt.len() + eq.len());
    }

    #[test]
    fn naive_preserver_is_monotone(n in 8usize..48, seed: u64) {
        let g = seeded_graph(n, 4, seed);
        let all = match instances::random_pairs(&g, 12, seed ^ 2) {
            Ok(p) => p,
            Err(_) => return Ok(()),
        };
        let mut prev = std::collections::BTreeSet::new();
        for k in 1..=all.len() {
            let sub = PairSet::new(&all.pairs()[..k], n).unwrap();
            let pres = preserver::naive_preserver(&g, &sub).unwrap();
            prop_assert!(prev.is_subset(&pres.edges));
            prev = pres.edges;
        }
    }

    #[test]
    fn branching_invariant_under_permutation(n in 8usize..48, seed: u64, rot in 0usize..8) {
        let g = seeded_graph(n, 4, seed);
        let pairs = match instances::random_pairs(&g, 8, seed ^ 3) {
            Ok(p) => p,
            Err(_) => return Ok(()),
        };
        // Node-disjoint subset of canonical paths.
        let mut used = std::collections::BTreeSet::new();
        let mut chosen = Vec::new();
        for &(u, v) in pairs.pairs() {
            let p = g.canonical_shortest_path(u, v).unwrap();
            if p.nodes().iter().all(|x| !used.contains(x)) {
                used.extend(p.nodes().iter().copied());
                chosen.push(((u, v), p));
            }
        }
        let mut sys = OrientedPathSystem::new(n);
        for (pair, p) in &chosen {
            sys.push(*pair, p.clone(), None);
        }
        let b = sys.branching_events();
        let k = chosen.len().max(1);
        let mut rotated = OrientedPathSystem::new(n);
        for i in 0..chosen.len() {
            let (pair, p) = &chosen[(i + rot) % k];
            rotated.push(*pair, p.clone(), None);
        }
        prop_assert_eq!(rotated.branching_events(), b);
    }
}
