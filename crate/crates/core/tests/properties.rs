use std::collections::{BTreeSet, VecDeque};

use dynhcl::oracle::{affected_oracle, bfs_all_distances, canonical_labelling, diff_labellings};
use dynhcl::snapshot::{read_graph, read_labelling, write_graph, write_labelling};
use dynhcl::{
    bounded_sparse_bfs, build_labelling, build_labelling_sequential, find_affected, orient_and_filter, query,
    root_distance, select_landmarks, synth, upper_bound, Distance, DynamicIndex, EdgeInsertion, Execution, Graph,
    IdMap, Landmarks, VertexId,
};
use proptest::prelude::*;

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        let edges = prop::collection::vec((0..n as VertexId, 0..n as VertexId), 0..n * 3);
        edges.prop_map(move |e| Graph::from_edges(n, e).unwrap())
    })
}

fn arb_graph_with_landmarks(max_n: usize) -> impl Strategy<Value = (Graph, Landmarks)> {
    arb_graph(max_n).prop_flat_map(|g| {
        let n = g.vertex_count();
        (Just(g), prop::sample::subsequence((0..n as VertexId).collect::<Vec<_>>(), 1..=n.min(6)), any::<u64>())
            .prop_map(move |(g, mut ids, seed)| {
                // shuffle rank order deterministically from the seed
                let len = ids.len();
                ids.rotate_left((seed as usize) % len);
                let l = Landmarks::new(ids, n).unwrap();
                (g, l)
            })
    })
}

/// Unidirectional BFS on the graph minus landmarks.
fn sparse_distance(g: &Graph, lm: &Landmarks, u: VertexId, v: VertexId) -> Distance {
    let mut dist = vec![Distance::UNREACHABLE; g.vertex_count()];
    dist[u as usize] = Distance::ZERO;
    let mut q = VecDeque::from([u]);
    while let Some(x) = q.pop_front() {
        for &y in g.neighbors(x).unwrap() {
            if !lm.is_landmark(y) && !dist[y as usize].is_finite() {
                dist[y as usize] = dist[x as usize].succ();
                q.push_back(y);
            }
        }
    }
    dist[v as usize]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn build_equals_canonical((g, lm) in arb_graph_with_landmarks(40)) {
        let built = build_labelling(&g, &lm);
        let canonical = canonical_labelling(&g, &lm);
        prop_assert!(diff_labellings(&built, &canonical).unwrap().is_empty());
        prop_assert_eq!(&built, &build_labelling_sequential(&g, &lm));
        for v in g.vertices() {
            prop_assert!(built.label(v).len() <= lm.len());
            if lm.is_landmark(v) {
                prop_assert!(built.label(v).is_empty());
            }
        }
    }

    #[test]
    fn root_distance_recovers_bfs((g, lm) in arb_graph_with_landmarks(40)) {
        let l = build_labelling(&g, &lm);
        for (rank, &r) in lm.ids().iter().enumerate() {
            let truth = bfs_all_distances(&g, r).unwrap();
            for v in g.vertices() {
                prop_assert_eq!(root_distance(&l, rank, v).unwrap(), truth[v as usize]);
            }
        }
    }

    #[test]
    fn rank_order_does_not_change_entries((g, lm) in arb_graph_with_landmarks(30)) {
        let mut reversed = lm.ids().to_vec();
        reversed.reverse();
        let other = Landmarks::new(reversed, g.vertex_count()).unwrap();
        let d = diff_labellings(&build_labelling(&g, &lm), &build_labelling(&g, &other)).unwrap();
        prop_assert!(d.is_empty());
    }

    #[test]
    fn queries_are_exact_and_bounds_sound((g, lm) in arb_graph_with_landmarks(35)) {
        let l = build_labelling(&g, &lm);
        for u in g.vertices() {
            let truth = bfs_all_distances(&g, u).unwrap();
            for v in g.vertices() {
                let r = query(&g, &l, u, v).unwrap();
                prop_assert_eq!(r.distance, truth[v as usize], "pair ({}, {})", u, v);
                prop_assert!(r.distance <= r.bound_used);
                prop_assert!(r.search_expanded <= g.vertex_count());
                if u != v && !lm.is_landmark(u) && !lm.is_landmark(v) {
                    prop_assert!(upper_bound(&l, u, v).unwrap() >= truth[v as usize]);
                }
            }
        }
    }

    #[test]
    fn bidirectional_search_matches_unidirectional((g, lm) in arb_graph_with_landmarks(35), bound in 0u32..12) {
        let free: Vec<VertexId> = g.vertices().filter(|&v| !lm.is_landmark(v)).collect();
        for &u in &free {
            for &v in &free {
                let exact = sparse_distance(&g, &lm, u, v);
                let got = bounded_sparse_bfs(&g, &lm, u, v, Distance::new(bound));
                let expected = if u == v { Distance::ZERO } else if exact < Distance::new(bound) { exact } else { Distance::UNREACHABLE };
                prop_assert_eq!(got, expected);
                prop_assert_eq!(bounded_sparse_bfs(&g, &lm, u, v, Distance::UNREACHABLE), exact);
            }
        }
    }

    #[test]
    fn bfs_is_one_lipschitz_on_edges(g in arb_graph(50), s in 0u32..50) {
        let s = s % g.vertex_count() as u32;
        let d = bfs_all_distances(&g, s).unwrap();
        prop_assert_eq!(d[s as usize], Distance::ZERO);
        for (u, v) in g.edges() {
            let (a, b) = (d[u as usize], d[v as usize]);
            prop_assert_eq!(a.is_finite(), b.is_finite());
            if a.is_finite() {
                prop_assert!(a.raw().abs_diff(b.raw()) <= 1);
            }
        }
    }

    #[test]
    fn graph_invariants_survive_mutation(g in arb_graph(30), ops in prop::collection::vec((0u32..40, 0u32..40, any::<bool>()), 0..60)) {
        let mut g = g;
        for (a, b, grow) in ops {
            if grow {
                g.add_vertex();
            }
            let n = g.vertex_count() as u32;
            let before = g.edge_count();
            let applied = g.insert_edge(EdgeInsertion::new(a % n, b % n)).unwrap();
            prop_assert_eq!(g.edge_count(), before + applied as usize);
            prop_assert!(g.has_edge(a % n, b % n) || a % n == b % n);
        }
        prop_assert!(g.audit().is_ok());
    }

    #[test]
    fn incremental_matches_rebuild(
        (g, lm) in arb_graph_with_landmarks(30),
        ops in prop::collection::vec((0u32..64, 0u32..64, 0u8..8), 1..25),
    ) {
        let l = build_labelling(&g, &lm);
        let mut idx = DynamicIndex::new(g, l).unwrap();
        for (a, b, kind) in ops {
            let n = idx.graph().vertex_count() as u32;
            let (a, b) = (a % n, b % n);
            if kind == 0 {
                let mut attach = vec![a];
                if a != b { attach.push(b); }
                idx.apply_vertex_insertion(&attach).unwrap();
            } else if a != b && !idx.graph().has_edge(a, b) {
                let before = idx.clone();
                let (stats, sets) = idx.apply_edge_insertion_detailed(EdgeInsertion::new(a, b)).unwrap();
                prop_assert!(stats.applied);
                for set in &sets {
                    let r = lm.id(set.landmark);
                    let oracle = match orient_and_filter(before.labelling(), EdgeInsertion::new(a, b), set.landmark).unwrap() {
                        Some(edge) => {
                            prop_assert_eq!(set.edge, edge);
                            affected_oracle(idx.graph(), edge, r).unwrap()
                        }
                        None => BTreeSet::new(),
                    };
                    let mine: BTreeSet<VertexId> = set.vertices().collect();
                    prop_assert_eq!(mine, oracle);
                }
                // untouched labels outside the union of affected sets
                let touched: BTreeSet<VertexId> = sets.iter().flat_map(|s| s.vertices()).collect();
                for v in before.graph().vertices().filter(|v| !touched.contains(v)) {
                    prop_assert_eq!(before.labelling().label(v), idx.labelling().label(v));
                }
            }
            let canonical = canonical_labelling(idx.graph(), &lm);
            let diff = diff_labellings(idx.labelling(), &canonical).unwrap();
            prop_assert!(diff.is_empty(), "diff {:?}", diff);
        }
    }

    #[test]
    fn snapshots_roundtrip((g, lm) in arb_graph_with_landmarks(25)) {
        let l = build_labelling(&g, &lm);
        let mut buf = Vec::new();
        write_graph(&mut buf, &g).unwrap();
        prop_assert_eq!(read_graph(buf.as_slice()).unwrap(), g.clone());
        let ids = IdMap::identity(g.vertex_count());
        let mut buf = Vec::new();
        write_labelling(&mut buf, &l, &ids).unwrap();
        let (back, back_ids) = read_labelling(buf.as_slice()).unwrap();
        prop_assert_eq!(back, l);
        prop_assert_eq!(back_ids, ids);
    }
}

#[test]
fn canonical_equality_on_larger_graphs() {
    let cases = [
        (synth::erdos_renyi(200, 6.0, 1), 8),
        (synth::erdos_renyi(2000, 8.0, 2), 16),
        (synth::preferential_attachment(2000, 3, 3), 20),
        (synth::grid(40, 45), 12),
    ];
    for (g, k) in cases {
        let lm = select_landmarks(&g, k).unwrap();
        let built = build_labelling(&g, &lm);
        assert!(diff_labellings(&built, &canonical_labelling(&g, &lm)).unwrap().is_empty());
    }
}

#[test]
fn find_affected_jump_lower_bound() {
    let g = synth::erdos_renyi(400, 4.0, 17);
    let lm = select_landmarks(&g, 6).unwrap();
    let l = build_labelling(&g, &lm);
    let mut checked = 0;
    for (a, b) in [(0, 399), (5, 200), (17, 250), (33, 34), (100, 300), (7, 8)] {
        if g.has_edge(a, b) {
            continue;
        }
        for rank in 0..lm.len() {
            let Some(edge) = orient_and_filter(&l, EdgeInsertion::new(a, b), rank).unwrap() else { continue };
            let set = find_affected(&g, &l, edge, rank);
            let old_a = root_distance(&l, rank, edge.0).unwrap();
            for m in &set.members {
                assert!(m.old_depth >= old_a.succ());
                assert!(m.new_depth <= m.old_depth);
                checked += 1;
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn sequential_and_parallel_updates_agree() {
    let g = synth::preferential_attachment(1500, 4, 8);
    let lm = select_landmarks(&g, 10).unwrap();
    let l = build_labelling(&g, &lm);
    let ops = dynhcl::gen_insert_workload(&g, 50, 4).unwrap();
    let mut seq = DynamicIndex::new(g.clone(), l.clone()).unwrap().with_execution(Execution::Sequential);
    let mut par = DynamicIndex::new(g, l).unwrap();
    for op in ops.inserts().unwrap() {
        let dynhcl::TraceOp::Edge(u, v) = *op else { unreachable!() };
        let a = seq.apply_edge_insertion(EdgeInsertion::new(u, v)).unwrap();
        let b = par.apply_edge_insertion(EdgeInsertion::new(u, v)).unwrap();
        assert_eq!(a.affected_per_landmark, b.affected_per_landmark);
        assert_eq!(a.edits, b.edits);
    }
    assert_eq!(seq.labelling(), par.labelling());
}
