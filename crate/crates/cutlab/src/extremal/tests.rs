use std::collections::HashSet;

use super::*;
use crate::cuts::enumerate_cuts;
use crate::equiv::in_core_class;

fn k3() -> Pattern {
    Pattern::by_name("K3").unwrap().unwrap()
}

fn k4() -> Pattern {
    Pattern::by_name("K4").unwrap().unwrap()
}

fn c5_pattern() -> Pattern {
    Pattern::by_name("C5").unwrap().unwrap()
}

/// The balanced complete bipartite graph on 2m vertices (parts are the
/// lower and upper halves) plus one extra edge (0,1) inside the first part.
fn bipartite_plus_edge(m: usize) -> Graph {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for i in 0..m {
        for j in m..2 * m {
            edges.push((i, j));
        }
    }
    edges.push((0, 1));
    Graph::from_edges(2 * m, &edges).unwrap()
}

/// An 8-cycle plus the long chord (0,4); triangle-free, with a unique
/// maximum 2-cut along the even/odd bipartition.
fn c8_with_chord() -> Graph {
    let mut edges: Vec<(usize, usize)> = (0..8).map(|i| (i, (i + 1) % 8)).collect();
    edges.push((0, 4));
    Graph::from_edges(8, &edges).unwrap()
}

#[test]
fn hypergraph_sizes() {
    assert_eq!(CopyHypergraph::copies(4, &k3()).unwrap().len(), 4);
    assert_eq!(CopyHypergraph::copies(5, &k3()).unwrap().len(), 10);
    assert_eq!(CopyHypergraph::copies(5, &c5_pattern()).unwrap().len(), 12);
    assert_eq!(CopyHypergraph::copies(6, &k4()).unwrap().len(), 15);
    assert_eq!(CopyHypergraph::copies(2, &k3()).unwrap().len(), 0);
    for member in 0..4 {
        assert_eq!(
            CopyHypergraph::copies(4, &k3())
                .unwrap()
                .member_pairs(member)
                .len(),
            3
        );
    }
    assert!(matches!(
        CopyHypergraph::copies(17, &k3()),
        Err(Error::TooLarge(_))
    ));
}

#[test]
fn partial_members_complete_back_to_copies() {
    let h = c5_pattern();
    let all = CopyHypergraph::copies(6, &h).unwrap();
    let e = (0usize, 1usize);
    let partial = CopyHypergraph::partial(6, &h, e).unwrap();
    let e_bit = 1u128 << pair_index(e.0, e.1);
    let full: HashSet<u128> = all.members().iter().copied().collect();
    assert!(!partial.is_empty());
    for &m in partial.members() {
        assert_eq!(m & e_bit, 0, "designated edge must be removed");
        assert!(full.contains(&(m | e_bit)), "member plus e must be a copy");
    }
    // Every copy through e appears exactly once.
    let through = all.members().iter().filter(|&&m| m & e_bit != 0).count();
    assert_eq!(partial.len(), through);
}

#[test]
fn cherry_hypergraph_shape() {
    // Partial triangles at (0,1) on five vertices: one two-edge cherry per
    // remaining vertex.
    let partial = CopyHypergraph::partial(5, &k3(), (0, 1)).unwrap();
    assert_eq!(partial.len(), 3);
    for i in 0..3 {
        let pairs = partial.member_pairs(i);
        assert_eq!(pairs.len(), 2);
        let w = pairs[0].1.max(pairs[1].1);
        assert_eq!(
            pairs,
            vec![(0, w), (1, w)],
            "cherry through the removed edge"
        );
    }
}

#[test]
fn restriction_filters_members() {
    let all = CopyHypergraph::copies(5, &k3()).unwrap();
    // The 5-cycle is triangle-free.
    let pentagon = Graph::cycle(5).unwrap();
    assert!(all.restrict_to_graph(&pentagon).unwrap().is_empty());
    // A K4 on the first four vertices keeps its four triangles.
    let mut allowed = PairSet::empty(5);
    for u in 0..4 {
        for v in u + 1..4 {
            allowed.insert(u, v);
        }
    }
    assert_eq!(all.restrict(&allowed).unwrap().len(), 4);
    // Mismatched host sizes are rejected.
    assert!(matches!(
        all.restrict(&PairSet::empty(6)),
        Err(Error::Parameter(_))
    ));
}

#[test]
fn union_deduplicates() {
    let a = CopyHypergraph::partial(6, &k3(), (0, 1)).unwrap();
    let b = CopyHypergraph::partial(6, &k3(), (2, 3)).unwrap();
    assert_eq!(a.union(&a).unwrap().len(), a.len());
    assert_eq!(a.union(&b).unwrap().len(), a.len() + b.len());
    assert!(matches!(
        a.union(&CopyHypergraph::partial(5, &k3(), (0, 1)).unwrap()),
        Err(Error::Parameter(_))
    ));
}

fn degree_multiset(w: &EdgeSet, n: usize) -> Vec<usize> {
    let mut deg = vec![0usize; n];
    for (u, v) in w.iter() {
        deg[u] += 1;
        deg[v] += 1;
    }
    deg.sort_unstable();
    deg
}

fn witness_chromatic(w: &EdgeSet, n: usize) -> usize {
    let g = Graph::from_edges(n, &w.iter().collect::<Vec<_>>()).unwrap();
    chromatic_number(&g)
}

#[test]
fn triangle_free_maxima_in_small_complete_graphs() {
    // K5: the ten complete bipartite (2,3) splits.
    let (size, witnesses) = max_h_free_subgraph(&Graph::complete(5).unwrap(), &k3()).unwrap();
    assert_eq!(size, 6);
    assert_eq!(witnesses.len(), 10);
    for w in &witnesses {
        assert_eq!(w.len(), 6);
        assert_eq!(degree_multiset(w, 5), vec![2, 2, 2, 3, 3]);
        assert!(witness_chromatic(w, 5) <= 2);
    }
    // K4: the three 4-cycles.
    let (size, witnesses) = max_h_free_subgraph(&Graph::complete(4).unwrap(), &k3()).unwrap();
    assert_eq!(size, 4);
    assert_eq!(witnesses.len(), 3);
    for w in &witnesses {
        assert_eq!(degree_multiset(w, 4), vec![2, 2, 2, 2]);
        assert!(witness_chromatic(w, 4) <= 2);
    }
}

#[test]
fn triangle_free_maxima_match_the_quarter_square() {
    let expected_witnesses = [10usize, 10, 35, 35];
    for (i, n) in (5usize..=8).enumerate() {
        let g = Graph::complete(n).unwrap();
        let (size, witnesses) = max_h_free_subgraph(&g, &k3()).unwrap();
        assert_eq!(size, n * n / 4, "n={n}");
        assert_eq!(witnesses.len(), expected_witnesses[i], "n={n}");
    }
}

#[test]
fn h_free_graph_is_its_own_witness() {
    let pentagon = Graph::cycle(5).unwrap();
    let (size, witnesses) = max_h_free_subgraph(&pentagon, &k3()).unwrap();
    assert_eq!(size, 5);
    assert_eq!(
        witnesses,
        vec![EdgeSet::from_pair_set(&pentagon.pair_mask())]
    );
}

#[test]
fn k4_free_maximum_of_k5_is_the_turan_graph() {
    let (size, witnesses) = max_h_free_subgraph(&Graph::complete(5).unwrap(), &k4()).unwrap();
    assert_eq!(size, 8);
    // All 15 labelled (2,2,1) complete tripartite subgraphs.
    assert_eq!(witnesses.len(), 15);
    for w in &witnesses {
        assert!(witness_chromatic(w, 5) <= 3);
    }
}

#[test]
fn simonovits_predicate() {
    for n in 5..=8 {
        assert!(
            is_h_simonovits(&Graph::complete(n).unwrap(), &k3()).unwrap(),
            "K_{n}"
        );
    }
    assert!(is_h_simonovits(&Graph::complete(3).unwrap(), &k3()).unwrap());
    assert!(!is_h_simonovits(&Graph::cycle(5).unwrap(), &k3()).unwrap());
}

#[test]
fn partial_copy_counts_against_structured_hosts() {
    // Balanced bipartition of six vertices, e inside a part, A the
    // cross pairs: one cherry per opposite vertex.
    let parts: [Vec<usize>; 2] = [vec![0, 1, 2], vec![3, 4, 5]];
    let ext = edge_partition(&parts, 6)
        .unwrap()
        .ext
        .to_pair_set(6)
        .unwrap();
    assert_eq!(partial_copy_count(&k3(), (0, 1), &ext).unwrap(), 3);
    // Adding e itself to A changes nothing.
    let mut with_e = ext.clone();
    with_e.insert(0, 1);
    assert_eq!(partial_copy_count(&k3(), (0, 1), &with_e).unwrap(), 3);
    // Empty allowed set.
    assert_eq!(
        partial_copy_count(&k3(), (0, 1), &PairSet::empty(6)).unwrap(),
        0
    );
    // K4 on a balanced tripartition of nine vertices: (n/r)^2 completions.
    let parts3: [Vec<usize>; 3] = [vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8]];
    let ext3 = edge_partition(&parts3, 9)
        .unwrap()
        .ext
        .to_pair_set(9)
        .unwrap();
    assert_eq!(partial_copy_count(&k4(), (0, 1), &ext3).unwrap(), 9);
    // Beyond the bitmask cap the embedding path still works.
    let big: [Vec<usize>; 2] = [(0..10).collect(), (10..20).collect()];
    let ext_big = edge_partition(&big, 20)
        .unwrap()
        .ext
        .to_pair_set(20)
        .unwrap();
    assert_eq!(partial_copy_count(&k3(), (0, 1), &ext_big).unwrap(), 10);
}

#[test]
fn copies_of_pattern_in_external_pairs_sandwich() {
    // For a balanced partition and an internal pair, the partial-copy
    // count over the cross pairs sits within the leading-order window
    // [pi*(n/r)^(v-2) - n^(v-3), pi*(n/r)^(v-2)].
    for (h, r) in [(k3(), 2usize), (k4(), 3usize)] {
        let v = h.v() as i32;
        for blocks in 2..=5usize {
            let n = r * blocks;
            if n > 15 {
                continue;
            }
            let parts: Vec<Vec<usize>> = (0..r)
                .map(|p| (p * blocks..(p + 1) * blocks).collect())
                .collect();
            let ext = edge_partition(&parts, n)
                .unwrap()
                .ext
                .to_pair_set(n)
                .unwrap();
            let count = partial_copy_count(&h, (0, 1), &ext).unwrap() as f64;
            let lead = (n as f64 / r as f64).powi(v - 2);
            let slack = (n as f64).powi(v - 3);
            assert!(count <= lead + 1e-9, "upper: {count} vs {lead}");
            assert!(
                count >= lead - slack - 1e-9,
                "lower: {count} vs {lead}-{slack}"
            );
        }
    }
}

fn mu_brute(hg: &CopyHypergraph, p: f64) -> f64 {
    (0..hg.len())
        .map(|i| p.powi(hg.member_pairs(i).len() as i32))
        .sum()
}

fn delta_brute(hg: &CopyHypergraph, p: f64) -> f64 {
    let sets: Vec<HashSet<(usize, usize)>> = (0..hg.len())
        .map(|i| hg.member_pairs(i).into_iter().collect())
        .collect();
    let mut total = 0.0;
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if !sets[i].is_disjoint(&sets[j]) {
                total += p.powi(sets[i].union(&sets[j]).count() as i32);
            }
        }
    }
    total
}

#[test]
fn janson_sums_frozen_values() {
    let cherries = CopyHypergraph::partial(5, &k3(), (0, 1)).unwrap();
    assert_eq!(cherries.janson_mu(0.5).unwrap(), 0.75);
    let triangles4 = CopyHypergraph::copies(4, &k3()).unwrap();
    assert_eq!(triangles4.janson_mu(1.0).unwrap(), 4.0);
    // Six intersecting pairs among the four triangles of K4, each union
    // five edges.
    assert_eq!(triangles4.janson_delta(1.0).unwrap(), 6.0);
    assert_eq!(triangles4.janson_delta(0.5).unwrap(), 6.0 * 0.5f64.powi(5));
    // Cherries at a common designated edge are pairwise edge-disjoint.
    for n in 4..=12 {
        let partial = CopyHypergraph::partial(n, &k3(), (0, 1)).unwrap();
        assert_eq!(partial.janson_delta(0.37).unwrap(), 0.0, "n={n}");
    }
    // Singletons and empty hypergraphs contribute nothing.
    let singleton = CopyHypergraph::partial(3, &k3(), (0, 1)).unwrap();
    assert_eq!(singleton.len(), 1);
    assert_eq!(singleton.janson_delta(0.9).unwrap(), 0.0);
    let empty = CopyHypergraph::copies(2, &k3()).unwrap();
    assert_eq!(empty.janson_mu(0.8).unwrap(), 0.0);
    assert!(matches!(
        triangles4.janson_mu(1.5),
        Err(Error::Parameter(_))
    ));
    assert!(matches!(
        triangles4.janson_delta(-0.1),
        Err(Error::Parameter(_))
    ));
}

#[test]
fn janson_sums_match_independent_enumeration() {
    let hypergraphs = vec![
        CopyHypergraph::copies(6, &k3()).unwrap(),
        CopyHypergraph::copies(6, &k4()).unwrap(),
        CopyHypergraph::copies(6, &c5_pattern()).unwrap(),
        CopyHypergraph::partial(6, &c5_pattern(), (0, 1)).unwrap(),
        CopyHypergraph::copies(8, &k3())
            .unwrap()
            .restrict_to_graph(&bipartite_plus_edge(4))
            .unwrap(),
    ];
    for hg in &hypergraphs {
        for p in [0.3, 0.7, 1.0] {
            let mu = hg.janson_mu(p).unwrap();
            let delta = hg.janson_delta(p).unwrap();
            assert!((mu - mu_brute(hg, p)).abs() < 1e-12);
            assert!((delta - delta_brute(hg, p)).abs() < 1e-12);
        }
    }
}

#[test]
fn delta_bound_distinct_pairs_and_decay() {
    assert!(matches!(
        delta_bound_check(&k3(), (0, 1), (1, 0), 8, 0.3),
        Err(Error::Parameter(_))
    ));
    let (lhs, scale) = delta_bound_check(&k3(), (0, 1), (2, 3), 8, 0.3).unwrap();
    let union = CopyHypergraph::partial(8, &k3(), (0, 1))
        .unwrap()
        .union(&CopyHypergraph::partial(8, &k3(), (2, 3)).unwrap())
        .unwrap();
    assert!((lhs - delta_brute(&union, 0.3)).abs() < 1e-12);
    assert!((scale - (8.0f64 * 0.09).powi(2)).abs() < 1e-12);
    // Normalized overlap decays as the host grows at p = n^(-1/2).
    let mut previous = f64::INFINITY;
    for n in [6usize, 8, 10, 12] {
        let p = (n as f64).powf(-0.5);
        let (lhs, scale) = delta_bound_check(&k3(), (0, 1), (0, 2), n, p).unwrap();
        let ratio = lhs / scale;
        assert!(ratio < previous, "ratio must decrease, n={n}");
        previous = ratio;
    }
}

#[test]
fn y_event_on_the_chorded_cycle() {
    let g = c8_with_chord();
    // Triangle-free by construction.
    assert!(CopyHypergraph::copies_in_graph(&g, &k3())
        .unwrap()
        .is_empty());
    assert!(y_event_check(&g, &k3(), (0, 4), 0.1).unwrap());
    // The chord is the only internal graph edge.
    assert_eq!(count_y_edges(&g, &k3(), 0.0).unwrap(), 1);
    // A core-internal pair that is not a graph edge fails.
    assert!(!y_event_check(&g, &k3(), (0, 2), 0.1).unwrap());
}

#[test]
fn y_event_fails_when_cherries_survive() {
    // Balanced bipartite plus an internal edge: the core exists and the
    // edge is internal, but every opposite vertex completes a triangle.
    let g = bipartite_plus_edge(3);
    assert!(in_core_class(&g, 2, 0, 0.2).unwrap());
    assert!(!y_event_check(&g, &k3(), (0, 1), 0.2).unwrap());
    // Same structure one size down, where the host is a four-cycle.
    let g = bipartite_plus_edge(2);
    assert_eq!(count_y_edges(&g, &k3(), 0.25).unwrap(), 0);
}

#[test]
fn y_event_without_core_is_false() {
    // K4 at r=2 has no core: every balanced bipartition is maximum.
    let k4_graph = Graph::complete(4).unwrap();
    assert!(!y_event_check(&k4_graph, &k3(), (0, 1), 0.3).unwrap());
    assert!(matches!(
        y_event_check(&k4_graph, &k3(), (0, 0), 0.3),
        Err(Error::Parameter(_))
    ));
    assert!(matches!(
        y_event_check(&k4_graph, &k3(), (0, 1), 1.0),
        Err(Error::Parameter(_))
    ));
}

#[test]
fn nonzero_y_count_yields_an_h_free_cut_extension() {
    // When some edge passes the core event, a maximum cut must exist whose
    // crossing graph edges plus that edge form an H-free graph.
    let g = c8_with_chord();
    assert!(count_y_edges(&g, &k3(), 0.0).unwrap() > 0);
    let family = enumerate_cuts(&g, 2, 0).unwrap();
    let mut found = false;
    'outer: for cut in family.iter() {
        for e in g.edges() {
            if cut.part_of(e.0) != cut.part_of(e.1) {
                continue;
            }
            let mut crossing: Vec<(usize, usize)> = g
                .edges()
                .into_iter()
                .filter(|&(u, v)| cut.part_of(u) != cut.part_of(v))
                .collect();
            crossing.push(e);
            let candidate = Graph::from_edges(g.n(), &crossing).unwrap();
            if CopyHypergraph::copies_in_graph(&candidate, &k3())
                .unwrap()
                .is_empty()
            {
                found = true;
                break 'outer;
            }
        }
    }
    assert!(found);
}
