//! Simple undirected graphs on at most 64 labelled vertices.
//!
//! Vertices are 0-indexed; adjacency is one 64-bit mask per vertex.  Graphs
//! are immutable after construction: every edit goes through an operation
//! returning a fresh graph, so edge counts can be cached and experiment code
//! can share graphs freely across threads.

use crate::error::{Error, Result};
use crate::pairs::{pair_count, pair_from_index, PairSet};
use rand::distr::Bernoulli;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Hard cap on the vertex count; one adjacency word per vertex.
pub const MAX_VERTICES: usize = 64;

/// Master seed plus stream index.  The same (master, stream) pair always
/// reproduces the same sample sequence, and distinct streams of one master
/// are independent, so trial i of an experiment can draw from stream i
/// regardless of execution order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub master: u64,
    pub stream: u64,
}

impl RngSeed {
    pub fn new(master: u64) -> Self {
        RngSeed { master, stream: 0 }
    }

    pub fn with_stream(master: u64, stream: u64) -> Self {
        RngSeed { master, stream }
    }

    /// Same master, different stream.
    pub fn stream(&self, stream: u64) -> Self {
        RngSeed {
            master: self.master,
            stream,
        }
    }

    /// Counter-based generator: the master seed fixes the key, the stream
    /// index selects an independent output stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.stream);
        rng
    }
}

/// A set of unordered vertex pairs, kept sorted in colexicographic order.
///
/// Endpoints are distinct and pairs are unique; the set does not carry a
/// vertex count of its own and may be applied to any graph whose vertex set
/// covers its endpoints.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct EdgeSet {
    pairs: Vec<(usize, usize)>,
}

impl EdgeSet {
    pub fn new() -> Self {
        EdgeSet::default()
    }

    /// Normalizes order within each pair, sorts, and rejects loops,
    /// duplicates and endpoints beyond [`MAX_VERTICES`].
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut v: Vec<(usize, usize)> = Vec::new();
        for (a, b) in pairs {
            if a == b {
                return Err(Error::parameter(format!("loop at vertex {a} in edge set")));
            }
            if a >= MAX_VERTICES || b >= MAX_VERTICES {
                return Err(Error::parameter(format!(
                    "edge ({a},{b}) beyond the {MAX_VERTICES}-vertex cap"
                )));
            }
            v.push((a.min(b), a.max(b)));
        }
        v.sort_by_key(|&(u, w)| crate::pairs::pair_index(u, w));
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::parameter("duplicate pair in edge set".to_string()));
        }
        Ok(EdgeSet { pairs: v })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        let key = (u.min(v), u.max(v));
        self.pairs
            .binary_search_by_key(&crate::pairs::pair_index(key.0, key.1), |&(a, b)| {
                crate::pairs::pair_index(a, b)
            })
            .is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn max_vertex(&self) -> Option<usize> {
        self.pairs.iter().map(|&(_, v)| v).max()
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        let mut v = self.pairs.clone();
        v.extend(other.iter());
        v.sort_by_key(|&(u, w)| crate::pairs::pair_index(u, w));
        v.dedup();
        EdgeSet { pairs: v }
    }

    pub fn intersection(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet {
            pairs: self
                .pairs
                .iter()
                .copied()
                .filter(|&(u, v)| other.contains(u, v))
                .collect(),
        }
    }

    pub fn difference(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet {
            pairs: self
                .pairs
                .iter()
                .copied()
                .filter(|&(u, v)| !other.contains(u, v))
                .collect(),
        }
    }

    pub fn to_pair_set(&self, n: usize) -> Result<PairSet> {
        let mut s = PairSet::empty(n);
        for (u, v) in self.iter() {
            if v >= n {
                return Err(Error::parameter(format!(
                    "pair ({u},{v}) outside a {n}-vertex graph"
                )));
            }
            s.insert(u, v);
        }
        Ok(s)
    }

    pub fn from_pair_set(s: &PairSet) -> EdgeSet {
        EdgeSet {
            pairs: s.iter().collect(),
        }
    }
}

/// Simple undirected graph with bitset adjacency and a cached edge count.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
    m: usize,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Graph(n={}, m={}, edges={:?})",
            self.n,
            self.m,
            self.edges()
        )
    }
}

impl Graph {
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::parameter(format!(
                "vertex count {n} outside 1..={MAX_VERTICES}"
            )));
        }
        Ok(Graph {
            n,
            adj: vec![0; n],
            m: 0,
        })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            if u == v {
                return Err(Error::parameter(format!("loop at vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::parameter(format!(
                    "edge ({u},{v}) outside a {n}-vertex graph"
                )));
            }
            if g.has_edge(u, v) {
                return Err(Error::parameter(format!("duplicate edge ({u},{v})")));
            }
            g.add_edge_unchecked(u, v);
        }
        Ok(g)
    }

    pub fn from_edge_set(n: usize, edges: &EdgeSet) -> Result<Self> {
        let pairs: Vec<(usize, usize)> = edges.iter().collect();
        Graph::from_edges(n, &pairs)
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for v in 1..n {
            for u in 0..v {
                g.add_edge_unchecked(u, v);
            }
        }
        Ok(g)
    }

    /// Complete multipartite graph; vertices are numbered part by part.
    pub fn complete_multipartite(part_sizes: &[usize]) -> Result<Self> {
        let n: usize = part_sizes.iter().sum();
        let mut g = Graph::empty(n)?;
        let mut part_of = Vec::with_capacity(n);
        for (i, &s) in part_sizes.iter().enumerate() {
            part_of.extend(std::iter::repeat_n(i, s));
        }
        for v in 1..n {
            for u in 0..v {
                if part_of[u] != part_of[v] {
                    g.add_edge_unchecked(u, v);
                }
            }
        }
        Ok(g)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::parameter(format!(
                "cycle needs >= 3 vertices, got {n}"
            )));
        }
        let mut g = Graph::empty(n)?;
        for v in 0..n {
            g.add_edge_unchecked(v, (v + 1) % n);
        }
        Ok(g)
    }

    pub fn path(n: usize) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for v in 1..n {
            g.add_edge_unchecked(v - 1, v);
        }
        Ok(g)
    }

    fn add_edge_unchecked(&mut self, u: usize, v: usize) {
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
        self.m += 1;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.adj[u] >> v & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    /// Neighbour mask of `v`.
    pub fn neighbours(&self, v: usize) -> u64 {
        self.adj[v]
    }

    /// |N(v) ∩ S| for a vertex mask S.
    pub fn degree_into(&self, v: usize, mask: u64) -> usize {
        (self.adj[v] & mask).count_ones() as usize
    }

    /// Mask with one bit per vertex.
    pub fn vertices_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// Edges in colexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for v in 1..self.n {
            let mut below = self.adj[v] & ((1u64 << v) - 1);
            while below != 0 {
                let u = below.trailing_zeros() as usize;
                below &= below - 1;
                out.push((u, v));
            }
        }
        out
    }

    pub fn edge_set(&self) -> EdgeSet {
        EdgeSet {
            pairs: self.edges(),
        }
    }

    /// Edge indicator over pair indices.
    pub fn pair_mask(&self) -> PairSet {
        let mut s = PairSet::empty(self.n);
        for (u, v) in self.edges() {
            s.insert(u, v);
        }
        s
    }

    /// Graph with the edge {u,v} added; returns the same graph when the edge
    /// is already present (set union semantics).
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph> {
        if u == v || u >= self.n || v >= self.n {
            return Err(Error::parameter(format!(
                "pair ({u},{v}) is not a valid pair of a {}-vertex graph",
                self.n
            )));
        }
        let mut g = self.clone();
        if !g.has_edge(u, v) {
            g.add_edge_unchecked(u, v);
        }
        Ok(g)
    }

    /// Edge set symmetric difference G △ T; an involution in T.
    pub fn symmetric_difference(&self, t: &EdgeSet) -> Result<Graph> {
        if let Some(v) = t.max_vertex() {
            if v >= self.n {
                return Err(Error::parameter(format!(
                    "edge set reaches vertex {v}, graph has {}",
                    self.n
                )));
            }
        }
        let mut g = self.clone();
        for (u, v) in t.iter() {
            if g.has_edge(u, v) {
                g.adj[u] &= !(1 << v);
                g.adj[v] &= !(1 << u);
                g.m -= 1;
            } else {
                g.add_edge_unchecked(u, v);
            }
        }
        Ok(g)
    }

    /// Connected components as vertex masks, ordered by smallest vertex.
    pub fn components(&self) -> Vec<u64> {
        let mut seen = 0u64;
        let all = self.vertices_mask();
        let mut out = Vec::new();
        while seen != all {
            let start = (!seen & all).trailing_zeros() as usize;
            let mut comp = 1u64 << start;
            loop {
                let mut frontier = 0u64;
                let mut c = comp;
                while c != 0 {
                    let v = c.trailing_zeros() as usize;
                    c &= c - 1;
                    frontier |= self.adj[v];
                }
                let grown = comp | (frontier & all);
                if grown == comp {
                    break;
                }
                comp = grown;
            }
            seen |= comp;
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Subgraph induced by a vertex mask, relabelled to 0..k in increasing
    /// original order; returns the new graph and the new-to-old vertex map.
    pub fn induced(&self, mask: u64) -> Result<(Graph, Vec<usize>)> {
        let mask = mask & self.vertices_mask();
        if mask == 0 {
            return Err(Error::parameter("induced subgraph on empty vertex set"));
        }
        let mut map = Vec::new();
        let mut m = mask;
        while m != 0 {
            map.push(m.trailing_zeros() as usize);
            m &= m - 1;
        }
        let mut g = Graph::empty(map.len())?;
        for (i, &u) in map.iter().enumerate() {
            for (j, &v) in map.iter().enumerate().take(i) {
                if self.has_edge(u, v) {
                    g.add_edge_unchecked(j, i);
                }
            }
        }
        Ok((g, map))
    }

    /// Stable content hash (FNV-1a over n and the adjacency words); used to
    /// tie cut families to the graph they were enumerated from.
    pub fn content_hash(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        let mut eat = |x: u64| {
            for byte in x.to_le_bytes() {
                h ^= byte as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        };
        eat(self.n as u64);
        for &w in &self.adj {
            eat(w);
        }
        h
    }
}

/// Common neighbourhood N(W; S): vertices of S adjacent to every vertex of
/// W, members of W excluded.  For empty W the intersection over an empty
/// family is all of S.
pub fn common_neighbourhood(g: &Graph, w_mask: u64, s_mask: u64) -> u64 {
    let mut acc = g.vertices_mask();
    let mut w = w_mask & g.vertices_mask();
    while w != 0 {
        let v = w.trailing_zeros() as usize;
        w &= w - 1;
        acc &= g.neighbours(v);
    }
    acc & s_mask & g.vertices_mask() & !w_mask
}

/// Edges of G with at least one endpoint in the vertex mask A.
pub fn boundary_edges(g: &Graph, a_mask: u64) -> EdgeSet {
    let a = a_mask & g.vertices_mask();
    EdgeSet {
        pairs: g
            .edges()
            .into_iter()
            .filter(|&(u, v)| (1 << u) & a != 0 || (1 << v) & a != 0)
            .collect(),
    }
}

/// Uniform random graph with exactly `m` edges, by partial Fisher-Yates over
/// the pair indices.  Deterministic in the seed.
pub fn sample_gnm(n: usize, m: usize, seed: RngSeed) -> Result<Graph> {
    let g0 = Graph::empty(n)?;
    let total = pair_count(n);
    if m > total {
        return Err(Error::parameter(format!(
            "m={m} exceeds the {total} pairs of a {n}-vertex graph"
        )));
    }
    let mut idx: Vec<u32> = (0..total as u32).collect();
    let mut rng = seed.rng();
    let mut g = g0;
    for i in 0..m {
        let j = rng.random_range(i..total);
        idx.swap(i, j);
        let (u, v) = pair_from_index(idx[i] as usize);
        g.add_edge_unchecked(u, v);
    }
    Ok(g)
}

/// Binomial random graph: every pair independently with probability `p`, in
/// colexicographic pair order.  Deterministic in the seed.
pub fn sample_gnp(n: usize, p: f64, seed: RngSeed) -> Result<Graph> {
    let mut g = Graph::empty(n)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::parameter(format!("p={p} outside [0,1]")));
    }
    let dist = Bernoulli::new(p).expect("p validated");
    let mut rng = seed.rng();
    for i in 0..pair_count(n) {
        if dist.sample(&mut rng) {
            let (u, v) = pair_from_index(i);
            g.add_edge_unchecked(u, v);
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forced_gnm_instances() {
        // Three edges on three vertices leave no choice.
        let g = sample_gnm(3, 3, RngSeed::new(7)).unwrap();
        assert_eq!(g, Graph::complete(3).unwrap());
        let g = sample_gnm(4, 0, RngSeed::new(9)).unwrap();
        assert_eq!(g.m(), 0);
    }

    #[test]
    fn gnm_edge_count_is_exact() {
        for seed in 0..50 {
            let g = sample_gnm(9, 13, RngSeed::new(seed)).unwrap();
            assert_eq!(g.m(), 13);
            for v in 0..9 {
                assert_eq!(g.adj[v] >> v & 1, 0, "loop at {v}");
            }
            let degree_sum: usize = (0..9).map(|v| g.degree(v)).sum();
            assert_eq!(degree_sum, 2 * g.m());
        }
    }

    #[test]
    fn gnp_extremes() {
        let g = sample_gnp(4, 0.0, RngSeed::new(3)).unwrap();
        assert_eq!(g.m(), 0);
        let g = sample_gnp(4, 1.0, RngSeed::new(3)).unwrap();
        assert_eq!(g, Graph::complete(4).unwrap());
    }

    #[test]
    fn same_seed_same_graph() {
        let a = sample_gnm(10, 20, RngSeed::with_stream(42, 5)).unwrap();
        let b = sample_gnm(10, 20, RngSeed::with_stream(42, 5)).unwrap();
        assert_eq!(a, b);
        let c = sample_gnm(10, 20, RngSeed::with_stream(42, 6)).unwrap();
        assert_ne!(a, c, "distinct streams should not collide here");
    }

    #[test]
    fn common_neighbourhood_examples() {
        let k4 = Graph::complete(4).unwrap();
        assert_eq!(
            common_neighbourhood(&k4, 0b0011, k4.vertices_mask()),
            0b1100
        );
        let c4 = Graph::cycle(4).unwrap();
        assert_eq!(
            common_neighbourhood(&c4, 0b0101, c4.vertices_mask()),
            0b1010
        );
        let p3 = Graph::path(3).unwrap();
        assert_eq!(common_neighbourhood(&p3, 0b101, 0b011), 0b010);
    }

    #[test]
    fn boundary_edges_examples() {
        let k4 = Graph::complete(4).unwrap();
        assert!(boundary_edges(&k4, 0).is_empty());
        let b = boundary_edges(&k4, 0b0001);
        let expect = EdgeSet::from_pairs([(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(b, expect);
        let c5 = Graph::cycle(5).unwrap();
        let b = boundary_edges(&c5, 0b00011);
        let expect = EdgeSet::from_pairs([(0, 4), (0, 1), (1, 2)]).unwrap();
        assert_eq!(b, expect);
    }

    #[test]
    fn symmetric_difference_examples() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let t = EdgeSet::from_pairs([(0, 1), (0, 2)]).unwrap();
        let h = g.symmetric_difference(&t).unwrap();
        assert_eq!(h, Graph::from_edges(3, &[(1, 2), (0, 2)]).unwrap());
        let k3 = Graph::complete(3).unwrap();
        let all = k3.edge_set();
        assert_eq!(k3.symmetric_difference(&all).unwrap().m(), 0);
        let empty = EdgeSet::new();
        assert_eq!(k3.symmetric_difference(&empty).unwrap(), k3);
    }

    #[test]
    fn components_and_induced() {
        let g = Graph::from_edges(6, &[(0, 2), (2, 4), (1, 3)]).unwrap();
        let comps = g.components();
        assert_eq!(comps, vec![0b010101, 0b001010, 0b100000]);
        let (sub, map) = g.induced(0b010101).unwrap();
        assert_eq!(map, vec![0, 2, 4]);
        assert_eq!(sub, Graph::path(3).unwrap());
    }
}
