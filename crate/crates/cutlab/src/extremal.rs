//! Exact extremal computations over copy hypergraphs.
//!
//! A *copy hypergraph* collects, as edge sets, either every copy of a
//! pattern `H` inside the complete graph `K_n` or every copy through a
//! designated edge `e` with `e` removed (the partial copies at `e`).
//! Members are stored as bitmasks over the colexicographic pair indices of
//! `K_n`, so restriction, containment, and the first/second-moment sums
//! reduce to mask algebra; that representation caps hosts at 16 vertices.
//!
//! On top of the hypergraphs sit the exact maximum `H`-free subgraph
//! (solved as a minimum hitting set by branch and bound, with a greedy
//! disjoint-copy packing as the admissible lower bound), the predicate
//! that every maximum witness is `(chi(H)-1)`-partite, the first- and
//! second-moment sums `mu_p` and `Delta_p`, and the per-edge core event
//! combining the cut-equivalence core with partial-copy emptiness.

use std::collections::HashSet;

use crate::cuts::edge_partition;
use crate::equiv::{check_alpha, core_class_condition, equivalence};
use crate::error::{Error, Result};
use crate::graph::{EdgeSet, Graph};
use crate::pairs::{pair_from_index, pair_index, PairSet};
use crate::patterns::{
    automorphism_count, chromatic_number, count_embeddings, for_each_embedding, Pattern,
};

/// Largest host the bitmask representation supports: C(16,2) = 120 pair
/// indices fit a u128.
pub const MAX_COPY_HOST: usize = 16;

fn check_host(n: usize) -> Result<()> {
    if n > MAX_COPY_HOST {
        return Err(Error::too_large(format!(
            "copy hypergraphs support hosts up to {MAX_COPY_HOST} vertices; got {n}"
        )));
    }
    Ok(())
}

fn check_pair(n: usize, e: (usize, usize)) -> Result<()> {
    if e.0 == e.1 || e.0 >= n || e.1 >= n {
        return Err(Error::parameter(format!(
            "({},{}) is not a vertex pair of an {n}-vertex host",
            e.0, e.1
        )));
    }
    Ok(())
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::parameter(format!("probability p={p} outside [0,1]")));
    }
    Ok(())
}

fn pair_bit(u: usize, v: usize) -> u128 {
    1u128 << pair_index(u, v)
}

fn pair_set_mask(s: &PairSet) -> u128 {
    s.iter().fold(0u128, |acc, (u, v)| acc | pair_bit(u, v))
}

/// A hypergraph whose members are edge subsets of `K_n`, each one pattern
/// copy (or a copy minus a designated edge), as pair-index bitmasks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CopyHypergraph {
    n: usize,
    members: Vec<u128>,
}

impl CopyHypergraph {
    /// The hypergraph of all copies of `h` in the complete graph `K_n`.
    pub fn copies(n: usize, h: &Pattern) -> Result<CopyHypergraph> {
        check_host(n)?;
        if n < h.v() {
            return Ok(CopyHypergraph {
                n,
                members: Vec::new(),
            });
        }
        Self::copies_in(&Graph::complete(n)?, h, n)
    }

    /// The hypergraph of all copies of `h` inside an arbitrary host graph.
    pub fn copies_in_graph(host: &Graph, h: &Pattern) -> Result<CopyHypergraph> {
        check_host(host.n())?;
        Self::copies_in(host, h, host.n())
    }

    fn copies_in(host: &Graph, h: &Pattern, n: usize) -> Result<CopyHypergraph> {
        let pattern_edges = h.graph().edges();
        let mut seen: HashSet<u128> = HashSet::new();
        if n >= h.v() {
            for_each_embedding(h.graph(), host, &mut |image| {
                let mask = pattern_edges
                    .iter()
                    .fold(0u128, |acc, &(a, b)| acc | pair_bit(image[a], image[b]));
                seen.insert(mask);
                Ok(())
            })?;
        }
        let mut members: Vec<u128> = seen.into_iter().collect();
        members.sort_unstable();
        Ok(CopyHypergraph { n, members })
    }

    /// The partial-copy hypergraph at `e`: every copy of `h` in `K_n`
    /// through `e`, with `e` removed from the member.
    pub fn partial(n: usize, h: &Pattern, e: (usize, usize)) -> Result<CopyHypergraph> {
        check_host(n)?;
        check_pair(n, e)?;
        let bit = pair_bit(e.0, e.1);
        let all = Self::copies(n, h)?;
        let members: Vec<u128> = all
            .members
            .iter()
            .filter(|&&m| m & bit != 0)
            .map(|&m| m & !bit)
            .collect();
        // Masks stay sorted and distinct: clearing a shared bit preserves
        // order and cannot collide two copies that both contain it.
        Ok(CopyHypergraph { n, members })
    }

    /// The members fully contained in the allowed pair set.
    pub fn restrict(&self, allowed: &PairSet) -> Result<CopyHypergraph> {
        if allowed.n() != self.n {
            return Err(Error::parameter(format!(
                "restriction pair set is over {} vertices, hypergraph over {}",
                allowed.n(),
                self.n
            )));
        }
        let mask = pair_set_mask(allowed);
        Ok(CopyHypergraph {
            n: self.n,
            members: self
                .members
                .iter()
                .copied()
                .filter(|&m| m & !mask == 0)
                .collect(),
        })
    }

    /// The members fully contained in the host graph's edge set.
    pub fn restrict_to_graph(&self, g: &Graph) -> Result<CopyHypergraph> {
        self.restrict(&g.pair_mask())
    }

    /// Union with another hypergraph over the same host, deduplicated.
    pub fn union(&self, other: &CopyHypergraph) -> Result<CopyHypergraph> {
        if self.n != other.n {
            return Err(Error::parameter(format!(
                "cannot union hypergraphs over {} and {} vertices",
                self.n, other.n
            )));
        }
        let mut members = self.members.clone();
        members.extend_from_slice(&other.members);
        members.sort_unstable();
        members.dedup();
        Ok(CopyHypergraph { n: self.n, members })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Member edge masks, ascending.
    pub fn members(&self) -> &[u128] {
        &self.members
    }

    /// The pairs of one member, colexicographically.
    pub fn member_pairs(&self, idx: usize) -> Vec<(usize, usize)> {
        let mut mask = self.members[idx];
        let mut out = Vec::new();
        while mask != 0 {
            let bit = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            out.push(pair_from_index(bit));
        }
        out
    }

    /// First-moment sum: `sum over members A of p^|A|`.
    pub fn janson_mu(&self, p: f64) -> Result<f64> {
        check_probability(p)?;
        Ok(self
            .members
            .iter()
            .map(|&m| p.powi(m.count_ones() as i32))
            .sum())
    }

    /// Second-moment overlap sum: `sum over unordered pairs of distinct
    /// intersecting members {A,B} of p^|A ∪ B|`.
    pub fn janson_delta(&self, p: f64) -> Result<f64> {
        check_probability(p)?;
        let mut total = 0.0f64;
        for (i, &a) in self.members.iter().enumerate() {
            for &b in &self.members[i + 1..] {
                if a & b != 0 {
                    total += p.powi((a | b).count_ones() as i32);
                }
            }
        }
        Ok(total)
    }
}

/// Greedy packing of pairwise-disjoint members; its size lower-bounds the
/// minimum hitting set, because disjoint members need distinct hits.
fn packing_lower_bound(members: &[u128]) -> usize {
    let mut taken = 0u128;
    let mut count = 0usize;
    for &m in members {
        if m & taken == 0 {
            taken |= m;
            count += 1;
        }
    }
    count
}

/// Index of an uncovered member with the fewest remaining edges.
fn fewest_edge_member(members: &[u128]) -> usize {
    let mut best = 0usize;
    let mut best_bits = u32::MAX;
    for (i, &m) in members.iter().enumerate() {
        let bits = m.count_ones();
        if bits < best_bits {
            best = i;
            best_bits = bits;
        }
    }
    best
}

fn branch_minimum(members: &[u128], chosen: usize, best: &mut usize) {
    if members.is_empty() {
        *best = (*best).min(chosen);
        return;
    }
    if chosen + packing_lower_bound(members) >= *best {
        return;
    }
    let mut pivot = members[fewest_edge_member(members)];
    while pivot != 0 {
        let bit = pivot & pivot.wrapping_neg();
        pivot &= pivot - 1;
        let remaining: Vec<u128> = members.iter().copied().filter(|&m| m & bit == 0).collect();
        branch_minimum(&remaining, chosen + 1, best);
    }
}

fn branch_collect(
    members: &[u128],
    chosen_mask: u128,
    chosen: usize,
    target: usize,
    out: &mut HashSet<u128>,
) {
    if members.is_empty() {
        if chosen == target {
            out.insert(chosen_mask);
        }
        return;
    }
    if chosen + packing_lower_bound(members) > target {
        return;
    }
    let mut pivot = members[fewest_edge_member(members)];
    while pivot != 0 {
        let bit = pivot & pivot.wrapping_neg();
        pivot &= pivot - 1;
        let remaining: Vec<u128> = members.iter().copied().filter(|&m| m & bit == 0).collect();
        branch_collect(&remaining, chosen_mask | bit, chosen + 1, target, out);
    }
}

fn mask_to_edge_set(mut mask: u128) -> Result<EdgeSet> {
    let mut pairs = Vec::new();
    while mask != 0 {
        let bit = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        pairs.push(pair_from_index(bit));
    }
    EdgeSet::from_pairs(pairs)
}

/// Exact maximum edge count of an `H`-free subgraph of `G`, together with
/// every maximum witness as a labelled edge set (no isomorphism
/// deduplication), ordered by edge-mask value.
///
/// Solved as a minimum hitting set over the copies of `H` inside `G`: a
/// subgraph is `H`-free exactly when its complement within `G` meets every
/// copy.  A second bounded search at the optimum collects all witnesses.
pub fn max_h_free_subgraph(g: &Graph, h: &Pattern) -> Result<(usize, Vec<EdgeSet>)> {
    check_host(g.n())?;
    let hg = CopyHypergraph::copies_in_graph(g, h)?;
    let g_mask = pair_set_mask(&g.pair_mask());
    if hg.is_empty() {
        return Ok((g.m(), vec![EdgeSet::from_pair_set(&g.pair_mask())]));
    }
    let mut best = usize::MAX;
    branch_minimum(&hg.members, 0, &mut best);
    let mut hitting_sets = HashSet::new();
    branch_collect(&hg.members, 0, 0, best, &mut hitting_sets);
    let mut witness_masks: Vec<u128> = hitting_sets.into_iter().map(|s| g_mask & !s).collect();
    witness_masks.sort_unstable();
    let witnesses = witness_masks
        .into_iter()
        .map(mask_to_edge_set)
        .collect::<Result<Vec<_>>>()?;
    Ok((g.m() - best, witnesses))
}

/// True when every maximum `H`-free subgraph of `G` is
/// `(chi(H)-1)`-colourable.
pub fn is_h_simonovits(g: &Graph, h: &Pattern) -> Result<bool> {
    let (_, witnesses) = max_h_free_subgraph(g, h)?;
    let limit = h.chi() - 1;
    for w in &witnesses {
        let sub = Graph::from_edges(g.n(), &w.iter().collect::<Vec<_>>())?;
        if chromatic_number(&sub) > limit {
            return Ok(false);
        }
    }
    Ok(true)
}

fn copies_in_host(h: &Pattern, host: &Graph) -> Result<u64> {
    let embeddings = count_embeddings(h.graph(), host)?;
    let aut = automorphism_count(h.graph())?;
    if embeddings % aut != 0 {
        return Err(Error::contract(
            "embedding count not divisible by the automorphism count",
        ));
    }
    Ok(embeddings / aut)
}

/// Number of copies of `h` through the pair `e` whose remaining edges all
/// lie in `a` — the size of the partial-copy hypergraph at `e` restricted
/// to `a`.  Works on hosts beyond the bitmask cap by counting embeddings
/// into `a ∪ {e}` and subtracting those avoiding `e`.
pub fn partial_copy_count(h: &Pattern, e: (usize, usize), a: &PairSet) -> Result<u64> {
    let n = a.n();
    check_pair(n, e)?;
    let mut with_pairs: Vec<(usize, usize)> = a.iter().collect();
    let without_pairs: Vec<(usize, usize)> = with_pairs
        .iter()
        .copied()
        .filter(|&(u, v)| (u, v) != (e.0.min(e.1), e.0.max(e.1)))
        .collect();
    if without_pairs.len() == with_pairs.len() {
        with_pairs.push((e.0.min(e.1), e.0.max(e.1)));
    }
    let with_e = copies_in_host(h, &Graph::from_edges(n, &with_pairs)?)?;
    let without_e = copies_in_host(h, &Graph::from_edges(n, &without_pairs)?)?;
    Ok(with_e - without_e)
}

/// Exact `Delta_p` of the union of the partial-copy hypergraphs at two
/// distinct pairs, together with the squared first-moment scale
/// `(n^(v_H - 2) p^(e_H - 1))^2`.
pub fn delta_bound_check(
    h: &Pattern,
    e: (usize, usize),
    f: (usize, usize),
    n: usize,
    p: f64,
) -> Result<(f64, f64)> {
    check_host(n)?;
    check_pair(n, e)?;
    check_pair(n, f)?;
    check_probability(p)?;
    if (e.0.min(e.1), e.0.max(e.1)) == (f.0.min(f.1), f.0.max(f.1)) {
        return Err(Error::parameter(
            "the two designated pairs must be distinct",
        ));
    }
    let union = CopyHypergraph::partial(n, h, e)?.union(&CopyHypergraph::partial(n, h, f)?)?;
    let lhs = union.janson_delta(p)?;
    let scale = ((n as f64).powi(h.v() as i32 - 2) * p.powi(h.e() as i32 - 1)).powi(2);
    Ok((lhs, scale))
}

/// The shared context of the per-edge core event: the core's internal
/// pairs and the external-or-outside pairs restricted to the graph.
struct CoreEventContext {
    int: EdgeSet,
    ext_star_in_g: PairSet,
}

fn core_event_context(g: &Graph, r: usize, alpha: f64) -> Result<Option<CoreEventContext>> {
    check_alpha(alpha)?;
    let eq = equivalence(g, r, 0)?;
    let Some(core) = &eq.core else {
        return Ok(None);
    };
    if !core_class_condition(core, g.n(), r, alpha) {
        return Ok(None);
    }
    let parts = edge_partition(core, g.n())?;
    let mut ext_star_in_g = parts.ext_star.to_pair_set(g.n())?;
    ext_star_in_g.intersect_with(&g.pair_mask());
    Ok(Some(CoreEventContext {
        int: parts.int,
        ext_star_in_g,
    }))
}

fn y_event_in_context(
    ctx: &CoreEventContext,
    g: &Graph,
    h: &Pattern,
    e: (usize, usize),
) -> Result<bool> {
    if !g.has_edge(e.0, e.1) || !ctx.int.contains(e.0, e.1) {
        return Ok(false);
    }
    Ok(partial_copy_count(h, e, &ctx.ext_star_in_g)? == 0)
}

/// The per-edge core event: the graph lies in the core class at deficit 0
/// and tolerance `alpha` for `r = chi(H)-1`, the pair `e` is a graph edge
/// internal to the core, and no copy of `H` completes through `e` using
/// only graph pairs external to (or outside) the core.
pub fn y_event_check(g: &Graph, h: &Pattern, e: (usize, usize), alpha: f64) -> Result<bool> {
    check_pair(g.n(), e)?;
    let r = h.chi() - 1;
    match core_event_context(g, r, alpha)? {
        None => Ok(false),
        Some(ctx) => y_event_in_context(&ctx, g, h, e),
    }
}

/// Number of graph edges whose per-edge core event holds, with the core
/// computed once.
pub fn count_y_edges(g: &Graph, h: &Pattern, alpha: f64) -> Result<u64> {
    let r = h.chi() - 1;
    let Some(ctx) = core_event_context(g, r, alpha)? else {
        return Ok(0);
    };
    let mut count = 0u64;
    for e in g.edges() {
        if y_event_in_context(&ctx, g, h, e)? {
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests;
