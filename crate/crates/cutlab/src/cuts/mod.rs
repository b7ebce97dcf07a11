//! Exact multiway max-cut machinery.
//!
//! A *cut* of a graph into at most `r` parts is an assignment of every vertex
//! to one of the parts `0..r`; its *size* is the number of edges whose
//! endpoints land in different parts.  `b_r(G)` denotes the maximum size over
//! all such assignments, and the *deficit* of a cut is `b_r(G)` minus its
//! size.  This module finds maximum cuts, enumerates all cuts within a given
//! deficit of the maximum, and derives edge classifications (critical edges,
//! interior/exterior pair partitions, unbalance certificates) from them.
//!
//! Two exact engines back the public operations: a branch-and-bound search
//! over canonical part assignments ([`bnb`]) and a Gray-code sweep for
//! two-part cuts on small graphs ([`sweep`]).  A deliberately simple
//! reference implementation lives in [`naive`] for cross-checking.

use serde::Serialize;

use crate::budget::{WorkBudget, MAX_MATERIALIZED_CUTS};
use crate::error::{Error, Result};
use crate::graph::{EdgeSet, Graph};
use crate::pairs::{pair_count, PairSet};

pub(crate) mod bnb;
pub mod naive;
pub(crate) mod sweep;

/// Maximum number of parts an assignment may use.
pub const MAX_PARTS: usize = 16;

/// Largest vertex count for which the two-part Gray-code sweep is preferred
/// over branch-and-bound.
pub(crate) const SWEEP_MAX_N: usize = 26;

pub(crate) fn check_r(r: usize) -> Result<()> {
    if !(2..=MAX_PARTS).contains(&r) {
        return Err(Error::parameter(format!(
            "part count r={r} out of supported range 2..={MAX_PARTS}"
        )));
    }
    Ok(())
}

/// Rewrites `assign` in place so that part labels appear in first-use order:
/// the first vertex gets part 0, and each later vertex uses either an
/// already-seen label's image or the next unused label.
pub(crate) fn canonicalize_assignment(assign: &mut [u8]) {
    let mut map = [u8::MAX; MAX_PARTS];
    let mut next = 0u8;
    for a in assign.iter_mut() {
        let slot = &mut map[*a as usize];
        if *slot == u8::MAX {
            *slot = next;
            next += 1;
        }
        *a = *slot;
    }
}

/// Number of edges of `g` whose endpoints receive different labels.
pub(crate) fn assignment_cut_size(g: &Graph, assign: &[u8]) -> usize {
    let mut part_mask = [0u64; MAX_PARTS];
    for (v, &a) in assign.iter().enumerate() {
        part_mask[a as usize] |= 1u64 << v;
    }
    let mut intra = 0usize;
    for mask in part_mask {
        if mask == 0 {
            continue;
        }
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            intra += (g.neighbours(v) & rest).count_ones() as usize;
        }
    }
    g.m() - intra
}

/// A single cut: a canonical part assignment together with its size and its
/// deficit relative to the maximum cut size of the graph it was computed for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cut {
    #[serde(skip)]
    r: usize,
    assign: Vec<u8>,
    size: usize,
    deficit: usize,
}

impl Cut {
    pub(crate) fn new(r: usize, assign: Vec<u8>, size: usize, deficit: usize) -> Self {
        debug_assert!(assign.iter().all(|&a| (a as usize) < r));
        Cut {
            r,
            assign,
            size,
            deficit,
        }
    }

    /// Upper bound on the number of parts this cut may use.
    pub fn r(&self) -> usize {
        self.r
    }

    /// Part label of each vertex, in vertex order.  Labels are canonical:
    /// they appear in first-use order starting from 0.
    pub fn assignment(&self) -> &[u8] {
        &self.assign
    }

    /// Number of vertices the cut assigns.
    pub fn n(&self) -> usize {
        self.assign.len()
    }

    /// Number of edges crossing between distinct parts.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Distance from the maximum cut size: `b_r(G) - size`.
    pub fn deficit(&self) -> usize {
        self.deficit
    }

    /// Part label of vertex `v`.
    pub fn part_of(&self, v: usize) -> u8 {
        self.assign[v]
    }

    /// Vertex bitmask of each non-empty part, in label order.
    pub fn part_masks(&self) -> Vec<u64> {
        let mut masks = [0u64; MAX_PARTS];
        let mut used = 0usize;
        for (v, &a) in self.assign.iter().enumerate() {
            masks[a as usize] |= 1u64 << v;
            used = used.max(a as usize + 1);
        }
        masks[..used].to_vec()
    }

    /// Sizes of the non-empty parts, in label order.
    pub fn part_sizes(&self) -> Vec<usize> {
        self.part_masks()
            .iter()
            .map(|m| m.count_ones() as usize)
            .collect()
    }

    /// Number of vertex pairs whose endpoints lie in different parts,
    /// counted over all pairs of `[n]`, not only edges.
    pub fn separated_pair_count(&self) -> usize {
        let n = self.assign.len();
        let intra: usize = self.part_sizes().iter().map(|&s| pair_count(s)).sum();
        pair_count(n) - intra
    }

    /// All separated vertex pairs as a pair set over `[n]`.
    pub fn separated_pairs(&self) -> PairSet {
        let n = self.assign.len();
        let mut set = PairSet::empty(n);
        for v in 1..n {
            for u in 0..v {
                if self.assign[u] != self.assign[v] {
                    set.insert(u, v);
                }
            }
        }
        set
    }
}

/// The family of all cuts of one graph with deficit at most `d`, sorted by
/// assignment lexicographically.
#[derive(Clone, Debug)]
pub struct CutFamily {
    graph_hash: u64,
    r: usize,
    d: usize,
    max_size: usize,
    cuts: Vec<Cut>,
}

impl CutFamily {
    /// Content hash of the graph the family was computed from.
    pub fn graph_hash(&self) -> u64 {
        self.graph_hash
    }

    /// Part bound the cuts were computed for.
    pub fn r(&self) -> usize {
        self.r
    }

    /// Deficit threshold of the family.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Maximum cut size `b_r(G)` of the underlying graph.
    pub fn max_size(&self) -> usize {
        self.max_size
    }

    /// Number of cuts in the family.
    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    /// True when the family holds no cuts (never the case for valid input:
    /// a maximum cut always exists).
    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }

    /// The cuts, sorted by assignment lexicographically.
    pub fn cuts(&self) -> &[Cut] {
        &self.cuts
    }

    /// Iterate over the cuts in sorted order.
    pub fn iter(&self) -> std::slice::Iter<'_, Cut> {
        self.cuts.iter()
    }

    /// Serialize the family as JSON Lines, one cut object per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for cut in &self.cuts {
            out.push_str(&serde_json::to_string(cut).expect("cut serialization cannot fail"));
            out.push('\n');
        }
        out
    }
}

/// Streaming consumer of enumerated cuts.  Engines call [`CutSink::emit`]
/// once per canonical assignment meeting the size threshold.
pub(crate) trait CutSink {
    fn emit(&mut self, assign: &[u8], size: usize) -> Result<()>;
}

impl<F: FnMut(&[u8], usize) -> Result<()>> CutSink for F {
    fn emit(&mut self, assign: &[u8], size: usize) -> Result<()> {
        self(assign, size)
    }
}

/// Maximum size of a cut of `g` into at most `r` parts.
pub fn max_cut_size(g: &Graph, r: usize) -> Result<usize> {
    max_cut_size_budgeted(g, r, &mut WorkBudget::default())
}

/// [`max_cut_size`] with an explicit work budget.
pub fn max_cut_size_budgeted(g: &Graph, r: usize, budget: &mut WorkBudget) -> Result<usize> {
    check_r(r)?;
    find_max(g, r, budget)
}

pub(crate) fn find_max(g: &Graph, r: usize, budget: &mut WorkBudget) -> Result<usize> {
    let n = g.n();
    if n == 0 {
        return Ok(0);
    }
    if r == 2 && n <= SWEEP_MAX_N {
        sweep::max_cut_r2(g, budget)
    } else {
        bnb::max_cut(g, r, budget)
    }
}

/// Enumerates every canonical cut of `g` into at most `r` parts whose deficit
/// is at most `d`, sorted by assignment.
pub fn enumerate_cuts(g: &Graph, r: usize, d: usize) -> Result<CutFamily> {
    enumerate_cuts_budgeted(g, r, d, &mut WorkBudget::default())
}

/// [`enumerate_cuts`] with an explicit work budget.
pub fn enumerate_cuts_budgeted(
    g: &Graph,
    r: usize,
    d: usize,
    budget: &mut WorkBudget,
) -> Result<CutFamily> {
    check_r(r)?;
    let mut cuts: Vec<Cut> = Vec::new();
    let b = scan_cuts(g, r, d, budget, &mut |assign: &[u8], size: usize| {
        if cuts.len() >= MAX_MATERIALIZED_CUTS {
            return Err(Error::too_large(format!(
                "cut family exceeds the materialization cap of {MAX_MATERIALIZED_CUTS} cuts"
            )));
        }
        cuts.push(Cut::new(r, assign.to_vec(), size, 0));
        Ok(())
    })?;
    for cut in &mut cuts {
        cut.deficit = b - cut.size;
    }
    cuts.sort_unstable_by(|a, b| a.assign.cmp(&b.assign));
    Ok(CutFamily {
        graph_hash: g.content_hash(),
        r,
        d,
        max_size: b,
        cuts,
    })
}

/// Runs the preferred engine over all canonical cuts of size at least
/// `b_r(G) - d`, feeding each into `sink`, and returns `b_r(G)`.
pub(crate) fn scan_cuts(
    g: &Graph,
    r: usize,
    d: usize,
    budget: &mut WorkBudget,
    sink: &mut dyn CutSink,
) -> Result<usize> {
    let n = g.n();
    if n == 0 {
        sink.emit(&[], 0)?;
        return Ok(0);
    }
    let b = find_max(g, r, budget)?;
    let threshold = b.saturating_sub(d);
    enumerate_above(g, r, threshold, budget, sink)?;
    Ok(b)
}

/// Runs the preferred engine over all canonical cuts of size at least
/// `threshold`, feeding each into `sink`.
pub(crate) fn enumerate_above(
    g: &Graph,
    r: usize,
    threshold: usize,
    budget: &mut WorkBudget,
    sink: &mut dyn CutSink,
) -> Result<()> {
    if r == 2 && g.n() <= SWEEP_MAX_N {
        sweep::enumerate_r2(g, threshold, budget, sink)
    } else {
        bnb::enumerate(g, r, threshold, budget, sink)
    }
}

/// The lexicographically least canonical maximum cut of `g` into at most `r`
/// parts.  This is the distinguished cut used wherever a single maximum cut
/// must be chosen deterministically.
pub fn canonical_max_cut(g: &Graph, r: usize) -> Result<Cut> {
    canonical_max_cut_budgeted(g, r, &mut WorkBudget::default())
}

/// [`canonical_max_cut`] with an explicit work budget.
pub fn canonical_max_cut_budgeted(g: &Graph, r: usize, budget: &mut WorkBudget) -> Result<Cut> {
    check_r(r)?;
    if g.n() == 0 {
        return Ok(Cut::new(r, Vec::new(), 0, 0));
    }
    let b = find_max(g, r, budget)?;
    let assign = bnb::lexmin_max_cut(g, r, b, budget)?;
    Ok(Cut::new(r, assign, b, 0))
}

/// Builds a [`Cut`] from an explicit assignment, canonicalizing the labels
/// and computing size and deficit against `b_r(G)`.
pub fn cut_from_assignment(g: &Graph, r: usize, assign: &[u8]) -> Result<Cut> {
    check_r(r)?;
    if assign.len() != g.n() {
        return Err(Error::parameter(format!(
            "assignment covers {} vertices but the graph has {}",
            assign.len(),
            g.n()
        )));
    }
    if let Some(&bad) = assign.iter().find(|&&a| a as usize >= r) {
        return Err(Error::parameter(format!(
            "assignment uses part {bad} but only {r} parts are allowed"
        )));
    }
    let mut canon = assign.to_vec();
    canonicalize_assignment(&mut canon);
    let size = assignment_cut_size(g, &canon);
    let b = max_cut_size(g, r)?;
    Ok(Cut::new(r, canon, size, b - size))
}

/// Edges of `g` that cross between parts in *every* maximum cut into at most
/// `r` parts.  Removing such an edge necessarily lowers the maximum cut size.
pub fn critical_edges(g: &Graph, r: usize) -> Result<EdgeSet> {
    critical_edges_budgeted(g, r, &mut WorkBudget::default())
}

/// [`critical_edges`] with an explicit work budget.
pub fn critical_edges_budgeted(g: &Graph, r: usize, budget: &mut WorkBudget) -> Result<EdgeSet> {
    check_r(r)?;
    let n = g.n();
    if n == 0 {
        return Ok(EdgeSet::new());
    }
    let mut crossing_in_all = PairSet::full(n);
    scan_cuts(g, r, 0, budget, &mut |assign: &[u8], _size: usize| {
        let mut sep = PairSet::empty(n);
        for v in 1..n {
            for u in 0..v {
                if assign[u] != assign[v] {
                    sep.insert(u, v);
                }
            }
        }
        crossing_in_all.intersect_with(&sep);
        Ok(())
    })?;
    crossing_in_all.intersect_with(&g.pair_mask());
    Ok(EdgeSet::from_pair_set(&crossing_in_all))
}

/// Classification of the vertex pairs of `[n]` relative to a collection of
/// disjoint vertex sets: pairs inside one set, pairs between two distinct
/// sets, and everything that is not interior.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgePartition {
    /// Pairs with both endpoints in the same set.
    pub int: EdgeSet,
    /// Pairs with endpoints in two different sets of the collection.
    pub ext: EdgeSet,
    /// All pairs of `[n]` except the interior ones.
    pub ext_star: EdgeSet,
}

/// Partitions the vertex pairs of `[n]` relative to the disjoint sets `sets`.
pub fn edge_partition(sets: &[Vec<usize>], n: usize) -> Result<EdgePartition> {
    if n > crate::graph::MAX_VERTICES {
        return Err(Error::parameter(format!(
            "vertex count {n} exceeds the supported maximum of {}",
            crate::graph::MAX_VERTICES
        )));
    }
    let mut owner = vec![usize::MAX; n];
    for (i, set) in sets.iter().enumerate() {
        for &v in set {
            if v >= n {
                return Err(Error::parameter(format!(
                    "set element {v} outside vertex range 0..{n}"
                )));
            }
            if owner[v] != usize::MAX {
                return Err(Error::parameter(format!(
                    "vertex {v} appears in more than one set"
                )));
            }
            owner[v] = i;
        }
    }
    let mut int = PairSet::empty(n);
    let mut ext = PairSet::empty(n);
    for v in 1..n {
        for u in 0..v {
            if owner[u] == usize::MAX || owner[v] == usize::MAX {
                continue;
            }
            if owner[u] == owner[v] {
                int.insert(u, v);
            } else {
                ext.insert(u, v);
            }
        }
    }
    let ext_star = PairSet::full(n).minus(&int);
    Ok(EdgePartition {
        int: EdgeSet::from_pair_set(&int),
        ext: EdgeSet::from_pair_set(&ext),
        ext_star: EdgeSet::from_pair_set(&ext_star),
    })
}

/// Checks the unbalance inequality for a cut of `[n]`: with `a` the largest
/// part size and `eps = a/n - 1/r`, the number of separated vertex pairs must
/// satisfy
///
/// ```text
/// sep <= (1 - 1/r - r*eps^2/(r-1)) * C(n,2) + n/2 .
/// ```
///
/// The comparison is exact over integers.
pub fn unbalance_bound_check(cut: &Cut, n: usize) -> Result<bool> {
    if cut.n() != n {
        return Err(Error::parameter(format!(
            "cut assigns {} vertices but n={n} was given",
            cut.n()
        )));
    }
    if n == 0 {
        return Ok(true);
    }
    let r = cut.r() as i128;
    let n_i = n as i128;
    let a = *cut.part_sizes().iter().max().expect("non-empty cut") as i128;
    let sep = cut.separated_pair_count() as i128;
    let c = pair_count(n) as i128;
    // With eps = (r*a - n)/(r*n) we have r*eps^2/(r-1) = (ra-n)^2/((r-1)*r*n^2).
    // Scaling both sides by 2*r*(r-1)*n^2 clears every denominator, so the
    // comparison below is exact integer arithmetic.
    let lhs = sep * 2 * r * (r - 1) * n_i * n_i;
    let rhs = c * 2 * r * (r - 1) * n_i * n_i
        - c * 2 * (r - 1) * n_i * n_i
        - c * 2 * (r * a - n_i) * (r * a - n_i)
        + r * (r - 1) * n_i * n_i * n_i;
    Ok(lhs <= rhs)
}
