//! Pair equivalence structure of the near-maximum cut family.
//!
//! Two vertices are *equivalent at deficit `d`* when every cut into at most
//! `r` parts whose deficit is at most `d` places them in the same part.
//! This relation is transitive (agreement in every cut composes), so it
//! partitions the vertex set into *components*.  The *core* is the set of
//! the `r` largest components when each of them is strictly larger than
//! `n/(r+1)`; the tail count `x_r` is the number of vertices outside the
//! core, or `n` when no core exists.
//!
//! Deficit `-1` is a degenerate but useful convention: the relation is then
//! read off a single distinguished maximum cut (the lexicographically least
//! canonical one) instead of the whole family.
//!
//! Because every edge lies inside a connected component of the graph, cut
//! sizes and deficits add across components, and parts can be relabelled
//! independently per component; a pair spanning two graph components is
//! therefore always separated, and a pair inside one component is equivalent
//! exactly when it is equivalent within that component at the same deficit.
//! The computation exploits this and enumerates per component.

use serde::Serialize;

use crate::budget::WorkBudget;
use crate::cuts::{self, canonical_max_cut_budgeted};
use crate::error::{Error, Result};
use crate::graph::{EdgeSet, Graph};
use crate::pairs::{pair_count, PairSet};

/// The equivalence structure of a graph at one deficit level.
#[derive(Clone, Debug, Serialize)]
pub struct EquivStructure {
    /// Part bound of the underlying cuts.
    pub r: usize,
    /// Deficit level; `-1` means "relative to the distinguished maximum cut".
    pub d: i64,
    /// The equivalent vertex pairs.
    #[serde(skip)]
    pub pairs: PairSet,
    /// Equivalence classes, each sorted, ordered by smallest member.
    pub components: Vec<Vec<usize>>,
    /// The `r` largest components when each is strictly larger than
    /// `n/(r+1)`; `None` otherwise.  Ordered by size descending, ties by
    /// smallest member.
    pub core: Option<Vec<Vec<usize>>>,
    /// Number of vertices outside the core; `n` when there is no core.
    pub x_r: usize,
}

impl EquivStructure {
    /// Number of equivalent pairs.
    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    /// Vertex count of the underlying graph.
    pub fn n(&self) -> usize {
        self.components.iter().map(|c| c.len()).sum()
    }

    /// Largest part size over the components, 0 for the empty graph.
    pub fn max_component_size(&self) -> usize {
        self.components.iter().map(|c| c.len()).max().unwrap_or(0)
    }
}

/// Builds the full structure (classes, core, tail count) from the set of
/// equivalent pairs.
pub(crate) fn structure_from_pairs(n: usize, r: usize, d: i64, pairs: PairSet) -> EquivStructure {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for (u, v) in pairs.iter() {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru.max(rv)] = ru.min(rv);
        }
    }
    let mut slot = vec![usize::MAX; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        let root = find(&mut parent, v);
        if slot[root] == usize::MAX {
            slot[root] = components.len();
            components.push(Vec::new());
        }
        components[slot[root]].push(v);
    }

    let mut by_size: Vec<usize> = (0..components.len()).collect();
    by_size.sort_by_key(|&i| (std::cmp::Reverse(components[i].len()), components[i][0]));
    let core = if components.len() >= r
        && by_size[..r]
            .iter()
            .all(|&i| components[i].len() * (r + 1) > n)
    {
        Some(
            by_size[..r]
                .iter()
                .map(|&i| components[i].clone())
                .collect::<Vec<_>>(),
        )
    } else {
        None
    };
    let x_r = match &core {
        Some(classes) => n - classes.iter().map(|c| c.len()).sum::<usize>(),
        None => n,
    };
    EquivStructure {
        r,
        d,
        pairs,
        components,
        core,
        x_r,
    }
}

fn check_d(d: i64) -> Result<()> {
    if d < -1 {
        return Err(Error::parameter(format!(
            "deficit level {d} not supported; use -1 or a non-negative value"
        )));
    }
    Ok(())
}

/// Set of pairs separated by no cut of deficit at most `d >= 0`, computed
/// per connected component.
fn equivalent_pairs(g: &Graph, r: usize, d: usize, budget: &mut WorkBudget) -> Result<PairSet> {
    let n = g.n();
    let mut eq = PairSet::empty(n);
    for comp in g.components() {
        if comp.count_ones() < 2 {
            continue;
        }
        let (sub, map) = g.induced(comp)?;
        let nc = sub.n();
        let mut sep = PairSet::empty(nc);
        cuts::scan_cuts(&sub, r, d, budget, &mut |assign: &[u8], _size: usize| {
            for v in 1..nc {
                for u in 0..v {
                    if assign[u] != assign[v] {
                        sep.insert(u, v);
                    }
                }
            }
            Ok(())
        })?;
        for v in 1..nc {
            for u in 0..v {
                if !sep.contains(u, v) {
                    let (a, b) = (map[u], map[v]);
                    eq.insert(a.min(b), a.max(b));
                }
            }
        }
    }
    Ok(eq)
}

/// The equivalence structure of `g` at deficit `d` for cuts into at most `r`
/// parts.  `d = -1` uses the distinguished maximum cut alone.
pub fn equivalence(g: &Graph, r: usize, d: i64) -> Result<EquivStructure> {
    equivalence_budgeted(g, r, d, &mut WorkBudget::default())
}

/// [`equivalence`] with an explicit work budget.
pub fn equivalence_budgeted(
    g: &Graph,
    r: usize,
    d: i64,
    budget: &mut WorkBudget,
) -> Result<EquivStructure> {
    check_d(d)?;
    cuts::check_r(r)?;
    let pairs = if d == -1 {
        let cut = canonical_max_cut_budgeted(g, r, budget)?;
        cut.separated_pairs().complement()
    } else {
        equivalent_pairs(g, r, d as usize, budget)?
    };
    Ok(structure_from_pairs(g.n(), r, d, pairs))
}

/// Equivalence structures for every deficit `0..=dmax` from one enumeration
/// of the whole graph.
pub fn equivalence_profile(g: &Graph, r: usize, dmax: usize) -> Result<Vec<EquivStructure>> {
    equivalence_profile_budgeted(g, r, dmax, &mut WorkBudget::default())
}

/// [`equivalence_profile`] with an explicit work budget.
pub fn equivalence_profile_budgeted(
    g: &Graph,
    r: usize,
    dmax: usize,
    budget: &mut WorkBudget,
) -> Result<Vec<EquivStructure>> {
    let n = g.n();
    if n == 0 {
        return Ok((0..=dmax)
            .map(|d| structure_from_pairs(0, r, d as i64, PairSet::empty(0)))
            .collect());
    }
    let b = cuts::max_cut_size_budgeted(g, r, budget)?;
    let threshold = b.saturating_sub(dmax);
    let mut sep_at: Vec<PairSet> = vec![PairSet::empty(n); dmax + 1];
    cuts::enumerate_above(
        g,
        r,
        threshold,
        budget,
        &mut |assign: &[u8], size: usize| {
            let deficit = b - size;
            let bucket = &mut sep_at[deficit];
            for v in 1..n {
                for u in 0..v {
                    if assign[u] != assign[v] {
                        bucket.insert(u, v);
                    }
                }
            }
            Ok(())
        },
    )?;
    let mut out = Vec::with_capacity(dmax + 1);
    let mut acc = PairSet::empty(n);
    for (d, sep) in sep_at.iter().enumerate() {
        acc.union_with(sep);
        out.push(structure_from_pairs(n, r, d as i64, acc.complement()));
    }
    Ok(out)
}

/// Whether at least a `(1-eps)/r` fraction of all vertex pairs is
/// equivalent at deficit `d`.
pub fn is_rigid(g: &Graph, r: usize, d: i64, eps: f64) -> Result<bool> {
    is_rigid_budgeted(g, r, d, eps, &mut WorkBudget::default())
}

/// [`is_rigid`] with an explicit work budget.
pub fn is_rigid_budgeted(
    g: &Graph,
    r: usize,
    d: i64,
    eps: f64,
    budget: &mut WorkBudget,
) -> Result<bool> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::parameter(format!(
            "rigidity margin eps={eps} outside (0,1)"
        )));
    }
    let s = equivalence_budgeted(g, r, d, budget)?;
    Ok((s.pair_count() * r) as f64 >= (1.0 - eps) * pair_count(g.n()) as f64)
}

/// Validates the imbalance tolerance `alpha ∈ [0,1)`.
pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::parameter(format!(
            "imbalance tolerance alpha={alpha} outside [0,1)"
        )));
    }
    Ok(())
}

/// The core-class size condition: every core component holds at least
/// `n/r - alpha*n` vertices.
pub(crate) fn core_class_condition(core: &[Vec<usize>], n: usize, r: usize, alpha: f64) -> bool {
    let n = n as f64;
    core.iter()
        .all(|c| c.len() as f64 >= n / r as f64 - alpha * n)
}

impl EquivStructure {
    /// Whether this structure has a core whose components all have at least
    /// `n/r - alpha*n` vertices.
    pub fn in_core_class(&self, alpha: f64) -> Result<bool> {
        check_alpha(alpha)?;
        Ok(match &self.core {
            None => false,
            Some(classes) => core_class_condition(classes, self.n(), self.r, alpha),
        })
    }
}

/// Whether the core exists at deficit `d` and every core component has at
/// least `n/r - alpha*n` vertices.
pub fn in_core_class(g: &Graph, r: usize, d: i64, alpha: f64) -> Result<bool> {
    in_core_class_budgeted(g, r, d, alpha, &mut WorkBudget::default())
}

/// [`in_core_class`] with an explicit work budget.
pub fn in_core_class_budgeted(
    g: &Graph,
    r: usize,
    d: i64,
    alpha: f64,
    budget: &mut WorkBudget,
) -> Result<bool> {
    check_alpha(alpha)?;
    let s = equivalence_budgeted(g, r, d, budget)?;
    Ok(match &s.core {
        None => false,
        Some(classes) => core_class_condition(classes, g.n(), r, alpha),
    })
}

/// Whether the core at deficit `d + |T|` of `g` refines the core at deficit
/// `d` of `g` with the pair set `T` toggled: every core component of the
/// former must be contained in a core component of the latter.
///
/// Requires `g` to have a core at deficit `d + |T|`.
pub fn core_refines(g: &Graph, t: &EdgeSet, r: usize, d: usize) -> Result<bool> {
    let deeper = d + t.len();
    let before = equivalence(g, r, deeper as i64)?;
    let Some(core_before) = &before.core else {
        return Err(Error::contract(format!(
            "core_refines requires a core at deficit {deeper} before toggling"
        )));
    };
    let flipped = g.symmetric_difference(t)?;
    let after = equivalence(&flipped, r, d as i64)?;
    let Some(core_after) = &after.core else {
        return Ok(false);
    };
    let after_masks: Vec<u64> = core_after.iter().map(|c| vertex_mask(c)).collect();
    Ok(core_before.iter().all(|c| {
        let m = vertex_mask(c);
        after_masks.iter().any(|&am| m & !am == 0)
    }))
}

fn vertex_mask(vertices: &[usize]) -> u64 {
    vertices.iter().fold(0u64, |acc, &v| acc | (1u64 << v))
}

/// Vertices `v` whose neighbour count inside their own part of the
/// distinguished maximum cut is large: `r*deg_in(v) >= deg(v) - (r-1)*d`.
/// Such vertices belong to no equivalence class of size two or more at
/// deficit `d`.
pub fn non_rigidity_witnesses(g: &Graph, r: usize, d: usize) -> Result<Vec<usize>> {
    let cut = cuts::canonical_max_cut(g, r)?;
    let masks = cut.part_masks();
    let mut witnesses = Vec::new();
    for v in 0..g.n() {
        let own = masks[cut.part_of(v) as usize];
        let deg_in = (g.neighbours(v) & own).count_ones() as i64;
        let deg = g.degree(v) as i64;
        if r as i64 * deg_in >= deg - (r as i64 - 1) * d as i64 {
            witnesses.push(v);
        }
    }
    Ok(witnesses)
}

/// Number of vertices outside the core at deficit 0, i.e. `x_r(G)`.
pub fn x_r(g: &Graph, r: usize) -> Result<usize> {
    Ok(equivalence(g, r, 0)?.x_r)
}

/// Reference implementation of [`equivalence`] over the naive cut
/// enumeration; used for cross-checking.
pub fn equivalence_naive(g: &Graph, r: usize, d: i64) -> Result<EquivStructure> {
    check_d(d)?;
    let n = g.n();
    let pairs = if d == -1 {
        let family = cuts::naive::enumerate_cuts(g, r, 0)?;
        // The family is sorted by assignment, so its first cut is the
        // distinguished (lexicographically least) maximum cut.
        family.cuts()[0].separated_pairs().complement()
    } else {
        let family = cuts::naive::enumerate_cuts(g, r, d as usize)?;
        let mut sep = PairSet::empty(n);
        for cut in family.iter() {
            sep.union_with(&cut.separated_pairs());
        }
        sep.complement()
    };
    Ok(structure_from_pairs(n, r, d, pairs))
}
