//! Branch-and-bound search over canonical part assignments.
//!
//! Vertices are branched in degree-descending order (static, fixed before the
//! search).  Part labels follow a restricted-growth discipline in branch
//! order — vertex `k` may use any already-opened label or the next unused one
//! — so every unordered partition into at most `r` parts is visited exactly
//! once.  Assignments are converted back to canonical first-use labelling in
//! vertex order when a leaf is emitted.
//!
//! The admissible bound at a node adds, to the value of the assigned prefix:
//!
//! * for each unassigned vertex, its assigned degree minus the smallest
//!   already-assigned neighbour count over all parts it could still take
//!   (zero while a part remains unopened),
//! * every edge between two unassigned vertices,
//! * minus, for two parts, one edge per non-bipartite component of the
//!   unassigned remainder, since such a component can never have all its
//!   internal edges cut.
//!
//! The per-vertex terms are maintained incrementally as two running sums so
//! that evaluating the bound is O(1) per child.

use crate::budget::WorkBudget;
use crate::error::Result;
use crate::graph::Graph;

use super::{canonicalize_assignment, CutSink, MAX_PARTS};

/// Static branch order: degree descending, ties by vertex index.
fn branch_order(g: &Graph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    order
}

/// Relabels `g` so that vertex `k` of the result is `order[k]` of the input.
fn relabel(g: &Graph, order: &[usize]) -> Graph {
    let mut pos = vec![0usize; g.n()];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k;
    }
    let edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (pos[u], pos[v]);
            (a.min(b), a.max(b))
        })
        .collect();
    Graph::from_edges(g.n(), &edges).expect("relabelling preserves validity")
}

fn suffix_mask(n: usize, k: usize) -> u64 {
    if k >= n {
        return 0;
    }
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    all & !((1u64 << k) - 1)
}

/// Number of edges induced on `{k..n-1}` for every `k`.
fn suffix_edge_counts(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut counts = vec![0usize; n + 1];
    for k in (0..n).rev() {
        let later = g.neighbours(k) & suffix_mask(n, k + 1);
        counts[k] = counts[k + 1] + later.count_ones() as usize;
    }
    counts
}

/// Number of non-bipartite connected components induced on `{k..n-1}`,
/// for every `k`.  Used only for two-part cuts.
fn suffix_odd_components(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut counts = vec![0usize; n + 1];
    for (k, count) in counts.iter_mut().enumerate().take(n) {
        let mask = suffix_mask(n, k);
        let mut seen = 0u64;
        let mut odd = 0usize;
        for s in k..n {
            let bit = 1u64 << s;
            if seen & bit != 0 {
                continue;
            }
            // BFS two-colouring of the component of s within the suffix; a
            // same-side neighbour proves the component is not bipartite.
            let mut side0 = bit;
            let mut side1 = 0u64;
            let mut frontier = bit;
            let mut bipartite = true;
            while frontier != 0 {
                let mut next = 0u64;
                let mut f = frontier;
                while f != 0 {
                    let v = f.trailing_zeros() as usize;
                    f &= f - 1;
                    let nb = g.neighbours(v) & mask;
                    let on_side0 = side0 & (1u64 << v) != 0;
                    let same = if on_side0 { side0 } else { side1 };
                    if nb & same != 0 {
                        bipartite = false;
                    }
                    let fresh = nb & !(side0 | side1);
                    if on_side0 {
                        side1 |= fresh;
                    } else {
                        side0 |= fresh;
                    }
                    next |= fresh;
                }
                frontier = next;
            }
            seen |= side0 | side1;
            if !bipartite {
                odd += 1;
            }
        }
        *count = odd;
    }
    counts
}

enum Mode<'a> {
    /// Track the best leaf value; prune subtrees that cannot beat it.
    Maximize,
    /// Emit every leaf with value at least the threshold.
    Enumerate {
        threshold: usize,
        sink: &'a mut dyn CutSink,
    },
    /// Stop at the first leaf with value at least the target, scanning parts
    /// in ascending label order over the identity branch order.
    LexMin { target: usize },
}

struct Searcher<'a, 'g> {
    rg: Graph,
    order: Vec<usize>,
    n: usize,
    r: usize,
    mode: Mode<'a>,
    e_suffix: Vec<usize>,
    odd_suffix: Vec<usize>,
    /// cnt[v][p]: already-assigned neighbours of v placed in part p.
    cnt: Vec<[u16; MAX_PARTS]>,
    /// Assigned degree of each vertex (row sum of `cnt`).
    adeg: Vec<u16>,
    /// Sum of `adeg[u]` over unassigned u.
    open_sum: usize,
    /// Sum of `adeg[u] - min_p cnt[u][p]` over unassigned u, min over all r parts.
    tight_sum: usize,
    assign: Vec<u8>,
    scratch: Vec<u8>,
    best: usize,
    found: bool,
    original: &'g Graph,
}

impl<'a, 'g> Searcher<'a, 'g> {
    fn new(g: &'g Graph, r: usize, mode: Mode<'a>, identity_order: bool) -> Self {
        let n = g.n();
        let order: Vec<usize> = if identity_order {
            (0..n).collect()
        } else {
            branch_order(g)
        };
        let rg = relabel(g, &order);
        let e_suffix = suffix_edge_counts(&rg);
        let odd_suffix = if r == 2 {
            suffix_odd_components(&rg)
        } else {
            vec![0; n + 1]
        };
        Searcher {
            rg,
            order,
            n,
            r,
            mode,
            e_suffix,
            odd_suffix,
            cnt: vec![[0u16; MAX_PARTS]; n],
            adeg: vec![0u16; n],
            open_sum: 0,
            tight_sum: 0,
            assign: vec![0u8; n],
            scratch: vec![0u8; n],
            best: 0,
            found: false,
            original: g,
        }
    }

    /// Value of the greedy assignment in branch order: each vertex takes the
    /// allowed part with the fewest already-assigned neighbours.  Seeds the
    /// incumbent for maximization.
    fn greedy_value(&self) -> usize {
        let mut cnt = vec![[0u16; MAX_PARTS]; self.n];
        let mut used = 0usize;
        let mut value = 0usize;
        for v in 0..self.n {
            let avail = (used + 1).min(self.r);
            let earlier = (self.rg.neighbours(v) & !suffix_mask(self.n, v)).count_ones() as u16;
            let mut best_p = 0usize;
            let mut best_gain = earlier - cnt[v][0];
            for (p, &c) in cnt[v].iter().enumerate().take(avail).skip(1) {
                let gain = earlier - c;
                if gain > best_gain {
                    best_gain = gain;
                    best_p = p;
                }
            }
            used = used.max(best_p + 1);
            value += best_gain as usize;
            let mut later = self.rg.neighbours(v) & suffix_mask(self.n, v + 1);
            while later != 0 {
                let u = later.trailing_zeros() as usize;
                later &= later - 1;
                cnt[u][best_p] += 1;
            }
        }
        value
    }

    fn min_cnt(&self, u: usize) -> u16 {
        *self.cnt[u][..self.r].iter().min().expect("r >= 2")
    }

    /// Assigns vertex `v` (the current depth) to part `p`, updating neighbour
    /// counters and the two pending sums.
    fn apply(&mut self, v: usize, p: u8) {
        self.assign[v] = p;
        self.open_sum -= self.adeg[v] as usize;
        self.tight_sum -= (self.adeg[v] - self.min_cnt(v)) as usize;
        let mut later = self.rg.neighbours(v) & suffix_mask(self.n, v + 1);
        while later != 0 {
            let u = later.trailing_zeros() as usize;
            later &= later - 1;
            let old_min = self.min_cnt(u);
            self.cnt[u][p as usize] += 1;
            self.adeg[u] += 1;
            let new_min = self.min_cnt(u);
            self.open_sum += 1;
            self.tight_sum += 1 + old_min as usize - new_min as usize;
        }
    }

    fn undo(&mut self, v: usize, p: u8) {
        let mut later = self.rg.neighbours(v) & suffix_mask(self.n, v + 1);
        while later != 0 {
            let u = later.trailing_zeros() as usize;
            later &= later - 1;
            let old_min = self.min_cnt(u);
            self.cnt[u][p as usize] -= 1;
            self.adeg[u] -= 1;
            let new_min = self.min_cnt(u);
            self.open_sum -= 1;
            self.tight_sum -= 1 + new_min as usize - old_min as usize;
        }
        self.open_sum += self.adeg[v] as usize;
        self.tight_sum += (self.adeg[v] - self.min_cnt(v)) as usize;
    }

    /// Admissible completion bound for the suffix starting at `depth`, given
    /// `used` open parts, to be added to the value of the assigned prefix.
    fn pending(&self, depth: usize, used: usize) -> usize {
        let mut structural = self.e_suffix[depth];
        if self.r == 2 {
            structural -= self.odd_suffix[depth];
        }
        let per_vertex = if used == self.r {
            self.tight_sum
        } else {
            self.open_sum
        };
        structural + per_vertex
    }

    fn emit_leaf(&mut self, cur: usize) -> Result<()> {
        for k in 0..self.n {
            self.scratch[self.order[k]] = self.assign[k];
        }
        canonicalize_assignment(&mut self.scratch);
        debug_assert_eq!(
            super::assignment_cut_size(self.original, &self.scratch),
            cur
        );
        if let Mode::Enumerate { sink, .. } = &mut self.mode {
            sink.emit(&self.scratch, cur)?;
        }
        Ok(())
    }

    fn recurse(
        &mut self,
        depth: usize,
        used: usize,
        cur: usize,
        budget: &mut WorkBudget,
    ) -> Result<()> {
        budget.charge(1, "cut search")?;
        if depth == self.n {
            match self.mode {
                Mode::Maximize => {
                    if cur > self.best {
                        self.best = cur;
                    }
                }
                Mode::Enumerate { .. } => self.emit_leaf(cur)?,
                Mode::LexMin { .. } => {
                    self.scratch.copy_from_slice(&self.assign);
                    self.found = true;
                }
            }
            return Ok(());
        }
        let v = depth;
        let avail = (used + 1).min(self.r);
        let assigned_deg = self.adeg[v];
        let mut parts: [(u16, u8); MAX_PARTS] = [(0, 0); MAX_PARTS];
        for (p, slot) in parts.iter_mut().enumerate().take(avail) {
            *slot = (assigned_deg - self.cnt[v][p], p as u8);
        }
        if matches!(self.mode, Mode::Maximize) {
            // Explore high-gain parts first so strong incumbents arrive early.
            parts[..avail].sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        }
        for &(gain, p) in &parts[..avail] {
            let cur2 = cur + gain as usize;
            let used2 = used.max(p as usize + 1);
            self.apply(v, p);
            let bound = cur2 + self.pending(depth + 1, used2);
            let descend = match self.mode {
                Mode::Maximize => bound > self.best,
                Mode::Enumerate { threshold, .. } => bound >= threshold,
                Mode::LexMin { target } => bound >= target,
            };
            if descend {
                self.recurse(depth + 1, used2, cur2, budget)?;
            }
            self.undo(v, p);
            if self.found {
                break;
            }
        }
        Ok(())
    }
}

/// Maximum cut size of `g` into at most `r` parts.
pub(crate) fn max_cut(g: &Graph, r: usize, budget: &mut WorkBudget) -> Result<usize> {
    if g.n() == 0 {
        return Ok(0);
    }
    let mut s = Searcher::new(g, r, Mode::Maximize, false);
    s.best = s.greedy_value();
    s.recurse(0, 0, 0, budget)?;
    Ok(s.best)
}

/// Emits every canonical cut of size at least `threshold` into `sink`.
pub(crate) fn enumerate(
    g: &Graph,
    r: usize,
    threshold: usize,
    budget: &mut WorkBudget,
    sink: &mut dyn CutSink,
) -> Result<()> {
    if g.n() == 0 {
        return sink.emit(&[], 0);
    }
    let mut s = Searcher::new(g, r, Mode::Enumerate { threshold, sink }, false);
    s.recurse(0, 0, 0, budget)
}

/// Lexicographically least canonical assignment achieving cut size `b`.
pub(crate) fn lexmin_max_cut(
    g: &Graph,
    r: usize,
    b: usize,
    budget: &mut WorkBudget,
) -> Result<Vec<u8>> {
    if g.n() == 0 {
        return Ok(Vec::new());
    }
    let mut s = Searcher::new(g, r, Mode::LexMin { target: b }, true);
    s.recurse(0, 0, 0, budget)?;
    debug_assert!(s.found, "a maximum cut always exists");
    Ok(s.scratch.clone())
}
