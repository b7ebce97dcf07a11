//! Deliberately simple reference implementations of the cut operations.
//!
//! These enumerate canonical assignments by plain recursion in vertex order
//! and score each leaf by iterating over the edge list.  They share no
//! search machinery with the optimized engines, which makes them useful as
//! independent cross-checks, and they are exposed through the command-line
//! interface for the same reason.  Inputs are gated by the estimate
//! `r^n <= 10^8` on the assignment count instead of a work budget.

use crate::budget::MAX_MATERIALIZED_CUTS;
use crate::error::{Error, Result};
use crate::graph::{EdgeSet, Graph};
use crate::pairs::PairSet;

use super::{Cut, CutFamily};

/// Largest admissible value of the state-count estimate `r^n`.
pub const NAIVE_STATE_CAP: u128 = 100_000_000;

fn check_size(g: &Graph, r: usize) -> Result<()> {
    super::check_r(r)?;
    let states = (r as u128).checked_pow(g.n() as u32);
    match states {
        Some(s) if s <= NAIVE_STATE_CAP => Ok(()),
        _ => Err(Error::too_large(format!(
            "naive enumeration over r^n = {r}^{} assignments exceeds the cap of {NAIVE_STATE_CAP}",
            g.n()
        ))),
    }
}

/// Calls `emit` for every canonical assignment of `g` into at most `r`
/// parts, with its cut size.
fn enumerate_all(
    g: &Graph,
    r: usize,
    emit: &mut dyn FnMut(&[u8], usize) -> Result<()>,
) -> Result<()> {
    let n = g.n();
    if n == 0 {
        return emit(&[], 0);
    }
    let edges = g.edges();
    let mut assign = vec![0u8; n];
    fn rec(
        k: usize,
        used: usize,
        n: usize,
        r: usize,
        edges: &[(usize, usize)],
        assign: &mut Vec<u8>,
        emit: &mut dyn FnMut(&[u8], usize) -> Result<()>,
    ) -> Result<()> {
        if k == n {
            let size = edges
                .iter()
                .filter(|&&(u, v)| assign[u] != assign[v])
                .count();
            return emit(assign, size);
        }
        for p in 0..(used + 1).min(r) {
            assign[k] = p as u8;
            rec(k + 1, used.max(p + 1), n, r, edges, assign, emit)?;
        }
        Ok(())
    }
    rec(0, 0, n, r, &edges, &mut assign, emit)
}

/// Maximum cut size of `g` into at most `r` parts, by full enumeration.
pub fn max_cut_size(g: &Graph, r: usize) -> Result<usize> {
    check_size(g, r)?;
    let mut best = 0usize;
    enumerate_all(g, r, &mut |_, size| {
        best = best.max(size);
        Ok(())
    })?;
    Ok(best)
}

/// All cuts of deficit at most `d`, by full enumeration.
pub fn enumerate_cuts(g: &Graph, r: usize, d: usize) -> Result<CutFamily> {
    check_size(g, r)?;
    let mut b = 0usize;
    enumerate_all(g, r, &mut |_, size| {
        b = b.max(size);
        Ok(())
    })?;
    let threshold = b.saturating_sub(d);
    let mut cuts: Vec<Cut> = Vec::new();
    enumerate_all(g, r, &mut |assign, size| {
        if size >= threshold {
            if cuts.len() >= MAX_MATERIALIZED_CUTS {
                return Err(Error::too_large(format!(
                    "cut family exceeds the materialization cap of {MAX_MATERIALIZED_CUTS} cuts"
                )));
            }
            cuts.push(Cut::new(r, assign.to_vec(), size, b - size));
        }
        Ok(())
    })?;
    cuts.sort_unstable_by(|x, y| x.assignment().cmp(y.assignment()));
    Ok(CutFamily {
        graph_hash: g.content_hash(),
        r,
        d,
        max_size: b,
        cuts,
    })
}

/// Edges crossing in every maximum cut, by full enumeration.
pub fn critical_edges(g: &Graph, r: usize) -> Result<EdgeSet> {
    let n = g.n();
    let family = enumerate_cuts(g, r, 0)?;
    let mut crossing_in_all = PairSet::full(n);
    for cut in family.iter() {
        crossing_in_all.intersect_with(&cut.separated_pairs());
    }
    crossing_in_all.intersect_with(&g.pair_mask());
    Ok(EdgeSet::from_pair_set(&crossing_in_all))
}
