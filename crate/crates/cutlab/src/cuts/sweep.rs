//! Exhaustive two-part cut sweep in Gray-code order.
//!
//! For `r = 2` and small `n`, every one of the `2^(n-1)` two-part
//! assignments (one reference vertex pinned to part 0) is visited by
//! flipping a single vertex per step, so the cut size is maintained with one
//! adjacency popcount per step.  The pinned vertex is the one of highest
//! degree, and frequently-flipped Gray positions are given to low-degree
//! vertices to minimise update cost.

use crate::budget::WorkBudget;
use crate::error::Result;
use crate::graph::Graph;

use super::CutSink;

/// Runs `on_state` for every two-part assignment of `g`, presented as the
/// bitmask of the non-reference side together with the cut size.
fn sweep_core(
    g: &Graph,
    budget: &mut WorkBudget,
    mut on_state: impl FnMut(u64, usize) -> Result<()>,
) -> Result<()> {
    let n = g.n();
    debug_assert!((1..=28).contains(&n), "sweep is for small graphs only");
    let steps = 1u64 << (n - 1);
    // The sweep's cost is predictable, so the whole charge is taken up front;
    // refusal happens before any work is done.
    budget.charge(steps, "two-part cut sweep")?;

    let pinned = (0..n)
        .max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v)))
        .expect("non-empty graph");
    let mut flip_map: Vec<usize> = (0..n).filter(|&v| v != pinned).collect();
    flip_map.sort_by_key(|&v| (g.degree(v), v));

    let mut side = 0u64;
    let mut size = 0usize;
    on_state(side, size)?;
    for i in 1..steps {
        let v = flip_map[i.trailing_zeros() as usize];
        let vb = 1u64 << v;
        let opposite = if side & vb != 0 { !side } else { side };
        let cross = (g.neighbours(v) & opposite).count_ones() as usize;
        size = size + g.degree(v) - 2 * cross;
        side ^= vb;
        on_state(side, size)?;
    }
    Ok(())
}

/// Maximum two-part cut size of `g` by exhaustive sweep.
pub(crate) fn max_cut_r2(g: &Graph, budget: &mut WorkBudget) -> Result<usize> {
    let mut best = 0usize;
    sweep_core(g, budget, |_, size| {
        if size > best {
            best = size;
        }
        Ok(())
    })?;
    Ok(best)
}

/// Emits every canonical two-part cut of size at least `threshold`.
pub(crate) fn enumerate_r2(
    g: &Graph,
    threshold: usize,
    budget: &mut WorkBudget,
    sink: &mut dyn CutSink,
) -> Result<()> {
    let n = g.n();
    let mut assign = vec![0u8; n];
    sweep_core(g, budget, |side, size| {
        if size < threshold {
            return Ok(());
        }
        // Canonical labelling puts vertex 0 in part 0; invert if needed.
        let flip = (side & 1) as u8;
        for (v, slot) in assign.iter_mut().enumerate() {
            *slot = ((side >> v) as u8 & 1) ^ flip;
        }
        sink.emit(&assign, size)
    })
}
