//! End-to-end tour: samples a graph, walks the exact cut machinery, pattern
//! constants and an experiment, and prints what it finds.
//!
//! Run with `cargo run -p cutlab --example tour`.

use cutlab::cuts::{critical_edges, enumerate_cuts, max_cut_size};
use cutlab::equiv::{equivalence, in_core_class, is_rigid};
use cutlab::experiments::{run_experiment, ExperimentConfig, ExperimentKind};
use cutlab::extremal::{is_h_simonovits, max_h_free_subgraph};
use cutlab::patterns::{theta_constant, Pattern};
use cutlab::{sample_gnm, Graph, RngSeed};

fn main() -> cutlab::Result<()> {
    let g = sample_gnm(12, 30, RngSeed::new(2024))?;
    println!("G(12, 30) sample: {} vertices, {} edges", g.n(), g.m());

    let b2 = max_cut_size(&g, 2)?;
    let family = enumerate_cuts(&g, 2, 0)?;
    let crit = critical_edges(&g, 2)?;
    println!(
        "max 2-cut size {b2}, {} max cuts, {} critical edges",
        family.len(),
        crit.len()
    );

    let s = equivalence(&g, 2, 0)?;
    println!(
        "deficit-0 equivalence: {} pairs, {} components, core present: {}, x_r = {}",
        s.pair_count(),
        s.components.len(),
        s.core.is_some(),
        s.x_r
    );
    println!(
        "rigid at eps=0.3: {}, in core class at alpha=0.25: {}",
        is_rigid(&g, 2, 0, 0.3)?,
        in_core_class(&g, 2, 0, 0.25)?
    );

    let k3 = Pattern::by_name("K3").expect("builtin")?;
    println!(
        "K3 constants: chi={}, m2={}, theta={:.6}",
        k3.chi(),
        k3.m2(),
        theta_constant(&k3)?
    );
    let k6 = Graph::complete(6)?;
    let (best, witnesses) = max_h_free_subgraph(&k6, &k3)?;
    println!(
        "largest triangle-free subgraph of K6: {best} edges, {} witnesses, Simonovits: {}",
        witnesses.len(),
        is_h_simonovits(&k6, &k3)?
    );

    let mut cfg = ExperimentConfig::new(ExperimentKind::MaxcutSecondOrder, 7);
    cfg.n = vec![10];
    cfg.m = Some(vec![22]);
    cfg.trials = 20;
    let summary = run_experiment(&cfg)?;
    print!("{}", summary.to_csv());
    Ok(())
}
