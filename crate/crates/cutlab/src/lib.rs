//! cutlab: a small-graph laboratory for exact multiway-cut structure.
//!
//! The crate computes, exactly and at desk scale (up to 64 vertices, with
//! tighter documented caps where search spaces explode):
//!
//! - maximum r-cuts, families of all cuts within a deficit budget, cut-level
//!   edge partitions, and the edges crossing every maximum cut;
//! - the vertex-pair equivalence induced by those families, its component
//!   structure, cores, rigidity predicates, and the count of vertices left
//!   outside the core;
//! - invariants of small pattern graphs (chromatic number, 2-density,
//!   edge-criticality, copy counts in augmented complete multipartite
//!   hosts) and the threshold constants built from them;
//! - exact maximum pattern-free subgraphs via hitting sets over copy
//!   hypergraphs, together with first/second-moment sums over those
//!   hypergraphs;
//! - seeded, thread-count-independent Monte Carlo experiments over the
//!   above.
//!
//! Randomness is always explicit: samplers take an [`RngSeed`] (master seed
//! plus stream index) and are pure functions of it.

pub mod budget;
pub mod cuts;
pub mod equiv;
pub mod error;
pub mod experiments;
pub mod extremal;
pub mod graph;
pub mod io;
pub mod pairs;
pub mod patterns;

pub use budget::WorkBudget;
pub use error::{Error, Result};
pub use graph::{
    boundary_edges, common_neighbourhood, sample_gnm, sample_gnp, EdgeSet, Graph, RngSeed,
    MAX_VERTICES,
};
