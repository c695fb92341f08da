//! Self-destructive percolation on planar lattices.
//!
//! Occupy every site with probability `p`, empty every cluster that reaches
//! infinity (a finite-box proxy here), then give each vacant site a second
//! chance `delta`. The crate samples that process, estimates its critical
//! curve, and checks the colouring arguments that bound it from below, both by
//! Monte Carlo and by exact enumeration on tiny graphs.

pub mod catastrophe;
pub mod cli;
pub mod circuits;
pub mod coloring;
pub mod config;
pub mod error;
pub mod estimator;
pub mod lattice;
pub mod oracle;
pub mod pipeline;
pub mod rng;
pub mod union_find;

pub use catastrophe::{connects, destroy, label_clusters, ClusterLabels, InfinityProxy};
pub use circuits::{check_separation, find_circuit, Circuit};
pub use config::Config;
pub use error::{Error, Result};
pub use lattice::{build_box, matching_of, neighborhood_union, FiniteGraph, LatticeKind, VertexId};
pub use pipeline::{sdp_sample, simulate, spanning_hat, theta_hat, Estimate, Params, SdpSample};
pub use coloring::{
    lemma_constant, red_neighborhood, red_tilde, verify_domination_patch, verify_domination_spanning,
    verify_lemma_bound, verify_lemma_patch, LemmaConstant, PatchSpec, RedConfig, RedVariant,
};
pub use estimator::{
    bound_report, estimate_delta_c, estimate_pc, CriticalEstimate, DeltaCurve, DeltaEstimate, SweepResult,
};
pub use oracle::{enumerate_conditional, enumerate_event, enumerate_event_recursive, ExactResult, ZEvent};
