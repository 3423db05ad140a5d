//! Exact unique information for finite alphabets.
//!
//! The extractor is a channel `p(t | source)`; column-stochasticity and the
//! independence `T ⟂ Y` are linear in the channel entries, so the feasible
//! set is a polytope. Mutual information is convex in the channel for a fixed
//! input law, hence the maximum sits at a vertex: enumerate them all when the
//! polytope is small, otherwise sample vertices with random linear programs.

mod channel;
mod examples;
mod lemma;
mod polytope;
mod simplex;
mod solve;
mod vertices;

pub use channel::Channel;
pub use examples::{canonical_example, CanonicalExample};
pub use lemma::{lemma_b1_verify, LemmaB1Report};
pub use polytope::{build_polytope, ChannelPolytope};
pub use simplex::minimize;
pub use solve::{
    pid_terms_discrete, t_card_check, ui_discrete, DiscretePid, DiscreteUiResult, Method, SolveMode,
    SolverConfig, TCardCheck, DEFAULT_SAMPLES, DEFAULT_VERTEX_CAP, DEFAULT_VERTEX_LIMIT,
};
pub use vertices::{enumerate_vertices, sample_vertices, VertexSet};

/// Feasibility tolerance for vertices and channels.
pub const FEASIBILITY_TOL: f64 = 1e-9;
