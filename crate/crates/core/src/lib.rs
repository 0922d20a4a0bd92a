//! Exact search for a second Hamiltonian decomposition of the union of two
//! Hamiltonian cycles `x` and `y`.
//!
//! `x ∪ y` is 4-regular (undirected) or has in- and out-degree 2 at every
//! vertex (directed). The question is whether its edges split into two
//! Hamiltonian cycles `z`, `w` other than `x`, `y` themselves. A positive
//! answer certifies that `x` and `y` are non-adjacent vertices of the
//! travelling salesperson polytope.
//!
//! Two backtracking solvers are provided: [`bsp`] grows one cycle as a simple
//! path, [`bcef`] propagates every decision through chains of forced edge
//! assignments. [`oracle`] enumerates all decompositions of small instances
//! and is used to certify both.

pub mod bcef;
pub mod bsp;
pub mod error;
pub mod instances;
pub mod multigraph;
pub mod oracle;
pub mod result;
pub mod state;
pub mod verify;

pub use bcef::{chain_fix, preprocess_parallel, select_branch_edge, solve_bcef, solve_bcef_with};
pub use bsp::{solve_bsp, solve_bsp_with};
pub use error::{Error, ParseError, ParseErrorKind};
pub use instances::{gen_cycle, gen_instance, Instance, RngState};
pub use multigraph::{
    build_union, cycle_edge_multiset, multiset_equals, EdgeId, EdgeMultiset, HamCycle, Mode,
    UnionMultigraph, VertexId,
};
pub use oracle::{enumerate_decompositions, second_decomposition_exists, DecompositionSet};
pub use result::{Algorithm, SolveConfig, SolveResult, SolveStats, Status};
pub use state::{Component, EdgeAssignment, FixOutcome, PartialState, SearchStats, SolveLimits};
