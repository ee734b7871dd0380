//! Fair division of indivisible goods under soft conflict constraints.
//!
//! Goods carry an undirected conflict graph; assigning both endpoints of
//! an edge to one agent is allowed but counts as a violation. The solvers
//! compute envy-free-up-to-one-good (EF1) allocations whose violated
//! weight stays near the `|E|/n` baseline:
//!
//! - [`cyclic::cyclic_shift_rr`]: identical valuations, at most `|E|/n`.
//! - [`cyclic::cut_and_choose`]: two agents, general valuations, `|E|/2`.
//! - [`general::graph_ef1`]: general valuations and constant `n >= 3`,
//!   `|E|/n` plus a lower-order additive term.
//! - [`general::degree_ef1_direct`]: the profile-vector solver exposed
//!   directly, including weighted conflict graphs.
//!
//! [`oracle`] enumerates small instances exactly for ground truth, and
//! [`instance`] hosts the verifiers (`violation_count`, `is_ef1`,
//! `is_balanced`, `component_balance_check`).
//!
//! All arithmetic is exact: valuations and weights are scaled integers,
//! and bounds are compared as reduced fractions.

pub mod cyclic;
pub mod envy;
mod error;
pub mod general;
pub mod grid;
pub mod instance;
pub mod oracle;
mod ratio;
mod stats;

pub use error::{Error, Result};
pub use ratio::Ratio;
pub use stats::SolveStats;
