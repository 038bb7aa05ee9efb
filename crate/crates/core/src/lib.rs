//! Port-graph rewriting for intuitionistic natural deduction and the linear
//! λ-calculus.
//!
//! Proofs ([`logic::Proof`]) and linear terms ([`lambda::Term`]) translate
//! to [`graph::PortGraph`]s; the rule catalogue in [`rules`] normalises
//! them, either with whole-scope erase/copy meta-rules or with the local
//! ε/δ agents, and [`engine`] drives reduction with strategies and
//! replayable traces.

pub mod batch;
pub mod engine;
pub mod equiv;
pub mod gen;
pub mod graph;
pub mod io;
pub mod lambda;
pub mod logic;
pub mod meta;
pub mod rules;
pub mod subst;
pub mod translate;
