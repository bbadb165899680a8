//! Partial rejection sampling.
//!
//! A formula is a conjunction of clauses over independent random variables drawn
//! from a product distribution. Partial rejection sampling draws every variable
//! once and then repeatedly redraws only the scope of some violated clause until
//! no clause is violated. On extremal instances (dependent clauses can never be
//! false together), and on instances whose dependency relation satisfies the
//! weaker lopsided axioms when the clause choice depends only on the violated
//! set, the output is an exact sample from the product distribution conditioned
//! on the formula.
//!
//! The crate is split into:
//!
//! - [`instance`]: variables, weighted domains, clauses, dependency relations and
//!   the static checks (extremality, atomicity, lopsided axioms).
//! - [`engine`]: the sampler driven by a deterministic resampling table, with
//!   transcripts and run statistics.
//! - [`analysis`]: independent sets of the dependency graph, the signed
//!   independence polynomial, expected resampling counts, local lemma
//!   certificates and hard-core activity thresholds.
//! - [`problems`]: encoders from graphs to instances (sink-free orientations,
//!   arborescences, root-connected subgraphs, bicircular bases, hard-core
//!   configurations, strong orientations) and decoders back.
//! - [`verify`]: total variation tests against enumeration oracles, confluence
//!   and runtime-prediction checks.

pub mod analysis;
pub mod engine;
pub mod instance;
pub mod problems;
pub mod verify;

pub use analysis::{AnalysisError, DependencyGraph, Scalar};
pub use engine::{
    run_extremal, run_limited, ChoicePolicy, EngineError, NBasedRule, PrfTable, ResamplingTable,
    RunOutcome, RunStats, Transcript,
};
pub use instance::{
    Assignment, Clause, ClauseKey, DependencyRelation, DomainDist, Instance, InstanceError,
};
pub use problems::{DecodedObject, Encoded, Graph, ProblemError};
