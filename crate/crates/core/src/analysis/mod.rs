//! Exact analysis: independent sets of the dependency graph, the signed
//! independence polynomial, expected resampling counts, local lemma
//! certificates and hard-core activity thresholds.

mod expected;
mod graph;
mod hardcore;
mod lll;
mod poly;
mod scalar;

use thiserror::Error;

use crate::instance::InstanceError;

pub use expected::{
    brute_force_target, clause_false_prob, clause_profile, expected_counts, expected_counts_f64,
    p_vector, ClauseProfile, ExpectedCounts, TargetDist, BRUTE_FORCE_CAP, ESCALATION_THRESHOLD,
};
pub use graph::{independent_sets, DependencyGraph, IndependentSets, DEFAULT_SET_CAP};
pub use hardcore::{crude_critical_activity, hardcore_lambda, CrudeThreshold, HardcoreThreshold};
pub use lll::{lll_check, LllReport};
pub use poly::{indep_poly, q_table, q_value, QTable};
pub use scalar::Scalar;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("{what} of size {size} exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, size: u128, cap: u128 },
    #[error("instance is not extremal: clauses {0} and {1} can be false together")]
    NotExtremal(String, String),
    #[error("formula is unsatisfiable (Pr(formula) = {0})")]
    Unsatisfiable(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("dependency graph: {0}")]
    InvalidGraph(String),
    #[error("vector has {got} entries, graph has {want} vertices")]
    LengthMismatch { got: usize, want: usize },
    #[error("the two routes to q disagree for clause set {0}")]
    CrossCheck(String),
    #[error("degree must be at least {min}, got {got}")]
    InvalidDegree { min: u32, got: u32 },
    #[error(transparent)]
    Instance(#[from] InstanceError),
}
