//! The sampler: a resampling loop driven by a deterministic table, recording
//! transcripts and run statistics.

mod policy;
mod run;
mod table;
mod transcript;

use thiserror::Error;

use crate::analysis::AnalysisError;
use crate::instance::InstanceError;

pub use policy::{ChoicePolicy, HashedRule, HighestKey, LargestScope, LowestKey, NBasedRule};
pub use run::{
    run_extremal, run_limited, transcript_probability, transcript_probability_exact, RunOutcome,
    RunStats, DEFAULT_MAX_ITERATIONS,
};
pub use table::{
    cell_bits, cell_uniform, table_cell, FixtureTable, PrfTable, RecordingTable, ResamplingTable,
};
pub use transcript::{Block, Transcript};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("iteration cap of {cap} exceeded with clauses {violated:?} still violated")]
    IterationCapExceeded {
        cap: u64,
        violated: Vec<String>,
        partial: Box<RunOutcome>,
    },
    #[error("clauses {first} and {second} are violated together and share a variable")]
    NotExtremal { first: String, second: String },
    #[error("rule chose clause {chosen}, which is not among the violated clauses {violated:?}")]
    RuleViolation { chosen: String, violated: Vec<String> },
    #[error("resampling table has no cell ({var}, {row})")]
    TableExhausted {
        var: usize,
        row: usize,
        partial: Box<RunOutcome>,
    },
    #[error("table cell ({var}, {row}) holds {value}, outside the variable's domain")]
    InvalidTable { var: usize, row: usize, value: usize },
    #[error("the iteration cap must be at least 1")]
    InvalidMaxIterations,
    #[error("invalid transcript: {0}")]
    InvalidTranscript(String),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

impl EngineError {
    /// The partial run carried by cap and exhaustion errors.
    pub fn partial(&self) -> Option<&RunOutcome> {
        match self {
            EngineError::IterationCapExceeded { partial, .. } | EngineError::TableExhausted { partial, .. } => {
                Some(partial)
            }
            _ => None,
        }
    }
}
