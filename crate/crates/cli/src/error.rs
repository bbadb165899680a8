use std::path::PathBuf;

use prs_core::analysis::AnalysisError;
use prs_core::verify::VerifyError;
use prs_core::{EngineError, InstanceError, ProblemError};
use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CHECK_FAILED: i32 = 1;
    pub const VALIDATION: i32 = 2;
    pub const CAP_EXCEEDED: i32 = 3;
    pub const UNSATISFIABLE: i32 = 4;
    pub const INTERNAL: i32 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Output(String),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

fn instance_kind(e: &InstanceError) -> (&'static str, i32) {
    use InstanceError::*;
    match e {
        EnumerationCapExceeded { .. } => ("EnumerationCapExceeded", exit::CAP_EXCEEDED),
        InvalidWeights(_) => ("InvalidWeights", exit::VALIDATION),
        DuplicateValue => ("DuplicateValue", exit::VALIDATION),
        InvalidClause { .. } => ("InvalidClause", exit::VALIDATION),
        ScopeOutOfRange { .. } => ("ScopeOutOfRange", exit::VALIDATION),
        DuplicateClause(_) => ("DuplicateClause", exit::VALIDATION),
        OracleBackend => ("OracleBackend", exit::VALIDATION),
        InfiniteClauseUniverse => ("InfiniteClauseUniverse", exit::VALIDATION),
        DependencyNotSymmetric(..) => ("DependencyNotSymmetric", exit::VALIDATION),
        DependencyReflexive(_) => ("DependencyReflexive", exit::VALIDATION),
        DependencyOutsideSharedScope(..) => ("DependencyOutsideSharedScope", exit::VALIDATION),
        AssignmentLength { .. } => ("AssignmentLength", exit::VALIDATION),
        ValueOutOfDomain { .. } => ("ValueOutOfDomain", exit::VALIDATION),
        Format(_) => ("InstanceFormat", exit::VALIDATION),
    }
}

fn analysis_kind(e: &AnalysisError) -> (&'static str, i32) {
    use AnalysisError::*;
    match e {
        CapExceeded { .. } => ("CapExceeded", exit::CAP_EXCEEDED),
        NotExtremal(..) => ("NotExtremal", exit::VALIDATION),
        Unsatisfiable(_) => ("Unsatisfiable", exit::UNSATISFIABLE),
        InvalidCertificate(_) => ("InvalidCertificate", exit::VALIDATION),
        InvalidGraph(_) => ("InvalidDependencyGraph", exit::VALIDATION),
        LengthMismatch { .. } => ("LengthMismatch", exit::INTERNAL),
        CrossCheck(_) => ("CrossCheck", exit::INTERNAL),
        InvalidDegree { .. } => ("InvalidDegree", exit::VALIDATION),
        Instance(i) => instance_kind(i),
    }
}

fn engine_kind(e: &EngineError) -> (&'static str, i32) {
    use EngineError::*;
    match e {
        IterationCapExceeded { .. } => ("IterationCapExceeded", exit::CAP_EXCEEDED),
        NotExtremal { .. } => ("NotExtremal", exit::VALIDATION),
        RuleViolation { .. } => ("RuleViolation", exit::INTERNAL),
        TableExhausted { .. } => ("TableExhausted", exit::INTERNAL),
        InvalidTable { .. } => ("InvalidTable", exit::INTERNAL),
        InvalidMaxIterations => ("InvalidMaxIterations", exit::VALIDATION),
        InvalidTranscript(_) => ("InvalidTranscript", exit::INTERNAL),
        Instance(i) => instance_kind(i),
        Analysis(a) => analysis_kind(a),
    }
}

fn problem_kind(e: &ProblemError) -> (&'static str, i32) {
    use ProblemError::*;
    match e {
        InvalidGraph(_) => ("InvalidGraph", exit::VALIDATION),
        Parse(_) => ("GraphFormat", exit::VALIDATION),
        ReferenceHasSink(_) => ("ReferenceHasSink", exit::VALIDATION),
        Disconnected => ("Disconnected", exit::VALIDATION),
        NotRootConnected(_) => ("NotRootConnected", exit::VALIDATION),
        NoBasis => ("NoBasis", exit::UNSATISFIABLE),
        Bridged(_) => ("Bridged", exit::UNSATISFIABLE),
        MissingRoot => ("MissingRoot", exit::VALIDATION),
        WrongKind(_) => ("WrongGraphKind", exit::VALIDATION),
        InvalidActivity(_) => ("InvalidActivity", exit::VALIDATION),
        Instance(i) => instance_kind(i),
    }
}

impl CliError {
    /// Diagnostic kind and exit code.
    pub fn classify(&self) -> (&'static str, i32) {
        match self {
            CliError::Usage(_) => ("Usage", exit::VALIDATION),
            CliError::Io { .. } => ("Io", exit::VALIDATION),
            CliError::Output(_) => ("Output", exit::INTERNAL),
            CliError::Problem(e) => problem_kind(e),
            CliError::Instance(e) => instance_kind(e),
            CliError::Engine(e) => engine_kind(e),
            CliError::Analysis(e) => analysis_kind(e),
            CliError::Verify(e) => match e {
                VerifyError::EmptySample => ("EmptySample", exit::VALIDATION),
                VerifyError::Run { source, .. } => engine_kind(source),
                VerifyError::NotExtremal(_) => ("NotExtremal", exit::VALIDATION),
                VerifyError::Analysis(a) => analysis_kind(a),
                VerifyError::Engine(en) => engine_kind(en),
            },
        }
    }

    /// Single-line diagnostic: `error: <Kind>: <message>`.
    pub fn diagnostic(&self) -> String {
        let (kind, _) = self.classify();
        let message = self.to_string().replace('\n', " ");
        format!("error: {kind}: {message}")
    }
}
