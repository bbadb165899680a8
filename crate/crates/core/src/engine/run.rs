use std::collections::BTreeMap;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Block, ChoicePolicy, EngineError, NBasedRule, ResamplingTable, Transcript};
use crate::analysis::{p_vector, q_table, Scalar, DEFAULT_SET_CAP};
use crate::instance::{
    build_dependency_graph, check_extremal, Assignment, Clause, ClauseKey, Instance,
    DEFAULT_ENUMERATION_CAP,
};

/// Iteration cap used when the caller has no better bound.
pub const DEFAULT_MAX_ITERATIONS: u64 = 10_000_000;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RunStats {
    /// Loop passes that resampled something.
    pub iterations: u64,
    /// Resamplings per clause.
    pub clause_resamples: BTreeMap<ClauseKey, u64>,
    /// Individual variable redraws.
    pub variable_resamples: u64,
}

impl RunStats {
    pub fn resamples_of(&self, key: &ClauseKey) -> u64 {
        self.clause_resamples.get(key).copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub assignment: Assignment,
    pub transcript: Transcript,
    pub stats: RunStats,
}

enum Chooser<'r> {
    Lowest,
    Highest,
    Random(Box<ChaCha8Rng>),
    RoundRobin(Option<ClauseKey>),
    All,
    Rule(&'r dyn NBasedRule),
}

impl Chooser<'_> {
    /// Positions in `violated` to resample this iteration, ascending.
    fn pick(&mut self, violated: &[Clause]) -> Result<Vec<usize>, EngineError> {
        let last = violated.len() - 1;
        Ok(match self {
            Chooser::Lowest => vec![0],
            Chooser::Highest => vec![last],
            Chooser::Random(rng) => vec![rng.random_range(0..violated.len())],
            Chooser::RoundRobin(prev) => {
                let i = match prev {
                    Some(p) => violated.iter().position(|c| c.key() > p).unwrap_or(0),
                    None => 0,
                };
                *prev = Some(violated[i].key().clone());
                vec![i]
            }
            Chooser::All => (0..violated.len()).collect(),
            Chooser::Rule(rule) => {
                let key = rule.choose(violated);
                let i = violated
                    .binary_search_by(|c| c.key().cmp(&key))
                    .map_err(|_| EngineError::RuleViolation {
                        chosen: key.to_string(),
                        violated: violated.iter().map(|c| c.key().to_string()).collect(),
                    })?;
                vec![i]
            }
        })
    }
}

struct Run<'a> {
    instance: &'a Instance,
    table: &'a dyn ResamplingTable,
    assignment: Assignment,
    transcript: Transcript,
    stats: RunStats,
    /// Scratch marks for the dynamic extremality check.
    stamp: Vec<u64>,
}

impl<'a> Run<'a> {
    fn start(instance: &'a Instance, table: &'a dyn ResamplingTable) -> Result<Self, EngineError> {
        let n = instance.num_variables();
        let mut run = Run {
            instance,
            table,
            assignment: Assignment::new(vec![0; n]),
            transcript: Transcript::new(n),
            stats: RunStats::default(),
            stamp: vec![0; n],
        };
        for var in 0..n {
            let v = run.read(var, 0)?;
            run.assignment.set(var, v);
        }
        Ok(run)
    }

    fn outcome(self) -> RunOutcome {
        RunOutcome {
            assignment: self.assignment,
            transcript: self.transcript,
            stats: self.stats,
        }
    }

    fn partial(&self) -> Box<RunOutcome> {
        Box::new(RunOutcome {
            assignment: self.assignment.clone(),
            transcript: self.transcript.clone(),
            stats: self.stats.clone(),
        })
    }

    fn read(&self, var: usize, row: usize) -> Result<usize, EngineError> {
        let value = self.table.cell(var, row).ok_or_else(|| EngineError::TableExhausted {
            var,
            row,
            partial: self.partial(),
        })?;
        if value >= self.instance.domains()[var].len() {
            return Err(EngineError::InvalidTable { var, row, value });
        }
        Ok(value)
    }

    /// Fails if two violated clauses share a variable.
    fn check_disjoint(&mut self, violated: &[Clause]) -> Result<(), EngineError> {
        let mark = self.stats.iterations + 1;
        let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
        for (ci, c) in violated.iter().enumerate() {
            for &var in c.scope() {
                if self.stamp[var] == mark {
                    let first = owner[&var];
                    return Err(EngineError::NotExtremal {
                        first: violated[first].key().to_string(),
                        second: c.key().to_string(),
                    });
                }
                self.stamp[var] = mark;
                owner.insert(var, ci);
            }
        }
        Ok(())
    }

    fn resample(&mut self, clause: &Clause) -> Result<(), EngineError> {
        let mut cells = Vec::with_capacity(clause.arity());
        for &var in clause.scope() {
            let row = self.transcript.frontier[var];
            let value = self.read(var, row + 1)?;
            cells.push((var, row));
            self.transcript.frontier[var] = row + 1;
            self.assignment.set(var, value);
        }
        self.transcript.blocks.push(Block {
            clause: clause.key().clone(),
            cells,
            time: self.stats.iterations,
        });
        *self
            .stats
            .clause_resamples
            .entry(clause.key().clone())
            .or_insert(0) += 1;
        self.stats.variable_resamples += clause.arity() as u64;
        Ok(())
    }

    fn drive(mut self, mut chooser: Chooser<'_>, extremal: bool, max_iterations: u64) -> Result<RunOutcome, EngineError> {
        if max_iterations == 0 {
            return Err(EngineError::InvalidMaxIterations);
        }
        loop {
            let violated = self.instance.violated_clauses(&self.assignment);
            if violated.is_empty() {
                return Ok(self.outcome());
            }
            if self.stats.iterations >= max_iterations {
                return Err(EngineError::IterationCapExceeded {
                    cap: max_iterations,
                    violated: violated.iter().map(|c| c.key().to_string()).collect(),
                    partial: self.partial(),
                });
            }
            if extremal && violated.len() > 1 {
                self.check_disjoint(&violated)?;
            }
            for i in chooser.pick(&violated)? {
                self.resample(&violated[i])?;
            }
            self.stats.iterations += 1;
        }
    }
}

/// Runs the sampler on an extremal instance.
///
/// Every iteration resamples the scope of the violated clause(s) picked by
/// `policy`. If two violated clauses are ever seen to share a variable the
/// run stops with [`EngineError::NotExtremal`].
pub fn run_extremal(
    instance: &Instance,
    policy: &ChoicePolicy,
    table: &dyn ResamplingTable,
    max_iterations: u64,
) -> Result<RunOutcome, EngineError> {
    let chooser = match policy {
        ChoicePolicy::LowestId => Chooser::Lowest,
        ChoicePolicy::HighestId => Chooser::Highest,
        ChoicePolicy::RandomFromN { seed } => Chooser::Random(Box::new(ChaCha8Rng::seed_from_u64(*seed))),
        ChoicePolicy::RoundRobin => Chooser::RoundRobin(None),
        ChoicePolicy::SimultaneousAll => Chooser::All,
        ChoicePolicy::Rule(r) => Chooser::Rule(r.as_ref()),
    };
    Run::start(instance, table)?.drive(chooser, true, max_iterations)
}

/// Runs the sampler with a clause choice that depends only on the set of
/// violated clauses. Violated clauses may overlap; exactly one is resampled
/// per iteration.
pub fn run_limited(
    instance: &Instance,
    rule: &dyn NBasedRule,
    table: &dyn ResamplingTable,
    max_iterations: u64,
) -> Result<RunOutcome, EngineError> {
    Run::start(instance, table)?.drive(Chooser::Rule(rule), false, max_iterations)
}

/// Probability that a uniformly random table produces exactly this transcript:
/// `Pr(formula)` times the product of the violation probabilities of the
/// block labels.
pub fn transcript_probability<T: Scalar>(instance: &Instance, transcript: &Transcript) -> Result<T, EngineError> {
    let explicit = if instance.is_explicit() {
        instance.clone()
    } else {
        instance.materialize()?
    };
    let report = check_extremal(&explicit, DEFAULT_ENUMERATION_CAP)?;
    if let Some(w) = report.violations.first() {
        return Err(EngineError::NotExtremal {
            first: w.first.to_string(),
            second: w.second.to_string(),
        });
    }
    if transcript.frontier.len() != explicit.num_variables() {
        return Err(EngineError::InvalidTranscript(format!(
            "frontier has {} entries, instance has {} variables",
            transcript.frontier.len(),
            explicit.num_variables()
        )));
    }
    transcript.validate()?;
    let clauses = explicit.clauses()?;
    let g = build_dependency_graph(&explicit)?;
    let p = p_vector::<T>(&explicit)?;
    let q = q_table(&g, &p, DEFAULT_SET_CAP)?;
    let mut prob = q.q_empty;
    for block in &transcript.blocks {
        let k = clauses
            .binary_search_by(|c| c.key().cmp(&block.clause))
            .map_err(|_| EngineError::InvalidTranscript(format!("unknown clause {}", block.clause)))?;
        let scope: Vec<usize> = block.cells.iter().map(|c| c.0).collect();
        if scope != clauses[k].scope() {
            return Err(EngineError::InvalidTranscript(format!(
                "block of clause {} does not cover its scope",
                block.clause
            )));
        }
        prob = prob * p[k].clone();
    }
    Ok(prob)
}

/// Exact transcript probability as a rational.
pub fn transcript_probability_exact(instance: &Instance, transcript: &Transcript) -> Result<BigRational, EngineError> {
    transcript_probability::<BigRational>(instance, transcript)
}
