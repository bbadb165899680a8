//! Problem instances: variables with weighted finite domains, clauses with
//! scopes, and the dependency relation between clauses.

mod checks;
mod clause;
mod domain;
pub mod format;

use std::borrow::Cow;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::analysis::DependencyGraph;

pub use checks::{
    check_atomic, check_axiom1, check_axiom3, check_extremal, for_each_assignment, Axiom3Report,
    Axiom3Witness, ExtremalityReport, PairWitness, DEFAULT_ENUMERATION_CAP,
};
pub use clause::{Clause, ClauseKey, Predicate, PredicateFn, TruthTable, TABLE_LIMIT};
pub use domain::{DomainDist, WeightMode, FLOAT_SUM_TOLERANCE};

pub(crate) use clause::{increment, sorted_intersect};

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("domain values must be distinct")]
    DuplicateValue,
    #[error("clause {key}: {reason}")]
    InvalidClause { key: String, reason: String },
    #[error("clause {key}: scope index out of range for {n} variables")]
    ScopeOutOfRange { key: String, n: usize },
    #[error("duplicate clause key {0}")]
    DuplicateClause(String),
    #[error("enumeration of {size} assignments exceeds the cap of {cap}")]
    EnumerationCapExceeded { size: u128, cap: u128 },
    #[error("operation needs explicit clauses, instance is oracle-backed")]
    OracleBackend,
    #[error("oracle-backed instance has no enumerable clause universe")]
    InfiniteClauseUniverse,
    #[error("dependency relation is not symmetric on ({0}, {1})")]
    DependencyNotSymmetric(String, String),
    #[error("dependency relation relates clause {0} to itself")]
    DependencyReflexive(String),
    #[error("clauses {0} and {1} are related but share no variable")]
    DependencyOutsideSharedScope(String, String),
    #[error("assignment has {got} values, instance has {want} variables")]
    AssignmentLength { got: usize, want: usize },
    #[error("value index {value} out of range for variable {var}")]
    ValueOutOfDomain { var: usize, value: usize },
    #[error("instance file: {0}")]
    Format(String),
}

/// One domain index per variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Assignment(Vec<usize>);

impl Assignment {
    pub fn new(values: Vec<usize>) -> Self {
        Assignment(values)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn get(&self, var: usize) -> usize {
        self.0[var]
    }

    pub fn set(&mut self, var: usize, value: usize) {
        self.0[var] = value;
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }
}

impl From<Vec<usize>> for Assignment {
    fn from(v: Vec<usize>) -> Self {
        Assignment(v)
    }
}

/// Reports the violated clauses of implicitly represented formulas.
///
/// Returned clauses must have stable identity: equal keys imply equal scope
/// and predicate across calls.
pub trait ViolationOracle: Send + Sync {
    fn violated(&self, a: &Assignment) -> Vec<Clause>;

    /// Every clause of the formula, when the family is small enough to list.
    fn universe(&self) -> Option<Vec<Clause>> {
        None
    }
}

#[derive(Clone)]
pub enum ClauseBackend {
    Explicit(Vec<Clause>),
    Oracle(Arc<dyn ViolationOracle>),
}

pub type RelationFn = dyn Fn(&Clause, &Clause) -> bool + Send + Sync;

/// Which clauses count as dependent.
#[derive(Clone, Default)]
pub enum DependencyRelation {
    /// Clauses are dependent iff their scopes intersect.
    #[default]
    SharedScope,
    /// Explicit relation; must be symmetric, irreflexive and contained in
    /// the shared-scope relation.
    Custom(Arc<RelationFn>),
}

impl DependencyRelation {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (ClauseKey, ClauseKey)>) -> Self {
        let set: BTreeSet<(ClauseKey, ClauseKey)> = pairs
            .into_iter()
            .flat_map(|(a, b)| [(a.clone(), b.clone()), (b, a)])
            .collect();
        DependencyRelation::Custom(Arc::new(move |a: &Clause, b: &Clause| {
            set.contains(&(a.key().clone(), b.key().clone()))
        }))
    }

    pub fn is_custom(&self) -> bool {
        matches!(self, DependencyRelation::Custom(_))
    }
}

impl fmt::Debug for DependencyRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DependencyRelation::SharedScope => write!(f, "SharedScope"),
            DependencyRelation::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// A formula over independent variables, with its product distribution.
#[derive(Clone)]
pub struct Instance {
    domains: Vec<DomainDist>,
    backend: ClauseBackend,
    dependency: DependencyRelation,
}

impl fmt::Debug for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let clauses = match &self.backend {
            ClauseBackend::Explicit(c) => format!("{} explicit", c.len()),
            ClauseBackend::Oracle(_) => "oracle".to_string(),
        };
        f.debug_struct("Instance")
            .field("variables", &self.domains.len())
            .field("clauses", &clauses)
            .field("dependency", &self.dependency)
            .finish()
    }
}

impl Instance {
    /// Instance with an explicit clause list. Clauses are stored in key order.
    pub fn explicit(domains: Vec<DomainDist>, mut clauses: Vec<Clause>) -> Result<Self, InstanceError> {
        for c in &clauses {
            if c.scope().last().is_some_and(|&i| i >= domains.len()) {
                return Err(InstanceError::ScopeOutOfRange {
                    key: c.key().to_string(),
                    n: domains.len(),
                });
            }
        }
        clauses.sort_by(|a, b| a.key().cmp(b.key()));
        if let Some(w) = clauses.windows(2).find(|w| w[0].key() == w[1].key()) {
            return Err(InstanceError::DuplicateClause(w[0].key().to_string()));
        }
        Ok(Instance {
            domains,
            backend: ClauseBackend::Explicit(clauses),
            dependency: DependencyRelation::SharedScope,
        })
    }

    pub fn with_oracle(domains: Vec<DomainDist>, oracle: Arc<dyn ViolationOracle>) -> Self {
        Instance {
            domains,
            backend: ClauseBackend::Oracle(oracle),
            dependency: DependencyRelation::SharedScope,
        }
    }

    pub fn with_dependency(mut self, dependency: DependencyRelation) -> Self {
        self.dependency = dependency;
        self
    }

    pub fn domains(&self) -> &[DomainDist] {
        &self.domains
    }

    pub fn num_variables(&self) -> usize {
        self.domains.len()
    }

    pub fn backend(&self) -> &ClauseBackend {
        &self.backend
    }

    pub fn dependency(&self) -> &DependencyRelation {
        &self.dependency
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self.backend, ClauseBackend::Explicit(_))
    }

    /// The explicit clause list, or the oracle's universe in key order.
    pub fn clauses(&self) -> Result<Cow<'_, [Clause]>, InstanceError> {
        match &self.backend {
            ClauseBackend::Explicit(c) => Ok(Cow::Borrowed(c)),
            ClauseBackend::Oracle(o) => {
                let mut all = o.universe().ok_or(InstanceError::InfiniteClauseUniverse)?;
                all.sort_by(|a, b| a.key().cmp(b.key()));
                all.dedup_by(|a, b| a.key() == b.key());
                Ok(Cow::Owned(all))
            }
        }
    }

    /// The same formula with its clause family listed explicitly.
    pub fn materialize(&self) -> Result<Instance, InstanceError> {
        let clauses = self.clauses()?.into_owned();
        Ok(Instance {
            domains: self.domains.clone(),
            backend: ClauseBackend::Explicit(clauses),
            dependency: self.dependency.clone(),
        })
    }

    pub fn explicit_clause(&self, key: &ClauseKey) -> Option<&Clause> {
        match &self.backend {
            ClauseBackend::Explicit(c) => c
                .binary_search_by(|x| x.key().cmp(key))
                .ok()
                .map(|i| &c[i]),
            ClauseBackend::Oracle(_) => None,
        }
    }

    pub fn check_assignment(&self, a: &Assignment) -> Result<(), InstanceError> {
        if a.len() != self.domains.len() {
            return Err(InstanceError::AssignmentLength {
                got: a.len(),
                want: self.domains.len(),
            });
        }
        for (var, (&value, d)) in a.as_slice().iter().zip(&self.domains).enumerate() {
            if value >= d.len() {
                return Err(InstanceError::ValueOutOfDomain { var, value });
            }
        }
        Ok(())
    }

    /// The violated clauses under a full assignment, in ascending key order.
    pub fn violated_clauses(&self, a: &Assignment) -> Vec<Clause> {
        match &self.backend {
            ClauseBackend::Explicit(clauses) => {
                clauses.iter().filter(|c| !c.holds_under(a)).cloned().collect()
            }
            ClauseBackend::Oracle(o) => {
                let mut v = o.violated(a);
                v.sort_by(|x, y| x.key().cmp(y.key()));
                v.dedup_by(|x, y| x.key() == y.key());
                v
            }
        }
    }

    pub fn is_satisfied(&self, a: &Assignment) -> bool {
        match &self.backend {
            ClauseBackend::Explicit(clauses) => clauses.iter().all(|c| c.holds_under(a)),
            ClauseBackend::Oracle(o) => o.violated(a).is_empty(),
        }
    }

    /// Whether two distinct clauses are dependent under this instance's relation.
    pub fn depends(&self, a: &Clause, b: &Clause) -> bool {
        match &self.dependency {
            DependencyRelation::SharedScope => a.key() != b.key() && a.shares_variable_with(b),
            DependencyRelation::Custom(f) => f(a, b),
        }
    }

    /// Checks that a custom relation is symmetric, irreflexive and contained
    /// in the shared-scope relation. Shared-scope relations pass trivially.
    pub fn validate_dependency(&self) -> Result<(), InstanceError> {
        let DependencyRelation::Custom(rel) = &self.dependency else {
            return Ok(());
        };
        let clauses = self.clauses()?;
        for (i, a) in clauses.iter().enumerate() {
            if rel(a, a) {
                return Err(InstanceError::DependencyReflexive(a.key().to_string()));
            }
            for b in &clauses[i + 1..] {
                let ab = rel(a, b);
                if ab != rel(b, a) {
                    return Err(InstanceError::DependencyNotSymmetric(
                        a.key().to_string(),
                        b.key().to_string(),
                    ));
                }
                if ab && !a.shares_variable_with(b) {
                    return Err(InstanceError::DependencyOutsideSharedScope(
                        a.key().to_string(),
                        b.key().to_string(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Total number of full assignments, saturating.
    pub fn assignment_count(&self) -> u128 {
        self.domains
            .iter()
            .try_fold(1u128, |acc, d| acc.checked_mul(d.len() as u128))
            .unwrap_or(u128::MAX)
    }
}

/// The dependency graph on clause positions (key order).
pub fn build_dependency_graph(instance: &Instance) -> Result<DependencyGraph, InstanceError> {
    let clauses = instance.clauses()?;
    let m = clauses.len();
    let mut edges = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            if instance.depends(&clauses[i], &clauses[j]) {
                edges.push((i, j));
            }
        }
    }
    Ok(DependencyGraph::new(m, &edges).expect("edges are between distinct clauses"))
}
