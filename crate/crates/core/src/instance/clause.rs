use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use super::{Assignment, DomainDist, InstanceError};

/// Largest scope product for which a predicate is tabulated.
pub const TABLE_LIMIT: usize = 1 << 16;

/// Stable identity of a clause.
///
/// Explicit clauses are numbered. Clauses produced by violation oracles are
/// keyed by the combinatorial object they forbid, so the same clause gets the
/// same key on every call.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClauseKey {
    Index(usize),
    /// Oriented cycle, rotated to start at its minimum vertex.
    Cycle(Vec<usize>),
    /// Sorted vertex set (clusters).
    Vertices(Vec<usize>),
}

impl ClauseKey {
    pub fn index(&self) -> Option<usize> {
        match self {
            ClauseKey::Index(k) => Some(*k),
            _ => None,
        }
    }

    pub fn vertices(&self) -> Option<&[usize]> {
        match self {
            ClauseKey::Vertices(v) | ClauseKey::Cycle(v) => Some(v),
            ClauseKey::Index(_) => None,
        }
    }
}

impl fmt::Display for ClauseKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join(v: &[usize], sep: &str) -> String {
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
        }
        match self {
            ClauseKey::Index(k) => write!(f, "{k}"),
            ClauseKey::Cycle(c) => write!(f, "cycle:{}", join(c, "-")),
            ClauseKey::Vertices(s) => write!(f, "set:{}", join(s, ",")),
        }
    }
}

impl Serialize for ClauseKey {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ClauseKey::Index(k) => serializer.serialize_u64(*k as u64),
            other => serializer.serialize_str(&other.to_string()),
        }
    }
}

pub type PredicateFn = dyn Fn(&[usize]) -> bool + Send + Sync;

/// Truth table over the mixed-radix product of the scope domains.
/// The first scope variable is the most significant digit.
#[derive(Debug)]
pub struct TruthTable {
    radices: Vec<usize>,
    strides: Vec<usize>,
    satisfied: Vec<bool>,
}

impl TruthTable {
    fn tabulate(radices: Vec<usize>, f: &dyn Fn(&[usize]) -> bool) -> Self {
        let strides = strides(&radices);
        let size: usize = radices.iter().product();
        let mut satisfied = Vec::with_capacity(size);
        let mut digits = vec![0usize; radices.len()];
        for _ in 0..size {
            satisfied.push(f(&digits));
            increment(&mut digits, &radices);
        }
        TruthTable {
            radices,
            strides,
            satisfied,
        }
    }

    fn offset(&self, values: impl Iterator<Item = usize>) -> usize {
        values.zip(&self.strides).map(|(v, s)| v * s).sum()
    }

    pub fn radices(&self) -> &[usize] {
        &self.radices
    }
}

fn strides(radices: &[usize]) -> Vec<usize> {
    let mut strides = vec![1usize; radices.len()];
    for i in (0..radices.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * radices[i + 1];
    }
    strides
}

/// Odometer step, last digit fastest. Returns false on wrap-around.
pub(crate) fn increment(digits: &mut [usize], radices: &[usize]) -> bool {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < radices[i] {
            return true;
        }
        digits[i] = 0;
    }
    false
}

#[derive(Clone)]
pub enum Predicate {
    Table(Arc<TruthTable>),
    Eval(Arc<PredicateFn>),
}

impl fmt::Debug for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::Table(t) => write!(f, "Table({} entries)", t.satisfied.len()),
            Predicate::Eval(_) => write!(f, "Eval"),
        }
    }
}

/// A clause: a total predicate on the values (domain indices) of its scope.
#[derive(Clone, Debug)]
pub struct Clause {
    key: ClauseKey,
    scope: Vec<usize>,
    predicate: Predicate,
}

impl Clause {
    /// Builds a clause from a predicate over scope values (domain indices,
    /// in scope order). Small scopes are tabulated.
    pub fn from_fn<F>(
        key: ClauseKey,
        scope: Vec<usize>,
        domains: &[DomainDist],
        f: F,
    ) -> Result<Self, InstanceError>
    where
        F: Fn(&[usize]) -> bool + Send + Sync + 'static,
    {
        check_scope(&key, &scope, domains.len())?;
        let radices: Vec<usize> = scope.iter().map(|&i| domains[i].len()).collect();
        let size = radices
            .iter()
            .try_fold(1usize, |acc, r| acc.checked_mul(*r))
            .unwrap_or(usize::MAX);
        let predicate = if size <= TABLE_LIMIT {
            Predicate::Table(Arc::new(TruthTable::tabulate(radices, &f)))
        } else {
            Predicate::Eval(Arc::new(f))
        };
        Ok(Clause {
            key,
            scope,
            predicate,
        })
    }

    /// Clause given by callback only, never tabulated. Scope must already be valid.
    pub fn from_callback(key: ClauseKey, scope: Vec<usize>, f: Arc<PredicateFn>) -> Self {
        debug_assert!(scope.windows(2).all(|w| w[0] < w[1]));
        Clause {
            key,
            scope,
            predicate: Predicate::Eval(f),
        }
    }

    /// Clause falsified exactly by the listed scope assignments (domain indices).
    pub fn from_falsifiers(
        key: ClauseKey,
        scope: Vec<usize>,
        domains: &[DomainDist],
        falsifiers: Vec<Vec<usize>>,
    ) -> Result<Self, InstanceError> {
        check_scope(&key, &scope, domains.len())?;
        for f in &falsifiers {
            if f.len() != scope.len() || f.iter().zip(&scope).any(|(v, &i)| *v >= domains[i].len()) {
                return Err(InstanceError::InvalidClause {
                    key: key.to_string(),
                    reason: "falsifier does not fit the scope domains".into(),
                });
            }
        }
        Self::from_fn(key, scope, domains, move |vals| {
            !falsifiers.iter().any(|f| f.as_slice() == vals)
        })
    }

    /// Disjunction of Boolean literals `(variable, wanted value index)`.
    pub fn cnf(
        key: ClauseKey,
        literals: &[(usize, usize)],
        domains: &[DomainDist],
    ) -> Result<Self, InstanceError> {
        let mut lits = literals.to_vec();
        lits.sort_unstable();
        lits.dedup();
        let scope: Vec<usize> = {
            let mut s: Vec<usize> = lits.iter().map(|(v, _)| *v).collect();
            s.dedup();
            s
        };
        if scope.iter().any(|&v| v >= domains.len()) {
            return Err(InstanceError::ScopeOutOfRange {
                key: key.to_string(),
                n: domains.len(),
            });
        }
        let positions: Vec<(usize, usize)> = lits
            .iter()
            .map(|(v, want)| (scope.binary_search(v).unwrap(), *want))
            .collect();
        Self::from_fn(key, scope, domains, move |vals| {
            positions.iter().any(|(pos, want)| vals[*pos] == *want)
        })
    }

    pub fn key(&self) -> &ClauseKey {
        &self.key
    }

    pub fn scope(&self) -> &[usize] {
        &self.scope
    }

    pub fn arity(&self) -> usize {
        self.scope.len()
    }

    pub fn predicate(&self) -> &Predicate {
        &self.predicate
    }

    /// Evaluates the clause on its scope values (domain indices, scope order).
    pub fn holds(&self, scope_values: &[usize]) -> bool {
        match &self.predicate {
            Predicate::Table(t) => t.satisfied[t.offset(scope_values.iter().copied())],
            Predicate::Eval(f) => f(scope_values),
        }
    }

    /// Evaluates the clause on a full assignment.
    pub fn holds_under(&self, a: &Assignment) -> bool {
        let values = a.as_slice();
        match &self.predicate {
            Predicate::Table(t) => t.satisfied[t.offset(self.scope.iter().map(|&i| values[i]))],
            Predicate::Eval(f) => {
                let vals: Vec<usize> = self.scope.iter().map(|&i| values[i]).collect();
                f(&vals)
            }
        }
    }

    pub fn shares_variable_with(&self, other: &Clause) -> bool {
        sorted_intersect(&self.scope, &other.scope)
    }
}

pub(crate) fn sorted_intersect(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

fn check_scope(key: &ClauseKey, scope: &[usize], n: usize) -> Result<(), InstanceError> {
    if scope.windows(2).any(|w| w[0] >= w[1]) {
        return Err(InstanceError::InvalidClause {
            key: key.to_string(),
            reason: "scope must be strictly increasing".into(),
        });
    }
    if scope.last().is_some_and(|&i| i >= n) {
        return Err(InstanceError::ScopeOutOfRange {
            key: key.to_string(),
            n,
        });
    }
    Ok(())
}
