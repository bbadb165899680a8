use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::Serialize;

use super::{q_table, AnalysisError, QTable, Scalar, DEFAULT_SET_CAP};
use crate::instance::{
    build_dependency_graph, check_extremal, for_each_assignment, Assignment, Clause, ClauseKey,
    DomainDist, Instance, DEFAULT_ENUMERATION_CAP,
};

/// Largest state space [`brute_force_target`] and [`clause_profile`] enumerate by default.
pub const BRUTE_FORCE_CAP: u128 = 1 << 24;

/// Float-mode values of `q_empty` at or below this are recomputed exactly.
pub const ESCALATION_THRESHOLD: f64 = 1e-12;

fn weight_tables<T: Scalar>(domains: &[DomainDist]) -> Vec<Vec<T>> {
    domains
        .iter()
        .map(|d| (0..d.len()).map(|i| T::from_weight(d, i)).collect())
        .collect()
}

fn false_prob<T: Scalar>(domains: &[DomainDist], clause: &Clause) -> Result<T, AnalysisError> {
    let weights = weight_tables::<T>(domains);
    let mut total = T::zero();
    for_each_assignment(domains, clause.scope(), DEFAULT_ENUMERATION_CAP, |vals| {
        if !clause.holds(vals) {
            let w = clause
                .scope()
                .iter()
                .zip(vals)
                .fold(T::one(), |acc, (&var, &v)| acc * weights[var][v].clone());
            total = total.clone() + w;
        }
        true
    })?;
    Ok(total)
}

/// Probability under the product distribution that the clause with `key` is false.
pub fn clause_false_prob<T: Scalar>(instance: &Instance, key: &ClauseKey) -> Result<T, AnalysisError> {
    let clauses = instance.clauses()?;
    let clause = clauses
        .iter()
        .find(|c| c.key() == key)
        .ok_or_else(|| AnalysisError::InvalidGraph(format!("no clause with key {key}")))?;
    false_prob(instance.domains(), clause)
}

/// Violation probabilities of all clauses, in key order.
pub fn p_vector<T: Scalar>(instance: &Instance) -> Result<Vec<T>, AnalysisError> {
    instance
        .clauses()?
        .iter()
        .map(|c| false_prob(instance.domains(), c))
        .collect()
}

/// Predicted resampling counts of the extremal sampler.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpectedCounts<T> {
    pub keys: Vec<ClauseKey>,
    pub table: QTable<T>,
    /// Expected number of resamplings of each clause scope.
    pub per_clause: Vec<T>,
    pub iterations: T,
    pub variable_resamples: T,
    /// Whether a float computation fell back to exact arithmetic.
    pub escalated: bool,
}

fn counts_from_table<T: Scalar>(
    keys: Vec<ClauseKey>,
    arities: &[usize],
    table: QTable<T>,
    escalated: bool,
) -> Result<ExpectedCounts<T>, AnalysisError> {
    if table.q_empty <= T::zero() {
        return Err(AnalysisError::Unsatisfiable(table.q_empty.to_f64().to_string()));
    }
    let per_clause: Vec<T> = table
        .q_singleton
        .iter()
        .map(|q| q.clone() / table.q_empty.clone())
        .collect();
    let iterations = per_clause.iter().fold(T::zero(), |acc, e| acc + e.clone());
    let variable_resamples = per_clause
        .iter()
        .zip(arities)
        .fold(T::zero(), |acc, (e, &a)| acc + e.clone() * T::from_rational(&BigRational::from_integer(a.into())));
    Ok(ExpectedCounts {
        keys,
        table,
        per_clause,
        iterations,
        variable_resamples,
        escalated,
    })
}

struct Prepared {
    instance: Instance,
    keys: Vec<ClauseKey>,
    arities: Vec<usize>,
}

fn prepare(instance: &Instance) -> Result<Prepared, AnalysisError> {
    let explicit = if instance.is_explicit() {
        instance.clone()
    } else {
        instance.materialize()?
    };
    let report = check_extremal(&explicit, DEFAULT_ENUMERATION_CAP)?;
    if let Some(w) = report.violations.first() {
        return Err(AnalysisError::NotExtremal(w.first.to_string(), w.second.to_string()));
    }
    let clauses = explicit.clauses()?;
    let keys = clauses.iter().map(|c| c.key().clone()).collect();
    let arities = clauses.iter().map(Clause::arity).collect();
    drop(clauses);
    Ok(Prepared {
        instance: explicit,
        keys,
        arities,
    })
}

fn table_for<T: Scalar>(prepared: &Prepared) -> Result<QTable<T>, AnalysisError> {
    let g = build_dependency_graph(&prepared.instance)?;
    let p = p_vector::<T>(&prepared.instance)?;
    q_table(&g, &p, DEFAULT_SET_CAP)
}

/// Expected per-clause resamplings `q_{k} / q_empty`, their sum (iterations) and
/// the arity-weighted sum (variable resamplings).
pub fn expected_counts<T: Scalar>(instance: &Instance) -> Result<ExpectedCounts<T>, AnalysisError> {
    let prepared = prepare(instance)?;
    let table = table_for::<T>(&prepared)?;
    counts_from_table(prepared.keys, &prepared.arities, table, false)
}

/// Float expected counts, recomputed in exact arithmetic when `q_empty` is
/// within [`ESCALATION_THRESHOLD`] of zero or below.
pub fn expected_counts_f64(instance: &Instance) -> Result<ExpectedCounts<f64>, AnalysisError> {
    let prepared = prepare(instance)?;
    let table = table_for::<f64>(&prepared)?;
    if table.q_empty > ESCALATION_THRESHOLD {
        return counts_from_table(prepared.keys, &prepared.arities, table, false);
    }
    let exact_table = table_for::<BigRational>(&prepared)?;
    let exact = counts_from_table(prepared.keys, &prepared.arities, exact_table, true)?;
    let f = |v: &[BigRational]| v.iter().map(Scalar::to_f64).collect::<Vec<f64>>();
    Ok(ExpectedCounts {
        keys: exact.keys,
        table: QTable {
            p: f(&exact.table.p),
            q_empty: exact.table.q_empty.to_f64(),
            q_singleton: f(&exact.table.q_singleton),
        },
        per_clause: f(&exact.per_clause),
        iterations: exact.iterations.to_f64(),
        variable_resamples: exact.variable_resamples.to_f64(),
        escalated: true,
    })
}

/// The product distribution conditioned on the formula, as an explicit list
/// of satisfying assignments (lexicographic) with their probabilities.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TargetDist<T> {
    pub outcomes: Vec<(Assignment, T)>,
    /// Unconditioned probability of the formula.
    pub pr_satisfied: T,
}

fn total_guard(instance: &Instance, cap: u128) -> Result<(), AnalysisError> {
    let size = instance.assignment_count();
    if size > cap {
        return Err(AnalysisError::CapExceeded {
            what: "assignment enumeration",
            size,
            cap,
        });
    }
    Ok(())
}

fn all_vars(instance: &Instance) -> Vec<usize> {
    (0..instance.num_variables()).collect()
}

fn assignment_weight<T: Scalar>(weights: &[Vec<T>], vals: &[usize]) -> T {
    vals.iter()
        .enumerate()
        .fold(T::one(), |acc, (var, &v)| acc * weights[var][v].clone())
}

/// Exact target distribution by enumerating every full assignment.
pub fn brute_force_target<T: Scalar>(instance: &Instance, cap: u128) -> Result<TargetDist<T>, AnalysisError> {
    total_guard(instance, cap)?;
    let weights = weight_tables::<T>(instance.domains());
    let mut outcomes = Vec::new();
    let mut total = T::zero();
    for_each_assignment(instance.domains(), &all_vars(instance), cap, |vals| {
        let w = assignment_weight(&weights, vals);
        if w > T::zero() {
            let a = Assignment::new(vals.to_vec());
            if instance.is_satisfied(&a) {
                total = total.clone() + w.clone();
                outcomes.push((a, w));
            }
        }
        true
    })?;
    if total <= T::zero() {
        return Err(AnalysisError::Unsatisfiable("0".into()));
    }
    for (_, w) in &mut outcomes {
        *w = w.clone() / total.clone();
    }
    Ok(TargetDist {
        outcomes,
        pr_satisfied: total,
    })
}

/// Probability of the formula and, per clause, the probability that it is
/// the only false clause, by enumerating every full assignment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClauseProfile<T> {
    pub pr_satisfied: T,
    /// Keyed by clause; clauses that are never the unique false clause have
    /// probability zero when the clause family is enumerable and are absent
    /// otherwise.
    pub only_false: BTreeMap<ClauseKey, T>,
}

pub fn clause_profile<T: Scalar>(instance: &Instance, cap: u128) -> Result<ClauseProfile<T>, AnalysisError> {
    total_guard(instance, cap)?;
    let weights = weight_tables::<T>(instance.domains());
    let mut only_false: BTreeMap<ClauseKey, T> = match instance.clauses() {
        Ok(cs) => cs.iter().map(|c| (c.key().clone(), T::zero())).collect(),
        Err(_) => BTreeMap::new(),
    };
    let mut pr_satisfied = T::zero();
    for_each_assignment(instance.domains(), &all_vars(instance), cap, |vals| {
        let w = assignment_weight(&weights, vals);
        let violated = instance.violated_clauses(&Assignment::new(vals.to_vec()));
        match violated.as_slice() {
            [] => pr_satisfied = pr_satisfied.clone() + w,
            [only] => {
                let entry = only_false.entry(only.key().clone()).or_insert_with(T::zero);
                *entry = entry.clone() + w;
            }
            _ => {}
        }
        true
    })?;
    Ok(ClauseProfile {
        pr_satisfied,
        only_false,
    })
}
