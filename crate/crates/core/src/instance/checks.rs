//! Static checks on explicit instances, by enumeration over joint scopes.

use rayon::prelude::*;
use serde::Serialize;

use super::{increment, sorted_intersect, Clause, ClauseKey, DomainDist, Instance, InstanceError};

/// Default cap on the number of assignments a single check may enumerate.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 24;

/// Two clauses that can be false together, with the lexicographically least
/// assignment to the union of their scopes witnessing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairWitness {
    pub first: ClauseKey,
    pub second: ClauseKey,
    /// `(variable, value index)` pairs over the union of both scopes.
    pub witness: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremalityReport {
    pub extremal: bool,
    pub violations: Vec<PairWitness>,
}

/// Calls `f` on every assignment to `vars` (domain indices, lexicographic,
/// first variable most significant). Stops early when `f` returns false.
pub fn for_each_assignment(
    domains: &[DomainDist],
    vars: &[usize],
    cap: u128,
    mut f: impl FnMut(&[usize]) -> bool,
) -> Result<(), InstanceError> {
    let radices: Vec<usize> = vars.iter().map(|&v| domains[v].len()).collect();
    let size = radices
        .iter()
        .try_fold(1u128, |acc, r| acc.checked_mul(*r as u128))
        .unwrap_or(u128::MAX);
    if size > cap {
        return Err(InstanceError::EnumerationCapExceeded { size, cap });
    }
    let mut digits = vec![0usize; vars.len()];
    loop {
        if !f(&digits) {
            return Ok(());
        }
        if !increment(&mut digits, &radices) {
            return Ok(());
        }
    }
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
    u.sort_unstable();
    u.dedup();
    u
}

fn positions(scope: &[usize], within: &[usize]) -> Vec<usize> {
    scope
        .iter()
        .map(|v| within.binary_search(v).expect("scope contained in union"))
        .collect()
}

fn gather(values: &[usize], pos: &[usize], buf: &mut Vec<usize>) {
    buf.clear();
    buf.extend(pos.iter().map(|&p| values[p]));
}

fn both_false_witness(
    domains: &[DomainDist],
    a: &Clause,
    b: &Clause,
    cap: u128,
) -> Result<Option<PairWitness>, InstanceError> {
    let vars = union(a.scope(), b.scope());
    let pa = positions(a.scope(), &vars);
    let pb = positions(b.scope(), &vars);
    let mut buf = Vec::new();
    let mut found = None;
    for_each_assignment(domains, &vars, cap, |vals| {
        gather(vals, &pa, &mut buf);
        if a.holds(&buf) {
            return true;
        }
        gather(vals, &pb, &mut buf);
        if b.holds(&buf) {
            return true;
        }
        found = Some(vars.iter().copied().zip(vals.iter().copied()).collect());
        false
    })?;
    Ok(found.map(|witness| PairWitness {
        first: a.key().clone(),
        second: b.key().clone(),
        witness,
    }))
}

fn explicit_clauses(instance: &Instance) -> Result<&[Clause], InstanceError> {
    match instance.backend() {
        super::ClauseBackend::Explicit(c) => Ok(c),
        super::ClauseBackend::Oracle(_) => Err(InstanceError::OracleBackend),
    }
}

fn pairwise_disjunction(
    instance: &Instance,
    cap: u128,
    related: impl Fn(&Clause, &Clause) -> bool + Sync,
) -> Result<ExtremalityReport, InstanceError> {
    let clauses = explicit_clauses(instance)?;
    let pairs: Vec<(usize, usize)> = (0..clauses.len())
        .flat_map(|i| (i + 1..clauses.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| related(&clauses[i], &clauses[j]))
        .collect();
    let results: Vec<Result<Option<PairWitness>, InstanceError>> = pairs
        .par_iter()
        .map(|&(i, j)| both_false_witness(instance.domains(), &clauses[i], &clauses[j], cap))
        .collect();
    let mut violations = Vec::new();
    for r in results {
        if let Some(w) = r? {
            violations.push(w);
        }
    }
    Ok(ExtremalityReport {
        extremal: violations.is_empty(),
        violations,
    })
}

/// Extremality: every pair of clauses with intersecting scopes has a
/// tautological disjunction.
pub fn check_extremal(instance: &Instance, cap: u128) -> Result<ExtremalityReport, InstanceError> {
    pairwise_disjunction(instance, cap, |a, b| a.shares_variable_with(b))
}

/// Axiom 1: related clauses cannot both be false, under the instance's own
/// dependency relation.
pub fn check_axiom1(instance: &Instance, cap: u128) -> Result<ExtremalityReport, InstanceError> {
    pairwise_disjunction(instance, cap, |a, b| instance.depends(a, b))
}

/// Per clause (key order): whether exactly one scope assignment falsifies it.
pub fn check_atomic(instance: &Instance, cap: u128) -> Result<Vec<bool>, InstanceError> {
    let clauses = explicit_clauses(instance)?;
    clauses
        .iter()
        .map(|c| {
            let mut falsifiers = 0usize;
            for_each_assignment(instance.domains(), c.scope(), cap, |vals| {
                if !c.holds(vals) {
                    falsifiers += 1;
                }
                falsifiers <= 1
            })?;
            Ok(falsifiers == 1)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Axiom3Witness {
    pub first: ClauseKey,
    pub second: ClauseKey,
    /// Assignment to the union of both scopes before the first resampling.
    pub before: Vec<(usize, usize)>,
    /// Fresh values drawn for the scope of `first`.
    pub redraw: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Axiom3Report {
    pub holds: bool,
    pub violations: Vec<Axiom3Witness>,
}

/// Axiom 3 by exhaustion: for unrelated `k`, `l` with intersecting scopes,
/// whenever resampling `k` and then `l` is possible, so is `l` then `k`
/// on the same table.
///
/// With `x` the values before, `y` the next values of `Scp(k)`: if `k` is
/// false on `x` and `l` is false after `Scp(k) <- y`, then `l` must be false
/// on `x` and `k` must be false once the shared variables take `y`.
pub fn check_axiom3(instance: &Instance, cap: u128) -> Result<Axiom3Report, InstanceError> {
    let clauses = explicit_clauses(instance)?;
    let domains = instance.domains();
    let mut violations = Vec::new();
    for k in clauses {
        for l in clauses {
            if k.key() == l.key() || instance.depends(k, l) || !sorted_intersect(k.scope(), l.scope()) {
                continue;
            }
            let vars = union(k.scope(), l.scope());
            let pk = positions(k.scope(), &vars);
            let pl = positions(l.scope(), &vars);
            let shared: Vec<usize> = (0..k.scope().len())
                .filter(|&i| l.scope().binary_search(&k.scope()[i]).is_ok())
                .collect();
            let size_y = k
                .scope()
                .iter()
                .try_fold(1u128, |acc, &v| acc.checked_mul(domains[v].len() as u128))
                .unwrap_or(u128::MAX);
            let mut buf = Vec::new();
            let mut found: Option<Axiom3Witness> = None;
            let mut err = None;
            for_each_assignment(domains, &vars, cap / size_y.max(1), |x| {
                gather(x, &pk, &mut buf);
                if k.holds(&buf) {
                    return true;
                }
                let r = for_each_assignment(domains, k.scope(), cap, |y| {
                    let mut after_k = x.to_vec();
                    for (i, &p) in pk.iter().enumerate() {
                        after_k[p] = y[i];
                    }
                    gather(&after_k, &pl, &mut buf);
                    if l.holds(&buf) {
                        return true;
                    }
                    gather(x, &pl, &mut buf);
                    let l_first = !l.holds(&buf);
                    let mut swapped = x.to_vec();
                    for &i in &shared {
                        swapped[pk[i]] = y[i];
                    }
                    gather(&swapped, &pk, &mut buf);
                    let k_second = !k.holds(&buf);
                    if l_first && k_second {
                        return true;
                    }
                    found = Some(Axiom3Witness {
                        first: k.key().clone(),
                        second: l.key().clone(),
                        before: vars.iter().copied().zip(x.iter().copied()).collect(),
                        redraw: k.scope().iter().copied().zip(y.iter().copied()).collect(),
                    });
                    false
                });
                if let Err(e) = r {
                    err = Some(e);
                    return false;
                }
                found.is_none()
            })
            .map_err(|_| InstanceError::EnumerationCapExceeded {
                size: u128::MAX,
                cap,
            })?;
            if let Some(e) = err {
                return Err(e);
            }
            violations.extend(found);
        }
    }
    Ok(Axiom3Report {
        holds: violations.is_empty(),
        violations,
    })
}
