use serde::Serialize;

use super::{independent_sets, AnalysisError, DependencyGraph, Scalar};

/// Violation probabilities with the derived `q` quantities for the empty set
/// and every singleton.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QTable<T> {
    pub p: Vec<T>,
    pub q_empty: T,
    pub q_singleton: Vec<T>,
}

fn check_len<T>(g: &DependencyGraph, z: &[T]) -> Result<(), AnalysisError> {
    if z.len() != g.len() {
        return Err(AnalysisError::LengthMismatch {
            got: z.len(),
            want: g.len(),
        });
    }
    Ok(())
}

fn product<T: Scalar>(z: &[T], set: &[usize]) -> T {
    set.iter().fold(T::one(), |acc, &k| acc * z[k].clone())
}

fn signed<T: Scalar>(value: T, size: usize) -> T {
    if size.is_multiple_of(2) {
        value
    } else {
        -value
    }
}

/// The signed independence polynomial: the sum over independent sets `I` of
/// `(-1)^|I|` times the product of `z` over `I`.
pub fn indep_poly<T: Scalar>(g: &DependencyGraph, z: &[T], cap: usize) -> Result<T, AnalysisError> {
    check_len(g, z)?;
    Ok(independent_sets(g, cap)?.fold(T::zero(), |acc, set| {
        let term = signed(product(z, &set), set.len());
        acc + term
    }))
}

fn agree<T: Scalar>(a: &T, b: &T) -> bool {
    if T::is_exact() {
        a == b
    } else {
        let (x, y) = (a.to_f64(), b.to_f64());
        (x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1.0)
    }
}

/// Polynomial of the graph with the closed neighbourhood of `set` removed,
/// evaluated at the matching entries of `p`.
fn poly_outside<T: Scalar>(
    g: &DependencyGraph,
    p: &[T],
    set: &[usize],
    cap: usize,
) -> Result<T, AnalysisError> {
    let (rest, kept) = g.without(&g.closed_neighborhood(set));
    let z: Vec<T> = kept.iter().map(|&k| p[k].clone()).collect();
    indep_poly(&rest, &z, cap)
}

/// Inclusion-exclusion over the independent supersets of `set`. Zero when
/// `set` is not independent. The result is cross-checked against the
/// factorised form `p_S` times the polynomial of the graph outside the
/// closed neighbourhood of `S`.
pub fn q_value<T: Scalar>(
    g: &DependencyGraph,
    p: &[T],
    set: &[usize],
    cap: usize,
) -> Result<T, AnalysisError> {
    check_len(g, p)?;
    let mut wanted = set.to_vec();
    wanted.sort_unstable();
    wanted.dedup();
    if wanted.iter().any(|&k| k >= g.len()) {
        return Err(AnalysisError::InvalidGraph(format!("clause set {wanted:?} out of range")));
    }
    if !g.is_independent(&wanted) {
        return Ok(T::zero());
    }
    let by_supersets = independent_sets(g, cap)?
        .filter(|i| wanted.iter().all(|k| i.binary_search(k).is_ok()))
        .fold(T::zero(), |acc, i| {
            let term = signed(product(p, &i), i.len() - wanted.len());
            acc + term
        });
    let factorised = product(p, &wanted) * poly_outside(g, p, &wanted, cap)?;
    if !agree(&by_supersets, &factorised) {
        return Err(AnalysisError::CrossCheck(format!("{wanted:?}")));
    }
    Ok(by_supersets)
}

/// `q` for the empty set and every singleton, in one enumeration pass, each
/// singleton cross-checked against its factorised form.
pub fn q_table<T: Scalar>(g: &DependencyGraph, p: &[T], cap: usize) -> Result<QTable<T>, AnalysisError> {
    check_len(g, p)?;
    let mut q_empty = T::zero();
    let mut q_singleton = vec![T::zero(); g.len()];
    for set in independent_sets(g, cap)? {
        let term = signed(product(p, &set), set.len());
        for &k in &set {
            q_singleton[k] = q_singleton[k].clone() - term.clone();
        }
        q_empty = q_empty + term;
    }
    for (k, q) in q_singleton.iter().enumerate() {
        let factorised = p[k].clone() * poly_outside(g, p, &[k], cap)?;
        if !agree(q, &factorised) {
            return Err(AnalysisError::CrossCheck(format!("[{k}]")));
        }
    }
    Ok(QTable {
        p: p.to_vec(),
        q_empty,
        q_singleton,
    })
}
