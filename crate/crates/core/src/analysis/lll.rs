use serde::Serialize;

use super::{AnalysisError, DependencyGraph, Scalar};

/// Outcome of checking a local lemma certificate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LllReport<T> {
    pub valid: bool,
    /// Per clause, the bound `x_k / (1 - x_k)` on its expected resamplings.
    pub bounds: Vec<T>,
    /// Clauses where `p_k <= x_k * prod over neighbours (1 - x_l)` fails.
    pub failing: Vec<usize>,
}

/// Checks the local lemma condition for every clause and reports the
/// resampling bounds it would imply. Bounds are reported even when the
/// certificate is invalid.
pub fn lll_check<T: Scalar>(g: &DependencyGraph, p: &[T], x: &[T]) -> Result<LllReport<T>, AnalysisError> {
    for v in [p, x] {
        if v.len() != g.len() {
            return Err(AnalysisError::LengthMismatch {
                got: v.len(),
                want: g.len(),
            });
        }
    }
    if let Some(k) = x.iter().position(|xk| *xk <= T::zero() || *xk >= T::one()) {
        return Err(AnalysisError::InvalidCertificate(format!(
            "x[{k}] = {} is outside (0, 1)",
            x[k].to_f64()
        )));
    }
    let failing: Vec<usize> = (0..g.len())
        .filter(|&k| {
            let rhs = g
                .neighbors(k)
                .iter()
                .fold(x[k].clone(), |acc, &l| acc * (T::one() - x[l].clone()));
            p[k] > rhs
        })
        .collect();
    let bounds = x
        .iter()
        .map(|xk| xk.clone() / (T::one() - xk.clone()))
        .collect();
    Ok(LllReport {
        valid: failing.is_empty(),
        bounds,
        failing,
    })
}
