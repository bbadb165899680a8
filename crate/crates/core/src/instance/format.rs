//! JSON instance files.
//!
//! ```json
//! {
//!   "variables": [
//!     {"name": "x1", "values": [0, 1], "weights": ["1/2", "1/2"]},
//!     {"name": "x2", "values": [0, 1, 2], "weights": [0.2, 0.3, 0.5]}
//!   ],
//!   "clauses": [
//!     {"scope": [0, 1], "falsifiers": [[1, 2]]},
//!     {"cnf": [1, -2]}
//!   ],
//!   "dependency": [[0, 1]]
//! }
//! ```
//!
//! Scopes and dependency pairs use 0-based indices; falsifiers list domain
//! values. CNF literals are signed 1-based variable numbers: `+v` wants value
//! 1 of variable `v`, `-v` wants value 0. Weights written as strings are parsed
//! exactly (`"p/q"`, integers or decimals); a variable whose weights are all
//! strings is an exact domain, any JSON number makes it a float domain.
//! Missing weights mean uniform.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Deserialize;

use super::{Clause, ClauseKey, DependencyRelation, DomainDist, Instance, InstanceError};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    variables: Vec<VariableSpec>,
    #[serde(default)]
    clauses: Vec<ClauseSpec>,
    #[serde(default)]
    dependency: Option<Vec<(usize, usize)>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VariableSpec {
    #[serde(default)]
    name: Option<String>,
    values: Vec<i64>,
    #[serde(default)]
    weights: Option<Vec<WeightSpec>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum WeightSpec {
    Text(String),
    Number(f64),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ClauseSpec {
    Falsifiers {
        scope: Vec<usize>,
        falsifiers: Vec<Vec<i64>>,
    },
    Cnf {
        cnf: Vec<i64>,
    },
}

/// A parsed instance together with its variable names.
#[derive(Clone, Debug)]
pub struct LoadedInstance {
    pub instance: Instance,
    pub names: Vec<String>,
}

/// Parses an exact rational from `"p/q"`, an integer or a decimal string.
pub fn parse_rational(text: &str) -> Result<BigRational, InstanceError> {
    let bad = || InstanceError::Format(format!("not a rational: {text:?}"));
    let t = text.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let negative = int.starts_with('-');
        let int_part = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            BigInt::from_str(int).map_err(|_| bad())?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part = BigRational::new(BigInt::from_str(frac).map_err(|_| bad())?, scale);
        let whole = BigRational::from_integer(int_part.clone());
        return Ok(if negative || int_part < BigInt::zero() {
            whole - frac_part
        } else {
            whole + frac_part
        });
    }
    BigInt::from_str(t)
        .map(BigRational::from_integer)
        .map_err(|_| bad())
}

fn build_domain(v: &VariableSpec) -> Result<DomainDist, InstanceError> {
    match &v.weights {
        None => DomainDist::uniform(v.values.clone()),
        Some(ws) if ws.iter().all(|w| matches!(w, WeightSpec::Text(_))) => {
            let exact = ws
                .iter()
                .map(|w| match w {
                    WeightSpec::Text(s) => parse_rational(s),
                    WeightSpec::Number(_) => unreachable!(),
                })
                .collect::<Result<Vec<_>, _>>()?;
            DomainDist::exact(v.values.clone(), exact)
        }
        Some(ws) => {
            let floats = ws
                .iter()
                .map(|w| match w {
                    WeightSpec::Number(x) => Ok(*x),
                    WeightSpec::Text(s) => parse_rational(s).map(|r| r.to_f64().unwrap_or(f64::NAN)),
                })
                .collect::<Result<Vec<_>, _>>()?;
            DomainDist::float(v.values.clone(), floats)
        }
    }
}

fn value_index(domains: &[DomainDist], var: usize, value: i64) -> Result<usize, InstanceError> {
    domains[var]
        .index_of(value)
        .ok_or_else(|| InstanceError::Format(format!("value {value} not in the domain of variable {var}")))
}

fn build_clause(k: usize, spec: ClauseSpec, domains: &[DomainDist]) -> Result<Clause, InstanceError> {
    let key = ClauseKey::Index(k);
    match spec {
        ClauseSpec::Falsifiers { scope, falsifiers } => {
            if scope.iter().any(|&v| v >= domains.len()) {
                return Err(InstanceError::ScopeOutOfRange {
                    key: key.to_string(),
                    n: domains.len(),
                });
            }
            let rows = falsifiers
                .iter()
                .map(|row| {
                    if row.len() != scope.len() {
                        return Err(InstanceError::Format(format!(
                            "clause {k}: falsifier length {} does not match scope length {}",
                            row.len(),
                            scope.len()
                        )));
                    }
                    row.iter()
                        .zip(&scope)
                        .map(|(&val, &var)| value_index(domains, var, val))
                        .collect()
                })
                .collect::<Result<Vec<Vec<usize>>, _>>()?;
            Clause::from_falsifiers(key, scope, domains, rows)
        }
        ClauseSpec::Cnf { cnf } => {
            let literals = cnf
                .iter()
                .map(|&lit| {
                    if lit == 0 || lit.unsigned_abs() as usize > domains.len() {
                        return Err(InstanceError::Format(format!("clause {k}: bad literal {lit}")));
                    }
                    let var = lit.unsigned_abs() as usize - 1;
                    let want = value_index(domains, var, i64::from(lit > 0))?;
                    Ok((var, want))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Clause::cnf(key, &literals, domains)
        }
    }
}

/// Parses a JSON instance document.
pub fn parse_instance(text: &str) -> Result<LoadedInstance, InstanceError> {
    let file: InstanceFile =
        serde_json::from_str(text).map_err(|e| InstanceError::Format(e.to_string()))?;
    let names = file
        .variables
        .iter()
        .enumerate()
        .map(|(i, v)| v.name.clone().unwrap_or_else(|| format!("x{}", i + 1)))
        .collect();
    let domains = file
        .variables
        .iter()
        .map(build_domain)
        .collect::<Result<Vec<_>, _>>()?;
    let m = file.clauses.len();
    let clauses = file
        .clauses
        .into_iter()
        .enumerate()
        .map(|(k, spec)| build_clause(k, spec, &domains))
        .collect::<Result<Vec<_>, _>>()?;
    let mut instance = Instance::explicit(domains, clauses)?;
    if let Some(pairs) = file.dependency {
        if let Some(&(a, b)) = pairs.iter().find(|&&(a, b)| a >= m || b >= m) {
            return Err(InstanceError::Format(format!("dependency pair ({a}, {b}) out of range")));
        }
        instance = instance.with_dependency(DependencyRelation::from_pairs(
            pairs
                .into_iter()
                .map(|(a, b)| (ClauseKey::Index(a), ClauseKey::Index(b))),
        ));
        instance.validate_dependency()?;
    }
    Ok(LoadedInstance { instance, names })
}
