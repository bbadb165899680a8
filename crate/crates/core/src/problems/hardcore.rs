//! Hard-core configurations: a Bernoulli variable per vertex and a clause
//! per connected vertex set of size at least two, violated when that set is
//! a cluster (a connected component of the occupied vertices).

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use super::{DecodedObject, Encoded, Graph, ProblemError, SamplerKind, UNIVERSE_LIMIT};
use crate::engine::LowestKey;
use crate::instance::{
    Assignment, Clause, ClauseKey, DependencyRelation, DomainDist, Instance, ViolationOracle,
};

/// Connected components of size at least two among the vertices with
/// `occupied[v]`, each sorted, ordered by least vertex.
pub fn clusters_of(adjacency: &[Vec<usize>], occupied: &[bool]) -> Vec<Vec<usize>> {
    let n = adjacency.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if !occupied[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            i += 1;
            for &w in &adjacency[v] {
                if occupied[w] && !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
        }
        if comp.len() >= 2 {
            comp.sort_unstable();
            out.push(comp);
        }
    }
    out
}

/// Vertices outside `set` adjacent to it, sorted.
fn boundary(adjacency: &[Vec<usize>], set: &[usize]) -> Vec<usize> {
    let mut b: Vec<usize> = set
        .iter()
        .flat_map(|&v| adjacency[v].iter().copied())
        .filter(|w| set.binary_search(w).is_err())
        .collect();
    b.sort_unstable();
    b.dedup();
    b
}

fn is_connected_set(adjacency: &[Vec<usize>], set: &[usize]) -> bool {
    let mut occupied = vec![false; adjacency.len()];
    for &v in set {
        occupied[v] = true;
    }
    let comps = clusters_of(adjacency, &occupied);
    comps.len() == 1 && comps[0].len() == set.len()
}

struct ClusterOracle {
    adjacency: Vec<Vec<usize>>,
}

impl ClusterOracle {
    /// Clause for the cluster `set`: false exactly when every vertex of the
    /// set is occupied and every boundary vertex is free.
    fn clause(&self, set: Vec<usize>) -> Clause {
        let mut scope = set.clone();
        scope.extend(boundary(&self.adjacency, &set));
        scope.sort_unstable();
        let wanted: Vec<usize> = scope
            .iter()
            .map(|v| usize::from(set.binary_search(v).is_ok()))
            .collect();
        Clause::from_callback(
            ClauseKey::Vertices(set),
            scope,
            Arc::new(move |vals: &[usize]| vals != wanted.as_slice()),
        )
    }

    fn connected_sets(&self) -> Option<Vec<Vec<usize>>> {
        let n = self.adjacency.len();
        if n >= 20 || (1usize << n) > 4 * UNIVERSE_LIMIT {
            return None;
        }
        let mut sets = Vec::new();
        for mask in 1usize..1 << n {
            if mask.count_ones() < 2 {
                continue;
            }
            let set: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            if is_connected_set(&self.adjacency, &set) {
                sets.push(set);
                if sets.len() > UNIVERSE_LIMIT {
                    return None;
                }
            }
        }
        sets.sort();
        Some(sets)
    }
}

impl ViolationOracle for ClusterOracle {
    fn violated(&self, a: &Assignment) -> Vec<Clause> {
        let occupied: Vec<bool> = a.as_slice().iter().map(|&x| x == 1).collect();
        clusters_of(&self.adjacency, &occupied)
            .into_iter()
            .map(|s| self.clause(s))
            .collect()
    }

    fn universe(&self) -> Option<Vec<Clause>> {
        Some(self.connected_sets()?.into_iter().map(|s| self.clause(s)).collect())
    }
}

/// Clusters `S` and `S'` are dependent when `S` meets `S'` or its boundary.
fn cluster_relation() -> DependencyRelation {
    DependencyRelation::Custom(Arc::new(|a: &Clause, b: &Clause| {
        let set = a.key().vertices().expect("cluster clauses are keyed by vertex sets");
        a.key() != b.key() && set.iter().any(|v| b.scope().binary_search(v).is_ok())
    }))
}

fn build(g: &Graph, domain: DomainDist) -> Result<Encoded, ProblemError> {
    if g.is_directed() {
        return Err(ProblemError::WrongKind("undirected"));
    }
    let adjacency = g.adjacency();
    let domains = vec![domain; g.n()];
    let instance = Instance::with_oracle(domains, Arc::new(ClusterOracle { adjacency }))
        .with_dependency(cluster_relation());
    Ok(Encoded {
        name: "hardcore",
        instance,
        decoder: Arc::new(|a| {
            DecodedObject::IndependentSet(
                (0..a.len()).filter(|&v| a.get(v) == 1).collect(),
            )
        }),
        sampler: SamplerKind::Limited(Arc::new(LowestKey)),
    })
}

/// Encodes the hard-core model on `g` at activity `lambda` (float weights).
/// The default rule resamples the cluster containing the least vertex.
pub fn encode_hardcore(g: &Graph, lambda: f64) -> Result<Encoded, ProblemError> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(ProblemError::InvalidActivity(lambda.to_string()));
    }
    build(g, DomainDist::bernoulli(lambda / (1.0 + lambda))?)
}

/// Hard-core encoding with exact rational weights.
pub fn encode_hardcore_exact(g: &Graph, lambda: &BigRational) -> Result<Encoded, ProblemError> {
    if !lambda.is_positive() {
        return Err(ProblemError::InvalidActivity(lambda.to_string()));
    }
    let z = lambda / (BigRational::one() + lambda);
    build(g, DomainDist::bernoulli_exact(z)?)
}

/// Local lemma certificate for the cluster clauses: for every connected set
/// `S` with `c` vertices and `b` boundary vertices, `x_S = p^c (1-p)^b`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClusterCertificate {
    pub keys: Vec<ClauseKey>,
    pub x: Vec<f64>,
}

pub fn cluster_certificate(g: &Graph, p: f64) -> Result<ClusterCertificate, ProblemError> {
    let oracle = ClusterOracle {
        adjacency: g.adjacency(),
    };
    let sets = oracle
        .connected_sets()
        .ok_or_else(|| ProblemError::InvalidGraph("too many connected sets to list".into()))?;
    let x = sets
        .iter()
        .map(|s| {
            let b = boundary(&oracle.adjacency, s).len();
            p.powi(s.len() as i32) * (1.0 - p).powi(b as i32)
        })
        .collect();
    Ok(ClusterCertificate {
        keys: sets.into_iter().map(ClauseKey::Vertices).collect(),
        x,
    })
}
