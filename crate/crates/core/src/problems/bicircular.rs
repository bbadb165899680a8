//! Bases of the bicircular matroid: every vertex points at a neighbour, and
//! clauses forbid 2-cycles and cycles traced against their preferred direction.

use std::sync::Arc;

use super::{functional_cycles, simple_cycles, DecodedObject, Encoded, Graph, ProblemError, SamplerKind, UNIVERSE_LIMIT};
use crate::instance::{Assignment, Clause, ClauseKey, DomainDist, Instance, ViolationOracle};

/// Whether a directed cycle (starting at its minimum vertex) runs in its
/// preferred direction: from the minimum vertex towards the smaller of its
/// two cycle neighbours. 2-cycles have no preferred direction.
pub fn preferred_orientation(cycle: &[usize]) -> bool {
    cycle.len() >= 3 && cycle[1] < cycle[cycle.len() - 1]
}

fn forbidden(cycle: &[usize]) -> bool {
    cycle.len() == 2 || !preferred_orientation(cycle)
}

struct BasisOracle {
    neighbors: Vec<Vec<usize>>,
}

impl BasisOracle {
    fn clause(&self, cycle: &[usize]) -> Clause {
        let mut wanted: Vec<(usize, usize)> = cycle
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let succ = cycle[(i + 1) % cycle.len()];
                (v, self.neighbors[v].binary_search(&succ).expect("cycle follows edges"))
            })
            .collect();
        wanted.sort_unstable();
        let scope = wanted.iter().map(|w| w.0).collect();
        let values: Vec<usize> = wanted.iter().map(|w| w.1).collect();
        Clause::from_callback(
            ClauseKey::Cycle(cycle.to_vec()),
            scope,
            Arc::new(move |vals: &[usize]| vals != values.as_slice()),
        )
    }
}

impl ViolationOracle for BasisOracle {
    fn violated(&self, a: &Assignment) -> Vec<Clause> {
        let next: Vec<Option<usize>> = (0..self.neighbors.len())
            .map(|v| Some(self.neighbors[v][a.get(v)]))
            .collect();
        functional_cycles(&next)
            .iter()
            .filter(|c| forbidden(c))
            .map(|c| self.clause(c))
            .collect()
    }

    fn universe(&self) -> Option<Vec<Clause>> {
        let cycles = simple_cycles(&self.neighbors, &vec![true; self.neighbors.len()], UNIVERSE_LIMIT)?;
        Some(cycles.iter().filter(|c| forbidden(c)).map(|c| self.clause(c)).collect())
    }
}

fn components(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(u, v) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        parent[a] = b;
    }
    (0..n).map(|v| find(&mut parent, v)).collect()
}

/// Whether `basis` is a spanning subgraph of `g` whose every component has
/// exactly as many edges as vertices.
pub fn is_bicircular_basis(g: &Graph, basis: &[(usize, usize)]) -> bool {
    let adj = g.adjacency();
    if basis.iter().any(|&(u, v)| u >= g.n() || adj[u].binary_search(&v).is_err()) {
        return false;
    }
    let comp = components(g.n(), basis);
    let mut vertices = vec![0usize; g.n()];
    let mut edges = vec![0usize; g.n()];
    for v in 0..g.n() {
        vertices[comp[v]] += 1;
    }
    for &(u, _) in basis {
        edges[comp[u]] += 1;
    }
    vertices == edges
}

/// Encodes bicircular matroid bases of the undirected graph `g`, uniformly.
pub fn encode_bicircular(g: &Graph) -> Result<Encoded, ProblemError> {
    if g.is_directed() {
        return Err(ProblemError::WrongKind("undirected"));
    }
    let neighbors = g.adjacency();
    let comp = components(g.n(), g.edges());
    let mut vertices = vec![0usize; g.n()];
    let mut edges = vec![0usize; g.n()];
    for v in 0..g.n() {
        vertices[comp[v]] += 1;
    }
    for &(u, _) in g.edges() {
        edges[comp[u]] += 1;
    }
    if (0..g.n()).any(|c| edges[c] < vertices[c]) {
        return Err(ProblemError::NoBasis);
    }
    let domains = neighbors
        .iter()
        .map(|ns| DomainDist::uniform(ns.iter().map(|&w| w as i64).collect()))
        .collect::<Result<Vec<_>, _>>()?;
    let decode_neighbors = neighbors.clone();
    Ok(Encoded {
        name: "bicircular",
        instance: Instance::with_oracle(domains, Arc::new(BasisOracle { neighbors })),
        decoder: Arc::new(move |a| {
            let mut basis: Vec<(usize, usize)> = (0..a.len())
                .map(|v| {
                    let w = decode_neighbors[v][a.get(v)];
                    (v.min(w), v.max(w))
                })
                .collect();
            basis.sort_unstable();
            basis.dedup();
            DecodedObject::MatroidBasis(basis)
        }),
        sampler: SamplerKind::Extremal,
    })
}
