//! Spanning arborescences by cycle popping: every non-root vertex points at
//! one neighbour, and a clause forbids each possible cycle of pointers.

use std::sync::Arc;

use super::{functional_cycles, simple_cycles, DecodedObject, Encoded, Graph, ProblemError, SamplerKind, UNIVERSE_LIMIT};
use crate::instance::{Assignment, Clause, ClauseKey, DomainDist, Instance, ViolationOracle};

/// Maps vertices to variables (non-root vertices, ascending) and back.
#[derive(Clone, Debug)]
struct Layout {
    root: usize,
    var_of: Vec<Option<usize>>,
    neighbors: Vec<Vec<usize>>,
}

impl Layout {
    fn vertex_of(&self, var: usize) -> usize {
        if var < self.root {
            var
        } else {
            var + 1
        }
    }

    fn successors(&self, a: &Assignment) -> Vec<Option<usize>> {
        (0..self.var_of.len())
            .map(|v| self.var_of[v].map(|var| self.neighbors[v][a.get(var)]))
            .collect()
    }

    /// Clause forbidding every vertex of `cycle` from pointing at its successor.
    fn cycle_clause(&self, cycle: &[usize]) -> Clause {
        let mut wanted: Vec<(usize, usize)> = cycle
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let succ = cycle[(i + 1) % cycle.len()];
                let idx = self.neighbors[v].binary_search(&succ).expect("cycle follows edges");
                (self.var_of[v].expect("cycles avoid the root"), idx)
            })
            .collect();
        wanted.sort_unstable();
        let scope: Vec<usize> = wanted.iter().map(|w| w.0).collect();
        let values: Vec<usize> = wanted.iter().map(|w| w.1).collect();
        Clause::from_callback(
            ClauseKey::Cycle(cycle.to_vec()),
            scope,
            Arc::new(move |vals: &[usize]| vals != values.as_slice()),
        )
    }
}

struct CycleOracle {
    layout: Layout,
}

impl ViolationOracle for CycleOracle {
    fn violated(&self, a: &Assignment) -> Vec<Clause> {
        functional_cycles(&self.layout.successors(a))
            .iter()
            .map(|c| self.layout.cycle_clause(c))
            .collect()
    }

    fn universe(&self) -> Option<Vec<Clause>> {
        let allowed: Vec<bool> = (0..self.layout.neighbors.len()).map(|v| v != self.layout.root).collect();
        let cycles = simple_cycles(&self.layout.neighbors, &allowed, UNIVERSE_LIMIT)?;
        Some(cycles.iter().map(|c| self.layout.cycle_clause(c)).collect())
    }
}

/// Whether `parents` is a spanning arborescence of `g` directed at `root`.
pub fn is_arborescence(g: &Graph, root: usize, parents: &[Option<usize>]) -> bool {
    if parents.len() != g.n() || root >= g.n() || parents[root].is_some() {
        return false;
    }
    let adj = g.adjacency();
    for v in 0..g.n() {
        if v == root {
            continue;
        }
        let mut u = v;
        for _ in 0..g.n() {
            if u == root {
                break;
            }
            match parents[u] {
                Some(p) if adj[u].binary_search(&p).is_ok() => u = p,
                _ => return false,
            }
        }
        if u != root {
            return false;
        }
    }
    true
}

/// Encodes spanning arborescences of the connected undirected graph `g`
/// directed towards `root`. Variable for non-root vertex `v` ranges uniformly
/// over its sorted neighbours; clauses are keyed by the pointer cycle they forbid.
pub fn encode_arborescence(g: &Graph, root: usize) -> Result<Encoded, ProblemError> {
    if g.is_directed() {
        return Err(ProblemError::WrongKind("undirected"));
    }
    if root >= g.n() {
        return Err(ProblemError::MissingRoot);
    }
    if !g.is_connected() {
        return Err(ProblemError::Disconnected);
    }
    let neighbors = g.adjacency();
    let mut var_of = vec![None; g.n()];
    let mut domains = Vec::with_capacity(g.n().saturating_sub(1));
    for v in (0..g.n()).filter(|&v| v != root) {
        var_of[v] = Some(domains.len());
        domains.push(DomainDist::uniform(neighbors[v].iter().map(|&w| w as i64).collect())?);
    }
    let layout = Layout {
        root,
        var_of,
        neighbors,
    };
    let decode_layout = layout.clone();
    let n = g.n();
    let decoder = Arc::new(move |a: &Assignment| {
        let mut parents = vec![None; n];
        for var in 0..a.len() {
            let v = decode_layout.vertex_of(var);
            parents[v] = Some(decode_layout.neighbors[v][a.get(var)]);
        }
        DecodedObject::Arborescence(parents)
    });
    Ok(Encoded {
        name: "arborescence",
        instance: Instance::with_oracle(domains, Arc::new(CycleOracle { layout })),
        decoder,
        sampler: SamplerKind::Extremal,
    })
}
