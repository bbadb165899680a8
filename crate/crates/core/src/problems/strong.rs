//! Strong orientations: a Boolean per edge and a clause per proper vertex
//! set forbidding it from being a minimal cluster (no edge leaves it and it
//! is strongly connected). Sampling can take time exponential in the size
//! of the graph, for instance on ladders.

use std::sync::Arc;

use super::root_connected::{is_closed_strong, sink_components};
use super::sink_free::{oriented_arcs, signed_orientation};
use super::{nonempty_subsets, DecodedObject, Encoded, Graph, ProblemError, SamplerKind, UNIVERSE_LIMIT};
use crate::instance::{Assignment, Clause, ClauseKey, DomainDist, Instance, ViolationOracle};

struct StrongOracle {
    graph: Graph,
}

impl StrongOracle {
    fn clause(&self, set: Vec<usize>) -> Clause {
        let edges = self.graph.edges();
        let scope: Vec<usize> = (0..edges.len())
            .filter(|&e| set.binary_search(&edges[e].0).is_ok() || set.binary_search(&edges[e].1).is_ok())
            .collect();
        let scoped: Vec<(usize, usize)> = scope.iter().map(|&e| edges[e]).collect();
        let members = set.clone();
        Clause::from_callback(
            ClauseKey::Vertices(set),
            scope,
            Arc::new(move |vals: &[usize]| {
                let arcs: Vec<(usize, usize)> = scoped
                    .iter()
                    .zip(vals)
                    .map(|(&(u, v), &x)| if x == 1 { (u, v) } else { (v, u) })
                    .collect();
                !is_closed_strong(&members, &arcs)
            }),
        )
    }
}

impl ViolationOracle for StrongOracle {
    fn violated(&self, a: &Assignment) -> Vec<Clause> {
        let arcs = oriented_arcs(&self.graph, &signed_orientation(a));
        sink_components(self.graph.n(), &arcs, None)
            .into_iter()
            .map(|s| self.clause(s))
            .collect()
    }

    fn universe(&self) -> Option<Vec<Clause>> {
        let all: Vec<usize> = (0..self.graph.n()).collect();
        let sets = nonempty_subsets(&all, UNIVERSE_LIMIT)?;
        Some(
            sets.into_iter()
                .filter(|s| s.len() < all.len())
                .map(|s| self.clause(s))
                .collect(),
        )
    }
}

/// Whether the signed orientation of `g` is strongly connected.
pub fn is_strong_orientation(g: &Graph, signed: &[i64]) -> bool {
    signed.len() == g.edges().len() && sink_components(g.n(), &oriented_arcs(g, signed), None).is_empty()
}

/// Encodes uniformly random strong orientations of a connected, bridgeless
/// undirected graph.
pub fn encode_strong_orientation(g: &Graph) -> Result<Encoded, ProblemError> {
    if g.is_directed() {
        return Err(ProblemError::WrongKind("undirected"));
    }
    if !g.is_connected() {
        return Err(ProblemError::Disconnected);
    }
    if let Some(&e) = g.bridges().first() {
        return Err(ProblemError::Bridged(e));
    }
    let domains = vec![DomainDist::fair_coin(); g.edges().len()];
    Ok(Encoded {
        name: "strong",
        instance: Instance::with_oracle(domains, Arc::new(StrongOracle { graph: g.clone() })),
        decoder: Arc::new(|a| DecodedObject::Orientation(signed_orientation(a))),
        sampler: SamplerKind::Extremal,
    })
}
