//! Root-connected subgraphs by cluster popping: a Boolean per arc, and a
//! clause per vertex set forbidding it from being a minimal cluster (a set
//! without the root that no kept arc leaves, with no smaller such subset).

use std::sync::Arc;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use super::{nonempty_subsets, DecodedObject, Encoded, Graph, ProblemError, SamplerKind, UNIVERSE_LIMIT};
use crate::instance::{Assignment, Clause, ClauseKey, DomainDist, Instance, ViolationOracle};

/// Sink strongly connected components of the digraph on `0..n` with the
/// given arcs, excluding the component of `exclude`, each sorted, in
/// ascending order. With `exclude = None` and a single component, that
/// component is not reported either.
pub(crate) fn sink_components(n: usize, arcs: &[(usize, usize)], exclude: Option<usize>) -> Vec<Vec<usize>> {
    let mut dg: DiGraph<(), ()> = DiGraph::with_capacity(n, arcs.len());
    for _ in 0..n {
        dg.add_node(());
    }
    for &(u, v) in arcs {
        dg.add_edge(NodeIndex::new(u), NodeIndex::new(v), ());
    }
    let sccs = tarjan_scc(&dg);
    if exclude.is_none() && sccs.len() <= 1 {
        return Vec::new();
    }
    let mut comp = vec![0usize; n];
    for (i, scc) in sccs.iter().enumerate() {
        for node in scc {
            comp[node.index()] = i;
        }
    }
    let mut is_sink = vec![true; sccs.len()];
    for &(u, v) in arcs {
        if comp[u] != comp[v] {
            is_sink[comp[u]] = false;
        }
    }
    let mut out: Vec<Vec<usize>> = sccs
        .iter()
        .enumerate()
        .filter(|&(i, _)| is_sink[i] && exclude.is_none_or(|r| comp[r] != i))
        .map(|(_, scc)| {
            let mut vs: Vec<usize> = scc.iter().map(|x| x.index()).collect();
            vs.sort_unstable();
            vs
        })
        .collect();
    out.sort();
    out
}

/// Whether `set` is closed under the arcs (none leaves it) and strongly
/// connected by the arcs inside it.
pub(crate) fn is_closed_strong(set: &[usize], arcs: &[(usize, usize)]) -> bool {
    let inside = |v: usize| set.binary_search(&v).is_ok();
    let mut internal = Vec::new();
    for &(u, v) in arcs {
        if inside(u) {
            if !inside(v) {
                return false;
            }
            internal.push((u, v));
        }
    }
    let reach = |forward: bool| {
        let mut seen = vec![false; set.len()];
        seen[0] = true;
        let mut stack = vec![set[0]];
        while let Some(x) = stack.pop() {
            for &(u, v) in &internal {
                let (from, to) = if forward { (u, v) } else { (v, u) };
                if from == x {
                    let i = set.binary_search(&to).expect("internal arc");
                    if !seen[i] {
                        seen[i] = true;
                        stack.push(to);
                    }
                }
            }
        }
        seen.iter().all(|&s| s)
    };
    reach(true) && reach(false)
}

fn kept_arcs(g: &Graph, a: &Assignment) -> Vec<(usize, usize)> {
    g.edges()
        .iter()
        .zip(a.as_slice())
        .filter(|(_, &x)| x == 1)
        .map(|(&arc, _)| arc)
        .collect()
}

/// Minimal clusters of the subgraph with the given arcs.
pub fn minimal_clusters(g: &Graph, root: usize, arcs: &[(usize, usize)]) -> Vec<Vec<usize>> {
    sink_components(g.n(), arcs, Some(root))
}

struct ClusterOracle {
    graph: Graph,
    root: usize,
}

impl ClusterOracle {
    fn clause(&self, set: Vec<usize>) -> Clause {
        let scope: Vec<usize> = (0..self.graph.edges().len())
            .filter(|&e| set.binary_search(&self.graph.edges()[e].0).is_ok())
            .collect();
        let arcs: Vec<(usize, usize)> = scope.iter().map(|&e| self.graph.edges()[e]).collect();
        let members = set.clone();
        Clause::from_callback(
            ClauseKey::Vertices(set),
            scope,
            Arc::new(move |vals: &[usize]| {
                let kept: Vec<(usize, usize)> = arcs
                    .iter()
                    .zip(vals)
                    .filter(|(_, &x)| x == 1)
                    .map(|(&arc, _)| arc)
                    .collect();
                !is_closed_strong(&members, &kept)
            }),
        )
    }
}

impl ViolationOracle for ClusterOracle {
    fn violated(&self, a: &Assignment) -> Vec<Clause> {
        minimal_clusters(&self.graph, self.root, &kept_arcs(&self.graph, a))
            .into_iter()
            .map(|c| self.clause(c))
            .collect()
    }

    fn universe(&self) -> Option<Vec<Clause>> {
        let pool: Vec<usize> = (0..self.graph.n()).filter(|&v| v != self.root).collect();
        let sets = nonempty_subsets(&pool, UNIVERSE_LIMIT)?;
        Some(sets.into_iter().map(|s| self.clause(s)).collect())
    }
}

/// Whether every vertex reaches `root` using `arcs`.
pub fn is_root_connected(n: usize, root: usize, arcs: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut stack = vec![root];
    while let Some(x) = stack.pop() {
        for &(u, v) in arcs {
            if v == x && !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Encodes root-connected spanning subgraphs of the digraph `g`: each arc is
/// kept independently with probability 1/2, conditioned on every vertex
/// reaching `root`.
pub fn encode_root_connected(g: &Graph, root: usize) -> Result<Encoded, ProblemError> {
    if !g.is_directed() {
        return Err(ProblemError::WrongKind("directed"));
    }
    if root >= g.n() {
        return Err(ProblemError::MissingRoot);
    }
    if let Some(c) = minimal_clusters(g, root, g.edges()).first() {
        return Err(ProblemError::NotRootConnected(c[0]));
    }
    let domains = vec![DomainDist::fair_coin(); g.edges().len()];
    let decode_graph = g.clone();
    Ok(Encoded {
        name: "root-connected",
        instance: Instance::with_oracle(
            domains,
            Arc::new(ClusterOracle {
                graph: g.clone(),
                root,
            }),
        ),
        decoder: Arc::new(move |a| {
            let mut arcs = kept_arcs(&decode_graph, a);
            arcs.sort_unstable();
            DecodedObject::Subgraph(arcs)
        }),
        sampler: SamplerKind::Extremal,
    })
}
