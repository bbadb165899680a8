//! Encoders from graphs to sampling instances, and decoders from satisfying
//! assignments back to the combinatorial objects they represent.

mod arborescence;
mod bicircular;
mod graph;
mod hardcore;
mod root_connected;
mod sink_free;
mod strong;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::engine::{
    run_extremal, run_limited, ChoicePolicy, EngineError, NBasedRule, ResamplingTable, RunOutcome,
};
use crate::instance::{Assignment, Instance, InstanceError};

pub use arborescence::{encode_arborescence, is_arborescence};
pub use bicircular::{encode_bicircular, is_bicircular_basis, preferred_orientation};
pub use graph::Graph;
pub use hardcore::{
    cluster_certificate, clusters_of, encode_hardcore, encode_hardcore_exact, ClusterCertificate,
};
pub use root_connected::{encode_root_connected, is_root_connected, minimal_clusters};
pub use sink_free::{
    encode_sink_free, encode_sink_free_unchecked, find_sink_free_orientation, is_sink_free,
};
pub use strong::{encode_strong_orientation, is_strong_orientation};

/// Largest clause family an oracle-backed encoder will list explicitly.
pub const UNIVERSE_LIMIT: usize = 1 << 14;

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("graph file: {0}")]
    Parse(String),
    #[error("reference orientation has a sink at vertex {0}")]
    ReferenceHasSink(usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertex {0} cannot reach the root using all arcs")]
    NotRootConnected(usize),
    #[error("no basis: a component has fewer edges than vertices")]
    NoBasis,
    #[error("graph has a bridge (edge {0}), so no strong orientation exists")]
    Bridged(usize),
    #[error("encoding needs a root vertex")]
    MissingRoot,
    #[error("encoding needs an {0} graph")]
    WrongKind(&'static str),
    #[error("activity must be positive and finite, got {0}")]
    InvalidActivity(String),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// A decoded sample.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum DecodedObject {
    /// Signed 1-based edge numbers: `+e` keeps the reference orientation of
    /// edge `e`, `-e` reverses it.
    Orientation(Vec<i64>),
    /// Parent of each vertex; `None` at the root.
    Arborescence(Vec<Option<usize>>),
    /// Kept arcs, sorted.
    Subgraph(Vec<(usize, usize)>),
    /// Basis edges as sorted vertex pairs, sorted.
    MatroidBasis(Vec<(usize, usize)>),
    /// Sorted vertex set.
    IndependentSet(Vec<usize>),
    /// Raw domain values.
    Assignment(Vec<i64>),
}

impl DecodedObject {
    /// Compact canonical JSON, used as a key for empirical distributions.
    pub fn canonical_key(&self) -> String {
        serde_json::to_string(self).expect("decoded objects serialise")
    }

    /// Checks the object against its defining property on `g`: sink-free
    /// (or strong, with `strong`), an arborescence towards the root of `g`,
    /// root-connected, a bicircular basis, or an independent set.
    pub fn is_valid_for(&self, g: &Graph, strong: bool) -> bool {
        match self {
            DecodedObject::Orientation(s) if strong => is_strong_orientation(g, s),
            DecodedObject::Orientation(s) => is_sink_free(g, s),
            DecodedObject::Arborescence(p) => g.root().is_some_and(|r| is_arborescence(g, r, p)),
            DecodedObject::Subgraph(arcs) => {
                g.root().is_some_and(|r| is_root_connected(g.n(), r, arcs))
                    && arcs.iter().all(|a| g.edges().contains(a))
            }
            DecodedObject::MatroidBasis(b) => is_bicircular_basis(g, b),
            DecodedObject::IndependentSet(vs) => {
                let adj = g.adjacency();
                vs.iter().all(|&v| v < g.n() && adj[v].iter().all(|w| vs.binary_search(w).is_err()))
            }
            DecodedObject::Assignment(_) => true,
        }
    }
}

impl fmt::Display for DecodedObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_key())
    }
}

pub type Decoder = Arc<dyn Fn(&Assignment) -> DecodedObject + Send + Sync>;

/// Which sampler an encoding is meant for.
#[derive(Clone)]
pub enum SamplerKind {
    /// Extremal instance: any policy works.
    Extremal,
    /// Lopsided instance: the clause choice must follow this rule.
    Limited(Arc<dyn NBasedRule>),
}

/// An encoded problem: the instance, its decoder and its sampler.
#[derive(Clone)]
pub struct Encoded {
    pub name: &'static str,
    pub instance: Instance,
    pub decoder: Decoder,
    pub sampler: SamplerKind,
}

impl fmt::Debug for Encoded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Encoded")
            .field("name", &self.name)
            .field("instance", &self.instance)
            .finish()
    }
}

impl Encoded {
    pub fn decode(&self, a: &Assignment) -> DecodedObject {
        (self.decoder)(a)
    }

    /// Runs the encoding's sampler: the lowest-key policy for extremal
    /// encodings, the encoding's rule otherwise.
    pub fn sample(&self, table: &dyn ResamplingTable, max_iterations: u64) -> Result<RunOutcome, EngineError> {
        match &self.sampler {
            SamplerKind::Extremal => run_extremal(&self.instance, &ChoicePolicy::LowestId, table, max_iterations),
            SamplerKind::Limited(rule) => run_limited(&self.instance, rule.as_ref(), table, max_iterations),
        }
    }

    /// Runs with an explicit policy. Limited encodings only accept set-based
    /// rules, so the lowest and highest policies map to the matching rules.
    pub fn sample_with(
        &self,
        policy: &ChoicePolicy,
        table: &dyn ResamplingTable,
        max_iterations: u64,
    ) -> Result<RunOutcome, EngineError> {
        match &self.sampler {
            SamplerKind::Extremal => run_extremal(&self.instance, policy, table, max_iterations),
            SamplerKind::Limited(default) => {
                let rule: Arc<dyn NBasedRule> = match policy {
                    ChoicePolicy::LowestId => Arc::new(crate::engine::LowestKey),
                    ChoicePolicy::HighestId => Arc::new(crate::engine::HighestKey),
                    ChoicePolicy::Rule(r) => r.clone(),
                    _ => default.clone(),
                };
                run_limited(&self.instance, rule.as_ref(), table, max_iterations)
            }
        }
    }

    pub fn is_extremal(&self) -> bool {
        matches!(self.sampler, SamplerKind::Extremal)
    }
}

/// Vertices of the cycles of a partial function on `0..n`, each rotated to
/// start at its minimum vertex. `next[v] = None` marks a vertex with no
/// successor. Cycles are returned in increasing order of minimum vertex.
pub(crate) fn functional_cycles(next: &[Option<usize>]) -> Vec<Vec<usize>> {
    let n = next.len();
    // 0 = unvisited, 1 = on the current walk, 2 = finished.
    let mut state = vec![0u8; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if state[start] != 0 {
            continue;
        }
        let mut walk = Vec::new();
        let mut v = start;
        loop {
            if state[v] == 1 {
                let pos = walk.iter().position(|&w| w == v).expect("vertex is on the walk");
                let mut cycle = walk[pos..].to_vec();
                let min_pos = (0..cycle.len()).min_by_key(|&i| cycle[i]).expect("non-empty cycle");
                cycle.rotate_left(min_pos);
                cycles.push(cycle);
                break;
            }
            if state[v] == 2 {
                break;
            }
            state[v] = 1;
            walk.push(v);
            match next[v] {
                Some(w) => v = w,
                None => break,
            }
        }
        for w in walk {
            state[w] = 2;
        }
    }
    cycles.sort();
    cycles
}

/// Simple directed cycles (length at least 2) of the digraph with the given
/// out-neighbour lists, each starting at its minimum vertex, restricted to
/// vertices where `allowed` holds. Returns `None` if there are more than `limit`.
pub(crate) fn simple_cycles(out: &[Vec<usize>], allowed: &[bool], limit: usize) -> Option<Vec<Vec<usize>>> {
    fn extend(
        out: &[Vec<usize>],
        allowed: &[bool],
        start: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        found: &mut Vec<Vec<usize>>,
        limit: usize,
    ) -> bool {
        let v = *path.last().expect("path is non-empty");
        for &w in &out[v] {
            if w == start && path.len() >= 2 {
                found.push(path.clone());
                if found.len() > limit {
                    return false;
                }
            } else if w > start && allowed[w] && !on_path[w] {
                on_path[w] = true;
                path.push(w);
                let ok = extend(out, allowed, start, path, on_path, found, limit);
                path.pop();
                on_path[w] = false;
                if !ok {
                    return false;
                }
            }
        }
        true
    }
    let mut found = Vec::new();
    let mut on_path = vec![false; out.len()];
    for start in 0..out.len() {
        if !allowed[start] {
            continue;
        }
        let mut path = vec![start];
        on_path[start] = true;
        let ok = extend(out, allowed, start, &mut path, &mut on_path, &mut found, limit);
        on_path[start] = false;
        if !ok {
            return None;
        }
    }
    found.sort();
    Some(found)
}

/// Every subset of `pool` (ascending lists) that is non-empty, as sorted vectors,
/// or `None` when there are more than `limit`.
pub(crate) fn nonempty_subsets(pool: &[usize], limit: usize) -> Option<Vec<Vec<usize>>> {
    if pool.len() >= usize::BITS as usize || (1usize << pool.len()) - 1 > limit {
        return None;
    }
    Some(
        (1usize..1 << pool.len())
            .map(|mask| {
                pool.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect(),
    )
}
