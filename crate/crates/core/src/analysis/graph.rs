use serde::Serialize;

use super::AnalysisError;

/// Default cap on the vertex count for independent-set enumeration.
pub const DEFAULT_SET_CAP: usize = 40;

/// Largest vertex count the bitmask enumerator supports.
const MASK_BITS: usize = 64;

/// Simple undirected graph on clause positions `0..m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DependencyGraph {
    neighbors: Vec<Vec<usize>>,
}

impl DependencyGraph {
    /// Builds the graph from an edge list. Duplicate edges are merged.
    pub fn new(m: usize, edges: &[(usize, usize)]) -> Result<Self, AnalysisError> {
        let mut neighbors = vec![Vec::new(); m];
        for &(a, b) in edges {
            if a == b {
                return Err(AnalysisError::InvalidGraph(format!("self-loop at {a}")));
            }
            if a >= m || b >= m {
                return Err(AnalysisError::InvalidGraph(format!(
                    "edge ({a}, {b}) outside 0..{m}"
                )));
            }
            neighbors[a].push(b);
            neighbors[b].push(a);
        }
        for list in &mut neighbors {
            list.sort_unstable();
            list.dedup();
        }
        Ok(DependencyGraph { neighbors })
    }

    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }

    pub fn neighbors(&self, k: usize) -> &[usize] {
        &self.neighbors[k]
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.neighbors[a].binary_search(&b).is_ok()
    }

    /// Edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(a, ns)| ns.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
            .collect()
    }

    pub fn max_degree(&self) -> usize {
        self.neighbors.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &a)| set[i + 1..].iter().all(|&b| a != b && !self.adjacent(a, b)))
    }

    /// Membership mask of the closed neighbourhood of `set`.
    pub fn closed_neighborhood(&self, set: &[usize]) -> Vec<bool> {
        let mut mark = vec![false; self.len()];
        for &k in set {
            mark[k] = true;
            for &l in &self.neighbors[k] {
                mark[l] = true;
            }
        }
        mark
    }

    /// The subgraph induced on the unmarked vertices, with the original index
    /// of each remaining vertex.
    pub fn without(&self, removed: &[bool]) -> (DependencyGraph, Vec<usize>) {
        let kept: Vec<usize> = (0..self.len()).filter(|&k| !removed[k]).collect();
        let mut position = vec![usize::MAX; self.len()];
        for (i, &k) in kept.iter().enumerate() {
            position[k] = i;
        }
        let neighbors = kept
            .iter()
            .map(|&k| {
                self.neighbors[k]
                    .iter()
                    .filter(|&&l| !removed[l])
                    .map(|&l| position[l])
                    .collect()
            })
            .collect();
        (DependencyGraph { neighbors }, kept)
    }

    fn closed_masks(&self) -> Vec<u64> {
        self.neighbors
            .iter()
            .enumerate()
            .map(|(k, ns)| ns.iter().fold(1u64 << k, |m, &l| m | (1u64 << l)))
            .collect()
    }
}

/// Independent sets in lexicographic order of their sorted vertex lists,
/// starting with the empty set.
pub struct IndependentSets {
    closed: Vec<u64>,
    /// Chosen vertices with the blocked mask after choosing each.
    stack: Vec<(usize, u64)>,
    started: bool,
    done: bool,
}

/// Streams the independent sets of `g`. Fails when `g` has more than `cap`
/// vertices (the cap is clamped to 64).
pub fn independent_sets(g: &DependencyGraph, cap: usize) -> Result<IndependentSets, AnalysisError> {
    let cap = cap.min(MASK_BITS);
    if g.len() > cap {
        return Err(AnalysisError::CapExceeded {
            what: "independent-set enumeration",
            size: g.len() as u128,
            cap: cap as u128,
        });
    }
    Ok(IndependentSets {
        closed: g.closed_masks(),
        stack: Vec::new(),
        started: false,
        done: false,
    })
}

impl IndependentSets {
    fn blocked(&self) -> u64 {
        self.stack.last().map_or(0, |s| s.1)
    }

    fn next_allowed(&self, from: usize, blocked: u64) -> Option<usize> {
        (from..self.closed.len()).find(|&v| blocked & (1u64 << v) == 0)
    }

    fn push(&mut self, v: usize, blocked: u64) -> Vec<usize> {
        self.stack.push((v, blocked | self.closed[v]));
        self.stack.iter().map(|s| s.0).collect()
    }
}

impl Iterator for IndependentSets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(Vec::new());
        }
        let from = self.stack.last().map_or(0, |s| s.0 + 1);
        let blocked = self.blocked();
        if let Some(v) = self.next_allowed(from, blocked) {
            return Some(self.push(v, blocked));
        }
        while let Some((u, _)) = self.stack.pop() {
            let blocked = self.blocked();
            if let Some(v) = self.next_allowed(u + 1, blocked) {
                return Some(self.push(v, blocked));
            }
        }
        self.done = true;
        None
    }
}
