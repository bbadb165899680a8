use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::ProblemError;

/// A simple graph or digraph on vertices `0..n`.
///
/// For undirected graphs the listed order of each edge is its reference
/// orientation (`u -> v` for the pair `(u, v)`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    #[serde(default)]
    directed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    root: Option<usize>,
}

impl Graph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>, directed: bool) -> Result<Self, ProblemError> {
        let mut seen = BTreeSet::new();
        for &(u, v) in &edges {
            if u >= vertices || v >= vertices {
                return Err(ProblemError::InvalidGraph(format!(
                    "edge ({u}, {v}) outside 0..{vertices}"
                )));
            }
            if u == v {
                return Err(ProblemError::InvalidGraph(format!("self-loop at {u}")));
            }
            let key = if directed { (u, v) } else { (u.min(v), u.max(v)) };
            if !seen.insert(key) {
                return Err(ProblemError::InvalidGraph(format!("parallel edge ({u}, {v})")));
            }
        }
        Ok(Graph {
            vertices,
            edges,
            directed,
            root: None,
        })
    }

    pub fn undirected(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self, ProblemError> {
        Self::new(vertices, edges, false)
    }

    pub fn with_root(mut self, root: usize) -> Result<Self, ProblemError> {
        if root >= self.vertices {
            return Err(ProblemError::InvalidGraph(format!("root {root} outside 0..{}", self.vertices)));
        }
        self.root = Some(root);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    /// Sorted neighbours (undirected) or out-neighbours (directed).
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut ns: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v && !self.directed {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        ns.sort_unstable();
        ns.dedup();
        ns
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.vertices).map(|v| self.neighbors(v)).collect()
    }

    /// Indices of the edges incident to `v`, ascending.
    pub fn incident_edges(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| self.edges[e].0 == v || self.edges[e].1 == v)
            .collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertices).map(|v| self.incident_edges(v).len()).max().unwrap_or(0)
    }

    /// Connectivity of the underlying undirected graph, skipping edge `skip`.
    fn connected_without(&self, skip: Option<usize>) -> bool {
        if self.vertices == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.vertices];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if Some(e) != skip {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        let mut seen = vec![false; self.vertices];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    pub fn is_connected(&self) -> bool {
        self.connected_without(None)
    }

    /// Edges whose removal disconnects a connected graph.
    pub fn bridges(&self) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| !self.connected_without(Some(e)))
            .collect()
    }

    /// The directed graph with both orientations of every edge.
    pub fn bidirected(&self) -> Graph {
        let mut arcs = Vec::with_capacity(2 * self.edges.len());
        for &(u, v) in &self.edges {
            arcs.push((u, v));
            arcs.push((v, u));
        }
        Graph {
            vertices: self.vertices,
            edges: arcs,
            directed: true,
            root: self.root,
        }
    }

    pub fn complete(n: usize) -> Graph {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph::undirected(n, edges).expect("complete graph is simple")
    }

    /// Cycle `0 -> 1 -> ... -> n-1 -> 0` (as reference orientation).
    pub fn cycle(n: usize) -> Graph {
        let edges = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::undirected(n, edges).expect("cycle needs n >= 3")
    }

    pub fn path(n: usize) -> Graph {
        let edges = (1..n).map(|i| (i - 1, i)).collect();
        Graph::undirected(n, edges).expect("path is simple")
    }

    /// Ladder with `rungs` rungs: vertices `2i`, `2i+1`, rungs `(2i, 2i+1)`
    /// and rails `(2i, 2i+2)`, `(2i+1, 2i+3)`.
    pub fn ladder(rungs: usize) -> Graph {
        let mut edges = Vec::new();
        for i in 0..rungs {
            edges.push((2 * i, 2 * i + 1));
            if i + 1 < rungs {
                edges.push((2 * i, 2 * i + 2));
                edges.push((2 * i + 1, 2 * i + 3));
            }
        }
        Graph::undirected(2 * rungs, edges).expect("ladder is simple")
    }

    /// Triangular prism: triangles `0 1 2` and `3 4 5` joined by `(i, i+3)`.
    pub fn prism() -> Graph {
        Graph::undirected(
            6,
            vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)],
        )
        .expect("prism is simple")
    }

    /// Parses the text edge-list format or a JSON graph object.
    ///
    /// Text format: optional header lines `vertices: N`, `directed: true`,
    /// `root: R`, then one `u v` pair per line (0-based). `#` starts a comment.
    pub fn parse(text: &str) -> Result<Graph, ProblemError> {
        if text.trim_start().starts_with('{') {
            let g: Graph = serde_json::from_str(text).map_err(|e| ProblemError::Parse(e.to_string()))?;
            let root = g.root;
            let mut checked = Graph::new(g.vertices, g.edges, g.directed)?;
            if let Some(r) = root {
                checked = checked.with_root(r)?;
            }
            return Ok(checked);
        }
        let mut vertices = None;
        let mut directed = false;
        let mut root = None;
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |what: &str| ProblemError::Parse(format!("line {}: {what}: {raw:?}", lineno + 1));
            if let Some((key, value)) = line.split_once(':') {
                let value = value.trim();
                match key.trim() {
                    "vertices" => vertices = Some(value.parse().map_err(|_| bad("bad vertex count"))?),
                    "directed" => directed = value.parse().map_err(|_| bad("bad boolean"))?,
                    "root" => root = Some(value.parse().map_err(|_| bad("bad root"))?),
                    _ => return Err(bad("unknown header")),
                }
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(bad("expected `u v`"));
            }
            let u: usize = parts[0].parse().map_err(|_| bad("bad vertex"))?;
            let v: usize = parts[1].parse().map_err(|_| bad("bad vertex"))?;
            edges.push((u, v));
        }
        let n = vertices.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0));
        let g = Graph::new(n, edges, directed)?;
        match root {
            Some(r) => g.with_root(r),
            None => Ok(g),
        }
    }
}
