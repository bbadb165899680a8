//! Shared fixtures and enumeration oracles for the integration tests.
//!
//! The oracles here work directly on graphs and plain Boolean formulas. They
//! never call the analysis module, so agreement with it is a real check.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use prs_core::engine::FixtureTable;
use prs_core::problems::{encode_sink_free, Encoded};
use prs_core::{DecodedObject, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub mod properties;

pub fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

/// The four-vertex graph whose listed edge directions form the reference
/// sink-free orientation of the worked example.
pub fn worked_graph() -> Graph {
    Graph::undirected(4, vec![(0, 1), (0, 2), (1, 2), (3, 1), (2, 3)]).unwrap()
}

pub fn worked() -> Encoded {
    encode_sink_free(&worked_graph()).unwrap()
}

/// The worked formula written out literally:
/// `(x1 | x2) & (!x1 | x3 | !x4) & (!x2 | !x3 | x5) & (x4 | !x5)`.
pub fn worked_clauses(x: &[bool]) -> [bool; 4] {
    [
        x[0] || x[1],
        !x[0] || x[2] || !x[3],
        !x[1] || !x[2] || x[4],
        x[3] || !x[4],
    ]
}

/// Satisfying assignments of the literal worked formula, and for each clause
/// the assignments where only that clause is false.
pub fn worked_oracle() -> (u32, [u32; 4]) {
    let mut sat = 0;
    let mut only = [0; 4];
    for mask in 0u32..32 {
        let x: Vec<bool> = (0..5).map(|i| mask >> i & 1 == 1).collect();
        let c = worked_clauses(&x);
        let falses: Vec<usize> = (0..4).filter(|&k| !c[k]).collect();
        match falses.as_slice() {
            [] => sat += 1,
            [k] => only[*k] += 1,
            _ => {}
        }
    }
    (sat, only)
}

/// The hand-drawn table of the worked transcript, columns from row 0.
pub fn drawn_table_columns() -> Vec<Vec<usize>> {
    vec![
        vec![1, 0, 0, 1, 0],
        vec![0, 1, 0, 0],
        vec![0, 1, 0, 1],
        vec![0, 1, 0, 1, 1],
        vec![1, 0, 1, 1],
    ]
}

/// The drawn table with the two cells the next resampling of the first
/// clause reads, chosen so the run ends satisfied at `(1, 0, 1, 1, 1)`.
pub fn completed_drawn_table() -> FixtureTable {
    let mut t = FixtureTable::new(drawn_table_columns());
    t.set(0, 5, 1, 0);
    t.set(1, 4, 0, 0);
    t
}

fn uniform(keys: impl IntoIterator<Item = String>) -> BTreeMap<String, f64> {
    let keys: BTreeSet<String> = keys.into_iter().collect();
    let p = 1.0 / keys.len() as f64;
    keys.into_iter().map(|k| (k, p)).collect()
}

fn signed(mask: u64, m: usize) -> Vec<i64> {
    (0..m)
        .map(|e| if mask >> e & 1 == 1 { e as i64 + 1 } else { -(e as i64 + 1) })
        .collect()
}

fn arcs_of(g: &Graph, mask: u64) -> Vec<(usize, usize)> {
    g.edges()
        .iter()
        .enumerate()
        .map(|(e, &(u, v))| if mask >> e & 1 == 1 { (u, v) } else { (v, u) })
        .collect()
}

fn reaches(n: usize, arcs: &[(usize, usize)], from: usize, to: usize) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(v) = stack.pop() {
        if v == to {
            return true;
        }
        for &(a, b) in arcs {
            if a == v && !seen[b] {
                seen[b] = true;
                stack.push(b);
            }
        }
    }
    false
}

/// Uniform distribution over sink-free orientations, by enumerating all
/// orientations.
pub fn sink_free_oracle(g: &Graph) -> BTreeMap<String, f64> {
    let m = g.edges().len();
    uniform((0..1u64 << m).filter_map(|mask| {
        let arcs = arcs_of(g, mask);
        let sink_free = (0..g.n()).all(|v| arcs.iter().any(|a| a.0 == v));
        sink_free.then(|| DecodedObject::Orientation(signed(mask, m)).canonical_key())
    }))
}

pub fn sink_free_count(g: &Graph) -> usize {
    sink_free_oracle(g).len()
}

/// Uniform distribution over arborescences towards `root`, by enumerating
/// every choice of parent.
pub fn arborescence_oracle(g: &Graph, root: usize) -> BTreeMap<String, f64> {
    let n = g.n();
    let choices: Vec<Vec<usize>> = (0..n).map(|v| if v == root { vec![] } else { g.neighbors(v) }).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let parents: Vec<Option<usize>> = (0..n).map(|v| choices[v].get(idx[v]).copied()).collect();
        let ok = (0..n).all(|v| {
            let mut w = v;
            for _ in 0..n {
                match parents[w] {
                    Some(p) => w = p,
                    None => break,
                }
            }
            w == root
        });
        if ok {
            out.push(DecodedObject::Arborescence(parents).canonical_key());
        }
        let mut v = 0;
        loop {
            if v == n {
                return uniform(out);
            }
            if choices[v].is_empty() {
                v += 1;
                continue;
            }
            idx[v] += 1;
            if idx[v] < choices[v].len() {
                break;
            }
            idx[v] = 0;
            v += 1;
        }
    }
}

/// Uniform distribution over arc subsets in which every vertex reaches the root.
pub fn root_connected_oracle(g: &Graph, root: usize) -> BTreeMap<String, f64> {
    let m = g.edges().len();
    uniform((0..1u64 << m).filter_map(|mask| {
        let mut kept: Vec<(usize, usize)> = (0..m).filter(|e| mask >> e & 1 == 1).map(|e| g.edges()[e]).collect();
        kept.sort();
        let ok = (0..g.n()).all(|v| reaches(g.n(), &kept, v, root));
        ok.then(|| DecodedObject::Subgraph(kept).canonical_key())
    }))
}

fn components(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], v: usize) -> usize {
        let mut r = v;
        while label[r] != r {
            r = label[r];
        }
        label[v] = r;
        r
    }
    for &(u, v) in edges {
        let (a, b) = (find(&mut label, u), find(&mut label, v));
        label[a] = b;
    }
    (0..n).map(|v| find(&mut label, v)).collect()
}

/// Whether every component of the spanning subgraph has as many edges as vertices.
pub fn all_unicyclic(n: usize, edges: &[(usize, usize)]) -> bool {
    let comp = components(n, edges);
    let mut vertices = BTreeMap::new();
    let mut edge_count = BTreeMap::new();
    for &c in &comp {
        *vertices.entry(c).or_insert(0) += 1;
    }
    for &(u, _) in edges {
        *edge_count.entry(comp[u]).or_insert(0) += 1;
    }
    vertices.iter().all(|(c, k)| edge_count.get(c) == Some(k))
}

pub fn component_count(n: usize, edges: &[(usize, usize)]) -> usize {
    components(n, edges).into_iter().collect::<BTreeSet<_>>().len()
}

/// Uniform distribution over bicircular bases, by enumerating edge subsets.
pub fn bicircular_oracle(g: &Graph) -> BTreeMap<String, f64> {
    let m = g.edges().len();
    uniform((0..1u64 << m).filter_map(|mask| {
        if mask.count_ones() as usize != g.n() {
            return None;
        }
        let mut basis: Vec<(usize, usize)> = (0..m)
            .filter(|e| mask >> e & 1 == 1)
            .map(|e| {
                let (u, v) = g.edges()[e];
                (u.min(v), u.max(v))
            })
            .collect();
        basis.sort();
        all_unicyclic(g.n(), &basis).then(|| DecodedObject::MatroidBasis(basis).canonical_key())
    }))
}

/// For every basis, the number of functions `v -> neighbour` without
/// 2-cycles whose edge set is that basis, with the basis component count.
pub fn bicircular_preimages(g: &Graph) -> BTreeMap<Vec<(usize, usize)>, (usize, usize)> {
    let n = g.n();
    let choices: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v)).collect();
    let total: usize = choices.iter().map(Vec::len).product();
    let mut out: BTreeMap<Vec<(usize, usize)>, (usize, usize)> = BTreeMap::new();
    for mut code in 0..total {
        let mut f = vec![0; n];
        for v in 0..n {
            f[v] = choices[v][code % choices[v].len()];
            code /= choices[v].len();
        }
        if (0..n).any(|v| f[f[v]] == v) {
            continue;
        }
        let mut edges: Vec<(usize, usize)> = (0..n).map(|v| (v.min(f[v]), v.max(f[v]))).collect();
        edges.sort();
        edges.dedup();
        let c = component_count(n, &edges);
        out.entry(edges).or_insert((0, c)).0 += 1;
    }
    out
}

/// Hard-core distribution, proportional to `lambda^|I|` over independent sets.
pub fn hardcore_oracle(g: &Graph, lambda: f64) -> BTreeMap<String, f64> {
    let n = g.n();
    let mut weights = BTreeMap::new();
    for mask in 0u64..1 << n {
        let independent = g.edges().iter().all(|&(u, v)| mask >> u & 1 == 0 || mask >> v & 1 == 0);
        if independent {
            let set: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
            weights.insert(
                DecodedObject::IndependentSet(set).canonical_key(),
                lambda.powi(mask.count_ones() as i32),
            );
        }
    }
    let z: f64 = weights.values().sum();
    weights.into_iter().map(|(k, w)| (k, w / z)).collect()
}

/// Strong orientations counted by checking mutual reachability directly.
pub fn strong_orientation_count(g: &Graph) -> usize {
    let m = g.edges().len();
    (0..1u64 << m)
        .filter(|&mask| {
            let arcs = arcs_of(g, mask);
            (1..g.n()).all(|v| reaches(g.n(), &arcs, 0, v) && reaches(g.n(), &arcs, v, 0))
        })
        .count()
}

/// Orientations whose only minimal cluster (a proper non-empty vertex set
/// with every crossing edge pointing in) is `{v}`.
pub fn only_corner_cluster_count(g: &Graph, v: usize) -> usize {
    let n = g.n();
    let m = g.edges().len();
    (0..1u64 << m)
        .filter(|&mask| {
            let arcs = arcs_of(g, mask);
            let clusters: Vec<u64> = (1..(1u64 << n) - 1)
                .filter(|&s| arcs.iter().all(|&(a, b)| !(s >> a & 1 == 1 && s >> b & 1 == 0)))
                .collect();
            let minimal: Vec<u64> = clusters
                .iter()
                .copied()
                .filter(|&s| !clusters.iter().any(|&t| t != s && t & s == t))
                .collect();
            minimal == vec![1u64 << v]
        })
        .count()
}

/// A connected graph on `n` vertices: a random spanning tree plus `extra`
/// further random edges.
pub fn random_connected_graph(n: usize, extra: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = BTreeSet::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        edges.insert((u, v));
    }
    let max_edges = n * (n - 1) / 2;
    let target = (n - 1 + extra).min(max_edges);
    while edges.len() < target {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v {
            edges.insert((u.min(v), u.max(v)));
        }
    }
    Graph::undirected(n, edges.into_iter().collect()).unwrap()
}
